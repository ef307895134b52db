#include "hgnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "hgnn/errors.hpp"

namespace hgnn {

std::size_t BinaryMatrix::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t BinaryMatrix::row_count(std::size_t r) const {
    const auto begin = bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_);
    return static_cast<std::size_t>(std::count(begin, begin + static_cast<std::ptrdiff_t>(cols_), std::uint8_t{1}));
}

BinaryMatrix BinaryMatrix::transposed() const {
    BinaryMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.set(c, r, (*this)(r, c));
    return out;
}

bool BinaryMatrix::symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r + 1; c < cols_; ++c)
            if ((*this)(r, c) != (*this)(c, r)) return false;
    return true;
}

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

namespace {

template <typename T>
using NodePtr = std::shared_ptr<detail::Node<T>>;

std::string shape_of(std::size_t r, std::size_t c) {
    std::ostringstream s;
    s << '[' << r << 'x' << c << ']';
    return s.str();
}

template <typename T>
void check_finite(const detail::Node<T>& node, const char* op) {
    for (const T v : node.value) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string("non-finite value produced by ") + op + " " +
                               shape_of(node.rows, node.cols));
        }
    }
}

// Creates the output node; wires history only if some input needs gradients.
template <typename T>
NodePtr<T> make_result(std::size_t rows, std::size_t cols, std::vector<T> value,
                       std::initializer_list<NodePtr<T>> inputs, const char* op) {
    auto node = std::make_shared<detail::Node<T>>();
    node->rows = rows;
    node->cols = cols;
    node->value = std::move(value);
    check_finite(*node, op);
    if (!g_grad_enabled) return node;
    for (const auto& in : inputs) {
        if (in->requires_grad) {
            node->requires_grad = true;
            break;
        }
    }
    if (node->requires_grad) node->inputs.assign(inputs.begin(), inputs.end());
    return node;
}

template <typename T>
void require_same_shape(const BasicTensor<T>& a, const BasicTensor<T>& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + a.shape() + " vs " + b.shape());
    }
}

// Unary elementwise op given value and local-derivative functions.
template <typename T, typename Fwd, typename Deriv>
BasicTensor<T> unary(const BasicTensor<T>& a, const char* op, Fwd fwd, Deriv deriv) {
    std::vector<T> out(a.size());
    const auto in = a.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(in[i]);
    auto node = make_result<T>(a.rows(), a.cols(), std::move(out), {a.node()}, op);
    if (node->requires_grad) {
        node->backward = [deriv](detail::Node<T>& self) {
            auto& src = *self.inputs[0];
            if (!src.requires_grad) return;
            auto& g = src.ensure_grad();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * deriv(src.value[i], self.value[i]);
        };
    }
    return BasicTensor<T>(node);
}

}  // namespace

template <typename T>
BasicTensor<T>::BasicTensor() : node_(std::make_shared<detail::Node<T>>()) {}

template <typename T>
BasicTensor<T> BasicTensor<T>::zeros(std::size_t rows, std::size_t cols, bool requires_grad) {
    return full(rows, cols, T(0), requires_grad);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::full(std::size_t rows, std::size_t cols, T value, bool requires_grad) {
    return from_values(rows, cols, std::vector<T>(rows * cols, value), requires_grad);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::from_values(std::size_t rows, std::size_t cols, std::vector<T> values,
                                           bool requires_grad) {
    if (values.size() != rows * cols) {
        throw DimensionError("tensor data length " + std::to_string(values.size()) + " does not match " +
                             shape_of(rows, cols));
    }
    auto node = std::make_shared<detail::Node<T>>();
    node->rows = rows;
    node->cols = cols;
    node->value = std::move(values);
    node->requires_grad = requires_grad;
    check_finite(*node, "tensor construction");
    return BasicTensor(node);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::from_rows(std::initializer_list<std::initializer_list<T>> rows,
                                         bool requires_grad) {
    const std::size_t n = rows.size();
    const std::size_t m = n == 0 ? 0 : rows.begin()->size();
    std::vector<T> values;
    values.reserve(n * m);
    for (const auto& row : rows) {
        if (row.size() != m) throw DimensionError("ragged rows in tensor literal");
        values.insert(values.end(), row.begin(), row.end());
    }
    return from_values(n, m, std::move(values), requires_grad);
}

template <typename T>
std::string BasicTensor<T>::shape() const {
    return shape_of(rows(), cols());
}

template <typename T>
T BasicTensor<T>::item() const {
    if (size() != 1) throw DimensionError("item() on non-scalar tensor " + shape());
    return node_->value[0];
}

template <typename T>
void BasicTensor<T>::zero_grad() {
    node_->grad.assign(node_->value.size(), T(0));
}

template <typename T>
void BasicTensor<T>::backward() const {
    if (rows() != 1 || cols() != 1) throw DimensionError("backward() requires a 1x1 loss, got " + shape());
    if (!requires_grad()) return;

    // Iterative post-order DFS gives a topological order.
    std::vector<detail::Node<T>*> order;
    std::unordered_set<detail::Node<T>*> seen;
    std::vector<std::pair<detail::Node<T>*, std::size_t>> stack{{node_.get(), 0}};
    seen.insert(node_.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->inputs.size()) {
            detail::Node<T>* child = node->inputs[next++].get();
            if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    for (auto* node : order) {
        if (!node->is_leaf()) node->grad.assign(node->value.size(), T(0));
    }
    node_->ensure_grad()[0] += T(1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (!(*it)->is_leaf()) (*it)->backward(**it);
    }
}

template <typename T>
BasicTensor<T> BasicTensor<T>::detach() const {
    return from_values(rows(), cols(), std::vector<T>(values().begin(), values().end()), false);
}

template <typename T>
BasicTensor<T> matmul(const BasicTensor<T>& a, const BasicTensor<T>& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions differ " + a.shape() + " x " + b.shape());
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    std::vector<T> out(m * n, T(0));
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < m; ++i) {
        T* row = out.data() + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const T aip = av[i * k + p];
            if (aip == T(0)) continue;
            const T* brow = bv.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += aip * brow[j];
        }
    }
    auto node = make_result<T>(m, n, std::move(out), {a.node(), b.node()}, "matmul");
    if (node->requires_grad) {
        node->backward = [m, k, n](detail::Node<T>& self) {
            auto& lhs = *self.inputs[0];
            auto& rhs = *self.inputs[1];
            const T* g = self.grad.data();
            if (lhs.requires_grad) {
                // dA = dC * B^T
                auto& ga = lhs.ensure_grad();
                for (std::size_t i = 0; i < m; ++i) {
                    const T* grow = g + i * n;
                    for (std::size_t p = 0; p < k; ++p) {
                        const T* brow = rhs.value.data() + p * n;
                        T acc = T(0);
                        for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
                        ga[i * k + p] += acc;
                    }
                }
            }
            if (rhs.requires_grad) {
                // dB = A^T * dC
                auto& gb = rhs.ensure_grad();
                for (std::size_t i = 0; i < m; ++i) {
                    const T* grow = g + i * n;
                    for (std::size_t p = 0; p < k; ++p) {
                        const T aip = lhs.value[i * k + p];
                        if (aip == T(0)) continue;
                        T* gbrow = gb.data() + p * n;
                        for (std::size_t j = 0; j < n; ++j) gbrow[j] += aip * grow[j];
                    }
                }
            }
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b) {
    const bool broadcast = b.rows() == 1 && a.rows() != 1 && b.cols() == a.cols();
    if (!broadcast) require_same_shape(a, b, "add");
    const std::size_t n = a.cols();
    std::vector<T> out(a.values().begin(), a.values().end());
    const auto bv = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += broadcast ? bv[i % n] : bv[i];
    auto node = make_result<T>(a.rows(), a.cols(), std::move(out), {a.node(), b.node()}, "add");
    if (node->requires_grad) {
        node->backward = [broadcast, n](detail::Node<T>& self) {
            auto& lhs = *self.inputs[0];
            auto& rhs = *self.inputs[1];
            if (lhs.requires_grad) {
                auto& g = lhs.ensure_grad();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
            }
            if (rhs.requires_grad) {
                auto& g = rhs.ensure_grad();
                for (std::size_t i = 0; i < self.grad.size(); ++i) g[broadcast ? i % n : i] += self.grad[i];
            }
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> sub(const BasicTensor<T>& a, const BasicTensor<T>& b) {
    return add(a, affine(b, T(-1)));
}

template <typename T>
BasicTensor<T> mul(const BasicTensor<T>& a, const BasicTensor<T>& b) {
    require_same_shape(a, b, "mul");
    std::vector<T> out(a.size());
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
    auto node = make_result<T>(a.rows(), a.cols(), std::move(out), {a.node(), b.node()}, "mul");
    if (node->requires_grad) {
        node->backward = [](detail::Node<T>& self) {
            auto& lhs = *self.inputs[0];
            auto& rhs = *self.inputs[1];
            if (lhs.requires_grad) {
                auto& g = lhs.ensure_grad();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * rhs.value[i];
            }
            if (rhs.requires_grad) {
                auto& g = rhs.ensure_grad();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * lhs.value[i];
            }
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> affine(const BasicTensor<T>& a, T scale, T shift) {
    return unary(
        a, "affine", [scale, shift](T x) { return scale * x + shift; }, [scale](T, T) { return scale; });
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& a) {
    return unary(
        a, "relu", [](T x) { return x > T(0) ? x : T(0); }, [](T x, T) { return x > T(0) ? T(1) : T(0); });
}

template <typename T>
BasicTensor<T> leaky_relu(const BasicTensor<T>& a, T slope) {
    return unary(
        a, "leaky_relu", [slope](T x) { return x > T(0) ? x : slope * x; },
        [slope](T x, T) { return x > T(0) ? T(1) : slope; });
}

template <typename T>
BasicTensor<T> sigmoid(const BasicTensor<T>& a) {
    return unary(
        a, "sigmoid",
        [](T x) {
            if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
            const T e = std::exp(x);
            return e / (T(1) + e);
        },
        [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
BasicTensor<T> log(const BasicTensor<T>& a) {
    for (const T v : a.values()) {
        if (!(v > T(0))) throw DomainError("log of non-positive value in " + a.shape());
    }
    return unary(
        a, "log", [](T x) { return std::log(x); }, [](T x, T) { return T(1) / x; });
}

template <typename T>
BasicTensor<T> pow(const BasicTensor<T>& a, T exponent) {
    const bool integral = exponent >= T(0) && std::floor(exponent) == exponent;
    if (!integral) {
        for (const T v : a.values()) {
            if (!(v > T(0))) throw DomainError("fractional power of non-positive value in " + a.shape());
        }
    }
    return unary(
        a, "pow", [exponent](T x) { return exponent == T(0) ? T(1) : std::pow(x, exponent); },
        [exponent](T x, T) {
            if (exponent == T(0)) return T(0);
            if (exponent == T(1)) return T(1);
            return exponent * std::pow(x, exponent - T(1));
        });
}

template <typename T>
BasicTensor<T> clamp(const BasicTensor<T>& a, T lo, T hi) {
    return unary(
        a, "clamp", [lo, hi](T x) { return std::clamp(x, lo, hi); },
        [lo, hi](T x, T) { return (x < lo || x > hi) ? T(0) : T(1); });
}

template <typename T>
BasicTensor<T> concat_cols(const BasicTensor<T>& a, const BasicTensor<T>& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("concat_cols: row counts differ " + a.shape() + " vs " + b.shape());
    }
    const std::size_t rows = a.rows(), ca = a.cols(), cb = b.cols(), cols = ca + cb;
    std::vector<T> out(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(a.values().begin() + static_cast<std::ptrdiff_t>(r * ca), ca, out.begin() + static_cast<std::ptrdiff_t>(r * cols));
        std::copy_n(b.values().begin() + static_cast<std::ptrdiff_t>(r * cb), cb,
                    out.begin() + static_cast<std::ptrdiff_t>(r * cols + ca));
    }
    auto node = make_result<T>(rows, cols, std::move(out), {a.node(), b.node()}, "concat_cols");
    if (node->requires_grad) {
        node->backward = [rows, ca, cb, cols](detail::Node<T>& self) {
            auto& lhs = *self.inputs[0];
            auto& rhs = *self.inputs[1];
            for (std::size_t r = 0; r < rows; ++r) {
                if (lhs.requires_grad) {
                    auto& g = lhs.ensure_grad();
                    for (std::size_t c = 0; c < ca; ++c) g[r * ca + c] += self.grad[r * cols + c];
                }
                if (rhs.requires_grad) {
                    auto& g = rhs.ensure_grad();
                    for (std::size_t c = 0; c < cb; ++c) g[r * cb + c] += self.grad[r * cols + ca + c];
                }
            }
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> transpose(const BasicTensor<T>& a) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<T> out(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j * m + i] = a(i, j);
    auto node = make_result<T>(n, m, std::move(out), {a.node()}, "transpose");
    if (node->requires_grad) {
        node->backward = [m, n](detail::Node<T>& self) {
            auto& src = *self.inputs[0];
            auto& g = src.ensure_grad();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) g[i * n + j] += self.grad[j * m + i];
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> slice_rows(const BasicTensor<T>& a, std::size_t begin, std::size_t end) {
    if (begin > end || end > a.rows()) {
        throw DimensionError("slice_rows: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                             ") outside " + a.shape());
    }
    const std::size_t n = a.cols();
    std::vector<T> out(a.values().begin() + static_cast<std::ptrdiff_t>(begin * n),
                       a.values().begin() + static_cast<std::ptrdiff_t>(end * n));
    auto node = make_result<T>(end - begin, n, std::move(out), {a.node()}, "slice_rows");
    if (node->requires_grad) {
        node->backward = [offset = begin * n](detail::Node<T>& self) {
            auto& g = self.inputs[0]->ensure_grad();
            for (std::size_t i = 0; i < self.grad.size(); ++i) g[offset + i] += self.grad[i];
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> outer_sum(const BasicTensor<T>& col, const BasicTensor<T>& row) {
    if (col.cols() != 1 || row.rows() != 1) {
        throw DimensionError("outer_sum: expected column and row, got " + col.shape() + " and " + row.shape());
    }
    const std::size_t m = col.rows(), n = row.cols();
    std::vector<T> out(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = col.values()[i] + row.values()[j];
    auto node = make_result<T>(m, n, std::move(out), {col.node(), row.node()}, "outer_sum");
    if (node->requires_grad) {
        node->backward = [m, n](detail::Node<T>& self) {
            auto& c = *self.inputs[0];
            auto& r = *self.inputs[1];
            if (c.requires_grad) {
                auto& g = c.ensure_grad();
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) g[i] += self.grad[i * n + j];
            }
            if (r.requires_grad) {
                auto& g = r.ensure_grad();
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) g[j] += self.grad[i * n + j];
            }
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> row_softmax_masked(const BasicTensor<T>& a, const BinaryMatrix& mask) {
    if (mask.rows() != a.rows() || mask.cols() != a.cols()) {
        throw DimensionError("row_softmax_masked: mask " + shape_of(mask.rows(), mask.cols()) +
                             " does not match " + a.shape());
    }
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<T> out(m * n, T(0));
    const auto av = a.values();
    for (std::size_t i = 0; i < m; ++i) {
        T peak = -std::numeric_limits<T>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (mask(i, j)) peak = std::max(peak, av[i * n + j]);
        if (peak == -std::numeric_limits<T>::infinity()) continue;
        T total = T(0);
        for (std::size_t j = 0; j < n; ++j) {
            if (!mask(i, j)) continue;
            out[i * n + j] = std::exp(av[i * n + j] - peak);
            total += out[i * n + j];
        }
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] /= total;
    }
    auto node = make_result<T>(m, n, std::move(out), {a.node()}, "row_softmax_masked");
    if (node->requires_grad) {
        node->backward = [m, n](detail::Node<T>& self) {
            auto& g = self.inputs[0]->ensure_grad();
            // Masked entries have y = 0, so they receive no gradient.
            for (std::size_t i = 0; i < m; ++i) {
                const T* y = self.value.data() + i * n;
                const T* gy = self.grad.data() + i * n;
                T dot = T(0);
                for (std::size_t j = 0; j < n; ++j) dot += y[j] * gy[j];
                for (std::size_t j = 0; j < n; ++j) g[i * n + j] += y[j] * (gy[j] - dot);
            }
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& a) {
    T total = T(0);
    for (const T v : a.values()) total += v;
    auto node = make_result<T>(1, 1, std::vector<T>{total}, {a.node()}, "sum");
    if (node->requires_grad) {
        node->backward = [](detail::Node<T>& self) {
            auto& g = self.inputs[0]->ensure_grad();
            for (auto& v : g) v += self.grad[0];
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> reduce_rows(const BasicTensor<T>& a, Reduction how) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0) throw DimensionError("reduce_rows on tensor with no rows");
    std::vector<T> out(n, T(0));
    std::vector<std::size_t> argmax(how == Reduction::kMax ? n : 0, 0);
    const auto av = a.values();
    if (how == Reduction::kMax) {
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = av[j];
            for (std::size_t i = 1; i < m; ++i) {
                if (av[i * n + j] > out[j]) {
                    out[j] = av[i * n + j];
                    argmax[j] = i;
                }
            }
        }
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) out[j] += av[i * n + j];
        if (how == Reduction::kMean)
            for (auto& v : out) v /= static_cast<T>(m);
    }
    auto node = make_result<T>(1, n, std::move(out), {a.node()}, "reduce_rows");
    if (node->requires_grad) {
        node->backward = [m, n, how, argmax = std::move(argmax)](detail::Node<T>& self) {
            auto& g = self.inputs[0]->ensure_grad();
            if (how == Reduction::kMax) {
                for (std::size_t j = 0; j < n; ++j) g[argmax[j] * n + j] += self.grad[j];
                return;
            }
            const T w = how == Reduction::kMean ? T(1) / static_cast<T>(m) : T(1);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) g[i * n + j] += w * self.grad[j];
        };
    }
    return BasicTensor<T>(node);
}

template <typename T>
BasicTensor<T> xavier_init(std::size_t rows, std::size_t cols, Rng& rng, bool requires_grad) {
    if (rows == 0 || cols == 0) throw DimensionError("xavier_init requires rows, cols >= 1");
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::vector<T> values(rows * cols);
    for (auto& v : values) v = static_cast<T>(rng.uniform(-bound, bound));
    // Rounding to float could land just outside the bound.
    const T limit = static_cast<T>(bound);
    for (auto& v : values) v = std::clamp(v, -limit, limit);
    return BasicTensor<T>::from_values(rows, cols, std::move(values), requires_grad);
}

#define HGNN_INSTANTIATE(T)                                                                          \
    template class BasicTensor<T>;                                                                   \
    template BasicTensor<T> matmul(const BasicTensor<T>&, const BasicTensor<T>&);                    \
    template BasicTensor<T> add(const BasicTensor<T>&, const BasicTensor<T>&);                       \
    template BasicTensor<T> sub(const BasicTensor<T>&, const BasicTensor<T>&);                       \
    template BasicTensor<T> mul(const BasicTensor<T>&, const BasicTensor<T>&);                       \
    template BasicTensor<T> affine(const BasicTensor<T>&, T, T);                                     \
    template BasicTensor<T> relu(const BasicTensor<T>&);                                             \
    template BasicTensor<T> leaky_relu(const BasicTensor<T>&, T);                                    \
    template BasicTensor<T> sigmoid(const BasicTensor<T>&);                                          \
    template BasicTensor<T> log(const BasicTensor<T>&);                                              \
    template BasicTensor<T> pow(const BasicTensor<T>&, T);                                           \
    template BasicTensor<T> clamp(const BasicTensor<T>&, T, T);                                      \
    template BasicTensor<T> concat_cols(const BasicTensor<T>&, const BasicTensor<T>&);               \
    template BasicTensor<T> transpose(const BasicTensor<T>&);                                        \
    template BasicTensor<T> slice_rows(const BasicTensor<T>&, std::size_t, std::size_t);             \
    template BasicTensor<T> outer_sum(const BasicTensor<T>&, const BasicTensor<T>&);                 \
    template BasicTensor<T> row_softmax_masked(const BasicTensor<T>&, const BinaryMatrix&);          \
    template BasicTensor<T> sum(const BasicTensor<T>&);                                              \
    template BasicTensor<T> reduce_rows(const BasicTensor<T>&, Reduction);                           \
    template BasicTensor<T> xavier_init(std::size_t, std::size_t, Rng&, bool);

HGNN_INSTANTIATE(float)
HGNN_INSTANTIATE(double)

#undef HGNN_INSTANTIATE

}  // namespace hgnn
