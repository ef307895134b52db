#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hgnn/rng.hpp"

namespace hgnn {

// Dense row-major 0/1 matrix. Used for adjacency structure and softmax masks.
class BinaryMatrix {
   public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool operator()(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
    void set(std::size_t r, std::size_t c, bool on = true) { bits_[r * cols_ + c] = on ? 1 : 0; }

    std::size_t count() const;
    std::size_t row_count(std::size_t r) const;
    BinaryMatrix transposed() const;
    bool symmetric() const;

    bool operator==(const BinaryMatrix&) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

namespace detail {

template <typename T>
struct Node {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> value;
    std::vector<T> grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> inputs;
    // Pushes this node's grad into its inputs' grads.
    std::function<void(Node&)> backward;

    bool is_leaf() const { return !backward; }
    std::vector<T>& ensure_grad() {
        if (grad.size() != value.size()) grad.assign(value.size(), T(0));
        return grad;
    }
};

}  // namespace detail

// Dense 2-D tensor taking part in reverse-mode differentiation. Copies share
// the underlying node, so a parameter handle held by a model and the same
// handle held by an optimizer refer to one buffer.
template <typename T>
class BasicTensor {
   public:
    using value_type = T;

    BasicTensor();

    static BasicTensor zeros(std::size_t rows, std::size_t cols, bool requires_grad = false);
    static BasicTensor full(std::size_t rows, std::size_t cols, T value, bool requires_grad = false);
    static BasicTensor from_values(std::size_t rows, std::size_t cols, std::vector<T> values,
                                  bool requires_grad = false);
    static BasicTensor from_rows(std::initializer_list<std::initializer_list<T>> rows,
                                 bool requires_grad = false);

    std::size_t rows() const { return node_->rows; }
    std::size_t cols() const { return node_->cols; }
    std::size_t size() const { return node_->value.size(); }
    std::string shape() const;

    std::span<const T> values() const { return node_->value; }
    std::span<T> mutable_values() { return node_->value; }
    T operator()(std::size_t r, std::size_t c) const { return node_->value[r * node_->cols + c]; }
    T item() const;

    bool requires_grad() const { return node_->requires_grad; }
    void set_requires_grad(bool on) { node_->requires_grad = on; }
    bool is_leaf() const { return node_->is_leaf(); }

    bool has_grad() const { return node_->grad.size() == node_->value.size() && !node_->value.empty(); }
    std::span<const T> grad() const { return node_->grad; }
    std::span<T> mutable_grad() { return node_->ensure_grad(); }
    void zero_grad();

    // Accumulates d(this)/d(leaf) into every reachable leaf with requires_grad.
    // This tensor must be 1x1.
    void backward() const;

    // Fresh leaf holding a copy of the values; no history.
    BasicTensor detach() const;

    template <typename U>
    BasicTensor<U> cast() const {
        std::vector<U> out(values().begin(), values().end());
        return BasicTensor<U>::from_values(rows(), cols(), std::move(out), requires_grad());
    }

    // Internal: used by op implementations.
    explicit BasicTensor(std::shared_ptr<detail::Node<T>> node) : node_(std::move(node)) {}
    const std::shared_ptr<detail::Node<T>>& node() const { return node_; }

   private:
    std::shared_ptr<detail::Node<T>> node_;
};

// Thread-local switch: while disabled, ops record no history. Used for
// inference so evaluation can run on frozen weights without building tapes.
bool grad_enabled();

class NoGradGuard {
   public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

   private:
    bool previous_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

enum class Reduction { kSum, kMean, kMax };

// Matrix product. Throws DimensionError naming both shapes on mismatch.
template <typename T>
BasicTensor<T> matmul(const BasicTensor<T>& a, const BasicTensor<T>& b);

// Elementwise a + b. b may also be a 1 x cols row, broadcast over a's rows.
template <typename T>
BasicTensor<T> add(const BasicTensor<T>& a, const BasicTensor<T>& b);

template <typename T>
BasicTensor<T> sub(const BasicTensor<T>& a, const BasicTensor<T>& b);

// Hadamard product.
template <typename T>
BasicTensor<T> mul(const BasicTensor<T>& a, const BasicTensor<T>& b);

// scale * a + shift, elementwise.
template <typename T>
BasicTensor<T> affine(const BasicTensor<T>& a, T scale, T shift = T(0));

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& a);

template <typename T>
BasicTensor<T> leaky_relu(const BasicTensor<T>& a, T slope);

template <typename T>
BasicTensor<T> sigmoid(const BasicTensor<T>& a);

// Natural log; DomainError on any non-positive entry.
template <typename T>
BasicTensor<T> log(const BasicTensor<T>& a);

// a^exponent elementwise for a > 0, or any a when exponent is a non-negative integer.
template <typename T>
BasicTensor<T> pow(const BasicTensor<T>& a, T exponent);

// Clamps into [lo, hi]; gradient is zero where clamping was active.
template <typename T>
BasicTensor<T> clamp(const BasicTensor<T>& a, T lo, T hi);

template <typename T>
BasicTensor<T> concat_cols(const BasicTensor<T>& a, const BasicTensor<T>& b);

template <typename T>
BasicTensor<T> transpose(const BasicTensor<T>& a);

// Rows [begin, end).
template <typename T>
BasicTensor<T> slice_rows(const BasicTensor<T>& a, std::size_t begin, std::size_t end);

// out[i][j] = col[i] + row[j] for an n x 1 column and a 1 x m row.
template <typename T>
BasicTensor<T> outer_sum(const BasicTensor<T>& col, const BasicTensor<T>& row);

// Softmax over the unmasked entries of each row. Masked entries are 0, and a
// row with no unmasked entries is all zeros.
template <typename T>
BasicTensor<T> row_softmax_masked(const BasicTensor<T>& a, const BinaryMatrix& mask);

// Sum of all entries as a 1x1 tensor.
template <typename T>
BasicTensor<T> sum(const BasicTensor<T>& a);

// Column-wise reduction over rows, giving 1 x cols. Max routes the gradient
// to the first maximal row of each column.
template <typename T>
BasicTensor<T> reduce_rows(const BasicTensor<T>& a, Reduction how);

// Glorot-uniform draw in [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))].
template <typename T>
BasicTensor<T> xavier_init(std::size_t rows, std::size_t cols, Rng& rng, bool requires_grad = true);

}  // namespace hgnn
