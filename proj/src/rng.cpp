#include "hgnn/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hgnn/errors.hpp"

namespace hgnn {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below requires n > 0");
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
}

std::string Rng::state() const {
    std::ostringstream out;
    out << engine_ << ' ' << (has_spare_ ? 1 : 0) << ' ';
    out.precision(17);
    out << std::hexfloat << spare_;
    return out.str();
}

void Rng::set_state(const std::string& state) {
    std::istringstream in(state);
    int spare_flag = 0;
    std::string spare_text;
    in >> engine_ >> spare_flag >> spare_text;
    if (!in) throw FormatError("unreadable rng state");
    has_spare_ = spare_flag != 0;
    spare_ = std::strtod(spare_text.c_str(), nullptr);
}

}  // namespace hgnn
