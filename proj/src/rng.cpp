#include "rdmf/rng.hpp"

#include <cmath>

#include "rdmf/error.hpp"

namespace rdmf {

std::uint64_t Rng::next_u64() {
    // splitmix64 (Steele, Lea, Flood 2014); public-domain reference constants.
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] keeps log finite.
    const double u1 = 1.0 - next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) throw NumericError("next_below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

DenseMatrix gaussian_matrix(Rng& rng, int rows, int cols, double std_dev) {
    if (std_dev < 0.0) throw NumericError("gaussian_matrix: negative std");
    DenseMatrix m(rows, cols);
    if (std_dev == 0.0) return m;
    for (long k = 0; k < m.size(); ++k) m.data()[k] = std_dev * rng.next_normal();
    return m;
}

}  // namespace rdmf
