#ifndef RDMF_RNG_HPP
#define RDMF_RNG_HPP

#include <cstdint>

#include "rdmf/dense_matrix.hpp"

namespace rdmf {

// Deterministic 64-bit generator: splitmix64 for the integer stream,
// Box-Muller for normals. Chosen over std::mt19937/std::normal_distribution
// because the standard distributions are not pinned across library
// implementations; this stream is identical for identical seeds.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53 mantissa bits.
    double next_uniform();

    // Standard normal. Box-Muller produces pairs; the spare is cached,
    // so draw parity is part of the stream definition.
    double next_normal();

    // Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t next_below(std::uint64_t n);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// rows x cols matrix of i.i.d. N(0, std^2) entries drawn row-major.
DenseMatrix gaussian_matrix(Rng& rng, int rows, int cols, double std_dev);

}  // namespace rdmf

#endif
