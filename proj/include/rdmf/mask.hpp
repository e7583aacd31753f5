#ifndef RDMF_MASK_HPP
#define RDMF_MASK_HPP

#include <cstdint>

#include "rdmf/objective.hpp"

namespace rdmf {

// Observation mask with exactly round(missing_pct * rows * cols) zeros,
// chosen uniformly without replacement by a seeded shuffle. Same seed,
// same mask. Throws ConfigError when missing_pct is outside [0, 1].
MaskMatrix generate_mask(int rows, int cols, double missing_pct, std::uint64_t seed);

}  // namespace rdmf

#endif
