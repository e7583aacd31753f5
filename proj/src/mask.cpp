#include "rdmf/mask.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "rdmf/error.hpp"
#include "rdmf/rng.hpp"

namespace rdmf {

MaskMatrix generate_mask(int rows, int cols, double missing_pct, std::uint64_t seed) {
    if (!(missing_pct >= 0.0 && missing_pct <= 1.0))
        throw ConfigError("missing_pct must lie in [0, 1], got " + std::to_string(missing_pct));
    DenseMatrix omega = DenseMatrix::constant(rows, cols, 1.0);
    const long total = omega.size();
    const long missing = std::llround(missing_pct * static_cast<double>(total));

    std::vector<long> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0L);
    Rng rng(seed);
    // Fisher-Yates; only the first `missing` slots are consumed, but the
    // full pass keeps the draw count independent of missing_pct.
    for (long i = total - 1; i > 0; --i) {
        const auto j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    for (long k = 0; k < missing; ++k)
        omega.data()[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 0.0;
    return MaskMatrix::from_matrix(std::move(omega));
}

}  // namespace rdmf
