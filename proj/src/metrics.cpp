#include "rdmf/metrics.hpp"

#include <cmath>

#include "rdmf/error.hpp"
#include "rdmf/svd.hpp"

namespace rdmf {

double nmae(const DenseMatrix& x, const DenseMatrix& xhat, const MaskMatrix& mask) {
    if (!x.same_shape(xhat) || !x.same_shape(mask.omega)) {
        throw ShapeError("nmae shape mismatch");
    }
    const long complement = mask.missing_count();
    if (complement == 0) throw MetricError("nmae undefined: no unobserved entries");

    double x_min = x.data()[0], x_max = x.data()[0];
    for (long k = 1; k < x.size(); ++k) {
        x_min = std::min(x_min, x.data()[k]);
        x_max = std::max(x_max, x.data()[k]);
    }
    if (x_max <= x_min) throw MetricError("nmae undefined: constant original matrix");

    double abs_sum = 0.0;
    for (long k = 0; k < x.size(); ++k) {
        if (mask.omega.data()[k] == 0.0) abs_sum += std::abs(xhat.data()[k] - x.data()[k]);
    }
    return abs_sum / ((x_max - x_min) * static_cast<double>(complement));
}

double effective_rank(const DenseMatrix& m, bool* zero_flag) {
    if (zero_flag) *zero_flag = false;
    const std::vector<double> s = singular_values(m);
    const double s_max = s.empty() ? 0.0 : s.front();
    if (s_max == 0.0) {
        if (zero_flag) *zero_flag = true;
        return 0.0;
    }
    const double cutoff = 1e-12 * s_max;
    double total = 0.0;
    for (double v : s)
        if (v >= cutoff) total += v;
    double entropy = 0.0;
    for (double v : s) {
        if (v < cutoff) continue;  // 0 * ln 0 = 0
        const double p = v / total;
        entropy -= p * std::log(p);
    }
    return std::exp(entropy);
}

std::vector<double> singular_values(const DenseMatrix& m) {
    return svd(m).s;
}

}  // namespace rdmf
