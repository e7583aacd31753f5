#ifndef RDMF_METRICS_HPP
#define RDMF_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rdmf/dense_matrix.hpp"
#include "rdmf/factor_model.hpp"
#include "rdmf/objective.hpp"

namespace rdmf {

// One evaluated completion run, as it appears in the results CSV.
struct MetricRecord {
    double missing_pct = 0.0;
    Activation activation = Activation::Linear;
    Regularizer regularizer = Regularizer::None;
    double lambda = 0.0;
    int depth = 0;
    int m1 = 0;  // first hidden width
    int m2 = 0;  // last hidden width
    std::uint64_t seed = 0;
    double nmae = 0.0;
    double effective_rank = 0.0;
    long iterations = 0;
    double final_loss = 0.0;
    double wall_time_s = 0.0;
};

// Mean absolute error over the unobserved entries, normalized by the
// dynamic range of the original matrix:
//   NMAE = sum_{(i,j) not in Omega} |xhat_ij - x_ij| / ((x_max - x_min) |Omega^c|).
// Throws MetricError when the complement is empty or x is constant.
double nmae(const DenseMatrix& x, const DenseMatrix& xhat, const MaskMatrix& mask);

// exp(Shannon entropy) of the normalized singular-value distribution
// p_k = s_k / sum(s). Singular values below 1e-12 * s_max count as exact
// zeros. A zero matrix yields 0 and sets *zero_flag when given.
double effective_rank(const DenseMatrix& m, bool* zero_flag = nullptr);

// Non-negative singular values, sorted non-increasing.
std::vector<double> singular_values(const DenseMatrix& m);

}  // namespace rdmf

#endif
