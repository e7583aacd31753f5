#ifndef RDMF_SVD_HPP
#define RDMF_SVD_HPP

#include <vector>

#include "rdmf/dense_matrix.hpp"

namespace rdmf {

// Thin SVD m = U diag(S) V^T with k = min(rows, cols).
// U is rows x k, V is cols x k, both with orthonormal columns;
// S is non-negative and sorted non-increasing.
struct SvdResult {
    DenseMatrix u;
    std::vector<double> s;
    DenseMatrix v;
};

// One-sided (Hestenes) Jacobi SVD. The rotation side is chosen so the
// iterated matrix is tall; convergence when every column pair satisfies
// |a_p . a_q| <= 1e-12 * |a_p| |a_q|, capped at 100 sweeps.
// Throws NumericError carrying the residual if the cap is hit.
SvdResult svd(const DenseMatrix& m);

}  // namespace rdmf

#endif
