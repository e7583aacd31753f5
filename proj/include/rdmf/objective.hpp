#ifndef RDMF_OBJECTIVE_HPP
#define RDMF_OBJECTIVE_HPP

#include <string>
#include <utility>

#include "rdmf/dense_matrix.hpp"

namespace rdmf {

// 0/1 observation mask. observed_count = number of ones.
struct MaskMatrix {
    DenseMatrix omega;
    long observed_count = 0;

    // Validates entries are exactly 0 or 1 and counts the ones.
    static MaskMatrix from_matrix(DenseMatrix m);
    static MaskMatrix full(int rows, int cols);

    int rows() const { return omega.rows(); }
    int cols() const { return omega.cols(); }
    long missing_count() const { return omega.size() - observed_count; }
};

enum class Regularizer { None, TvL1, TvL2, TvQuad };

const char* regularizer_name(Regularizer r);
Regularizer regularizer_from_name(const std::string& name);

// Masked squared Frobenius fidelity |Omega (.) (X - Xhat)|_F^2.
double fidelity(const DenseMatrix& x, const DenseMatrix& xhat, const MaskMatrix& mask);
// Gradient of fidelity w.r.t. Xhat: -2 Omega (.) (X - Xhat).
DenseMatrix fidelity_grad(const DenseMatrix& x, const DenseMatrix& xhat, const MaskMatrix& mask);

// Total-variation value with circulant (wrap-around) differences in both
// directions. Row differences D_x(i,j) = w(i+1,j) - w(i,j), column
// differences D_y(i,j) = w(i,j+1) - w(i,j), indices mod shape.
//   TvL1: sum |D_x| + |D_y|                 (exact, unsmoothed)
//   TvL2: sum sqrt(D_x^2 + D_y^2 + eps)     per pixel
double tv_value(const DenseMatrix& w, Regularizer kind, double eps);

// Gradient of the eps-smoothed TV value (TvL1 smoothed per difference as
// sqrt(D^2 + eps)).
DenseMatrix tv_grad(const DenseMatrix& w, Regularizer kind, double eps);

// Quadratic surrogate |A w|_F^2 + |w A^T|_F^2 with the circulant
// difference matrix a = difference_matrix(d). Square w only.
double tvquad_value(const DenseMatrix& w, const DenseMatrix& a);
// Exactly 2 w A^T A + 2 A^T A w.
DenseMatrix tvquad_grad(const DenseMatrix& w, const DenseMatrix& a);

// Full loss R = fidelity + lambda * regularizer, evaluated on a candidate
// completion Xhat. The gradient half of total_loss() is what feeds the
// factor model's backward() as upstream.
class Objective {
public:
    Objective(DenseMatrix data, MaskMatrix mask, Regularizer reg, double lambda,
              double smoothing_eps = 1e-8);

    std::pair<double, DenseMatrix> total_loss(const DenseMatrix& xhat) const;
    double value(const DenseMatrix& xhat) const;

    const DenseMatrix& data() const { return data_; }
    const MaskMatrix& mask() const { return mask_; }
    Regularizer regularizer() const { return reg_; }
    double lambda() const { return lambda_; }
    double smoothing_eps() const { return eps_; }

private:
    double reg_value(const DenseMatrix& xhat) const;
    DenseMatrix reg_grad(const DenseMatrix& xhat) const;

    DenseMatrix data_;
    MaskMatrix mask_;
    Regularizer reg_;
    double lambda_;
    double eps_;
    DenseMatrix diff_;  // cached difference matrix for TvQuad
};

}  // namespace rdmf

#endif
