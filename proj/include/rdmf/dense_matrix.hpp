#ifndef RDMF_DENSE_MATRIX_HPP
#define RDMF_DENSE_MATRIX_HPP

#include <string>
#include <vector>

namespace rdmf {

// Dense real matrix, row-major, double precision. The single carrier type
// for data matrices, factor weights, masks, difference operators and images.
//
// All reductions over entries are serial and left-to-right, so results are
// reproducible bit-for-bit between runs of the same binary.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols);  // zero-filled
    DenseMatrix(int rows, int cols, std::vector<double> entries);

    static DenseMatrix identity(int n);
    static DenseMatrix constant(int rows, int cols, double value);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long size() const { return static_cast<long>(rows_) * cols_; }

    double& operator()(int i, int j) { return entries_[static_cast<long>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return entries_[static_cast<long>(i) * cols_ + j]; }

    double* data() { return entries_.data(); }
    const double* data() const { return entries_.data(); }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    DenseMatrix transposed() const;

    void fill(double value);
    bool all_finite() const;
    double frobenius_norm() const;
    double max_abs() const;

    // In-place this += alpha * other. Shapes must match.
    void axpy(double alpha, const DenseMatrix& other);
    void scale(double alpha);

    bool operator==(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> entries_;
};

// a * b. Throws ShapeError on inner-dimension mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a^T * b without forming the transpose.
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);
// a * b^T without forming the transpose.
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scaled(const DenseMatrix& a, double alpha);

// Circulant forward-difference operator: row i holds +1 at i and -1 at
// (i+1) mod d. Annihilates constant vectors exactly. Requires d >= 2.
DenseMatrix difference_matrix(int d);

std::string shape_string(const DenseMatrix& m);

}  // namespace rdmf

#endif
