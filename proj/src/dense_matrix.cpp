#include "rdmf/dense_matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

#include "rdmf/error.hpp"

namespace rdmf {

namespace {

void require_positive_shape(int rows, int cols) {
    if (rows <= 0 || cols <= 0) {
        throw ShapeError("matrix shape must be positive, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    require_positive_shape(rows, cols);
    entries_.assign(static_cast<long>(rows) * cols, 0.0);
}

DenseMatrix::DenseMatrix(int rows, int cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require_positive_shape(rows, cols);
    if (static_cast<long>(entries_.size()) != size()) {
        throw ShapeError("entry count " + std::to_string(entries_.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
    }
}

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::constant(int rows, int cols, double value) {
    DenseMatrix m(rows, cols);
    m.fill(value);
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

void DenseMatrix::fill(double value) {
    for (double& e : entries_) e = value;
}

bool DenseMatrix::all_finite() const {
    for (double e : entries_)
        if (!std::isfinite(e)) return false;
    return true;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double e : entries_) s += e * e;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double e : entries_) m = std::max(m, std::abs(e));
    return m;
}

void DenseMatrix::axpy(double alpha, const DenseMatrix& other) {
    if (!same_shape(other)) {
        throw ShapeError("axpy shape mismatch: " + shape_string(*this) + " vs " +
                         shape_string(other));
    }
    const double* src = other.data();
    for (long k = 0; k < size(); ++k) entries_[k] += alpha * src[k];
}

void DenseMatrix::scale(double alpha) {
    for (double& e : entries_) e *= alpha;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul shape mismatch: " + shape_string(a) + " * " + shape_string(b));
    }
    const int m = a.rows(), p = a.cols(), n = b.cols();
    DenseMatrix c(m, n);
    // i-k-j order: for each output entry the k reduction runs in ascending
    // order, and the inner j loop vectorizes without reordering sums.
    for (int i = 0; i < m; ++i) {
        double* crow = c.data() + static_cast<long>(i) * n;
        for (int k = 0; k < p; ++k) {
            const double aik = a(i, k);
            const double* brow = b.data() + static_cast<long>(k) * n;
            for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_at_b shape mismatch: " + shape_string(a) + "^T * " +
                         shape_string(b));
    }
    const int m = a.cols(), p = a.rows(), n = b.cols();
    DenseMatrix c(m, n);
    for (int k = 0; k < p; ++k) {
        const double* arow = a.data() + static_cast<long>(k) * m;
        const double* brow = b.data() + static_cast<long>(k) * n;
        for (int i = 0; i < m; ++i) {
            double* crow = c.data() + static_cast<long>(i) * n;
            const double aki = arow[i];
            for (int j = 0; j < n; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_a_bt shape mismatch: " + shape_string(a) + " * " +
                         shape_string(b) + "^T");
    }
    const int m = a.rows(), p = a.cols(), n = b.rows();
    DenseMatrix c(m, n);
    for (int i = 0; i < m; ++i) {
        const double* arow = a.data() + static_cast<long>(i) * p;
        for (int j = 0; j < n; ++j) {
            const double* brow = b.data() + static_cast<long>(j) * p;
            double s = 0.0;
            for (int k = 0; k < p; ++k) s += arow[k] * brow[k];
            c(i, j) = s;
        }
    }
    return c;
}

namespace {

template <typename Op>
DenseMatrix zip(const DenseMatrix& a, const DenseMatrix& b, Op op, const char* name) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(name) + " shape mismatch: " + shape_string(a) + " vs " +
                         shape_string(b));
    }
    DenseMatrix c(a.rows(), a.cols());
    for (long k = 0; k < a.size(); ++k) c.data()[k] = op(a.data()[k], b.data()[k]);
    return c;
}

}  // namespace

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    return zip(a, b, [](double x, double y) { return x + y; }, "add");
}

DenseMatrix sub(const DenseMatrix& a, const DenseMatrix& b) {
    return zip(a, b, [](double x, double y) { return x - y; }, "sub");
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
    return zip(a, b, [](double x, double y) { return x * y; }, "hadamard");
}

DenseMatrix scaled(const DenseMatrix& a, double alpha) {
    DenseMatrix c = a;
    c.scale(alpha);
    return c;
}

DenseMatrix difference_matrix(int d) {
    if (d < 2) throw ShapeError("difference_matrix requires d >= 2, got " + std::to_string(d));
    DenseMatrix a(d, d);
    for (int i = 0; i < d; ++i) {
        a(i, i) = 1.0;
        a(i, (i + 1) % d) = -1.0;
    }
    return a;
}

std::string shape_string(const DenseMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace rdmf
