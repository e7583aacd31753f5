#include "rdmf/objective.hpp"

#include <cmath>
#include <utility>

#include "rdmf/error.hpp"

namespace rdmf {

MaskMatrix MaskMatrix::from_matrix(DenseMatrix m) {
    long count = 0;
    for (long k = 0; k < m.size(); ++k) {
        const double e = m.data()[k];
        if (e != 0.0 && e != 1.0) {
            throw DataError("mask entries must be exactly 0 or 1, found " + std::to_string(e));
        }
        count += (e == 1.0);
    }
    return MaskMatrix{std::move(m), count};
}

MaskMatrix MaskMatrix::full(int rows, int cols) {
    return MaskMatrix{DenseMatrix::constant(rows, cols, 1.0),
                      static_cast<long>(rows) * cols};
}

const char* regularizer_name(Regularizer r) {
    switch (r) {
        case Regularizer::None: return "none";
        case Regularizer::TvL1: return "tvl1";
        case Regularizer::TvL2: return "tvl2";
        case Regularizer::TvQuad: return "tvquad";
    }
    return "?";
}

Regularizer regularizer_from_name(const std::string& name) {
    if (name == "none") return Regularizer::None;
    if (name == "tvl1") return Regularizer::TvL1;
    if (name == "tvl2") return Regularizer::TvL2;
    if (name == "tvquad") return Regularizer::TvQuad;
    throw ConfigError("unknown regularizer '" + name + "'");
}

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + " shape mismatch: " + shape_string(a) + " vs " +
                         shape_string(b));
    }
}

}  // namespace

double fidelity(const DenseMatrix& x, const DenseMatrix& xhat, const MaskMatrix& mask) {
    require_same_shape(x, xhat, "fidelity");
    require_same_shape(x, mask.omega, "fidelity mask");
    double s = 0.0;
    for (long k = 0; k < x.size(); ++k) {
        const double d = mask.omega.data()[k] * (x.data()[k] - xhat.data()[k]);
        s += d * d;
    }
    return s;
}

DenseMatrix fidelity_grad(const DenseMatrix& x, const DenseMatrix& xhat, const MaskMatrix& mask) {
    require_same_shape(x, xhat, "fidelity_grad");
    require_same_shape(x, mask.omega, "fidelity_grad mask");
    DenseMatrix g(x.rows(), x.cols());
    for (long k = 0; k < x.size(); ++k) {
        g.data()[k] = -2.0 * mask.omega.data()[k] * (x.data()[k] - xhat.data()[k]);
    }
    return g;
}

double tv_value(const DenseMatrix& w, Regularizer kind, double eps) {
    const int r = w.rows(), c = w.cols();
    if (kind == Regularizer::TvL1) {
        double s = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                s += std::abs(w((i + 1) % r, j) - w(i, j));
                s += std::abs(w(i, (j + 1) % c) - w(i, j));
            }
        }
        return s;
    }
    if (kind == Regularizer::TvL2) {
        double s = 0.0;
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                const double dx = w((i + 1) % r, j) - w(i, j);
                const double dy = w(i, (j + 1) % c) - w(i, j);
                s += std::sqrt(dx * dx + dy * dy + eps);
            }
        }
        return s;
    }
    throw StateError("tv_value supports TvL1/TvL2 only");
}

DenseMatrix tv_grad(const DenseMatrix& w, Regularizer kind, double eps) {
    const int r = w.rows(), c = w.cols();
    DenseMatrix g(r, c);
    if (kind == Regularizer::TvL1) {
        // d/dD sqrt(D^2 + eps) = D / sqrt(D^2 + eps), per difference.
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                const double dx = w((i + 1) % r, j) - w(i, j);
                const double dy = w(i, (j + 1) % c) - w(i, j);
                const double px = dx / std::sqrt(dx * dx + eps);
                const double py = dy / std::sqrt(dy * dy + eps);
                g(i, j) -= px + py;
                g((i + 1) % r, j) += px;
                g(i, (j + 1) % c) += py;
            }
        }
        return g;
    }
    if (kind == Regularizer::TvL2) {
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) {
                const double dx = w((i + 1) % r, j) - w(i, j);
                const double dy = w(i, (j + 1) % c) - w(i, j);
                const double inv = 1.0 / std::sqrt(dx * dx + dy * dy + eps);
                g(i, j) -= (dx + dy) * inv;
                g((i + 1) % r, j) += dx * inv;
                g(i, (j + 1) % c) += dy * inv;
            }
        }
        return g;
    }
    throw StateError("tv_grad supports TvL1/TvL2 only");
}

double tvquad_value(const DenseMatrix& w, const DenseMatrix& a) {
    if (w.rows() != w.cols()) {
        throw ShapeError("tvquad_value requires a square matrix, got " + shape_string(w));
    }
    require_same_shape(w, a, "tvquad");
    const DenseMatrix aw = matmul(a, w);
    const DenseMatrix wat = matmul_a_bt(w, a);
    double s = 0.0;
    for (long k = 0; k < aw.size(); ++k) s += aw.data()[k] * aw.data()[k];
    for (long k = 0; k < wat.size(); ++k) s += wat.data()[k] * wat.data()[k];
    return s;
}

DenseMatrix tvquad_grad(const DenseMatrix& w, const DenseMatrix& a) {
    if (w.rows() != w.cols()) {
        throw ShapeError("tvquad_grad requires a square matrix, got " + shape_string(w));
    }
    require_same_shape(w, a, "tvquad");
    const DenseMatrix ata = matmul_at_b(a, a);
    DenseMatrix g = add(matmul(w, ata), matmul(ata, w));
    g.scale(2.0);
    return g;
}

Objective::Objective(DenseMatrix data, MaskMatrix mask, Regularizer reg, double lambda,
                     double smoothing_eps)
    : data_(std::move(data)), mask_(std::move(mask)), reg_(reg), lambda_(lambda),
      eps_(smoothing_eps) {
    require_same_shape(data_, mask_.omega, "objective");
    if (lambda_ < 0.0) throw ConfigError("lambda must be >= 0");
    if (eps_ <= 0.0) throw ConfigError("smoothing eps must be > 0");
    if (reg_ == Regularizer::TvQuad && data_.rows() == data_.cols()) {
        diff_ = difference_matrix(data_.rows());
    }
}

double Objective::reg_value(const DenseMatrix& xhat) const {
    switch (reg_) {
        case Regularizer::None: return 0.0;
        case Regularizer::TvL1:
        case Regularizer::TvL2: return tv_value(xhat, reg_, eps_);
        case Regularizer::TvQuad:
            if (xhat.rows() != xhat.cols()) {
                throw ShapeError("TvQuad regularizer needs a square completion, got " +
                                 shape_string(xhat));
            }
            return tvquad_value(xhat, diff_);
    }
    return 0.0;
}

DenseMatrix Objective::reg_grad(const DenseMatrix& xhat) const {
    switch (reg_) {
        case Regularizer::None: return DenseMatrix(xhat.rows(), xhat.cols());
        case Regularizer::TvL1:
        case Regularizer::TvL2: return tv_grad(xhat, reg_, eps_);
        case Regularizer::TvQuad:
            if (xhat.rows() != xhat.cols()) {
                throw ShapeError("TvQuad regularizer needs a square completion, got " +
                                 shape_string(xhat));
            }
            return tvquad_grad(xhat, diff_);
    }
    return DenseMatrix(xhat.rows(), xhat.cols());
}

std::pair<double, DenseMatrix> Objective::total_loss(const DenseMatrix& xhat) const {
    double value = fidelity(data_, xhat, mask_);
    DenseMatrix grad = fidelity_grad(data_, xhat, mask_);
    if (reg_ != Regularizer::None && lambda_ != 0.0) {
        value += lambda_ * reg_value(xhat);
        grad.axpy(lambda_, reg_grad(xhat));
    }
    return {value, std::move(grad)};
}

double Objective::value(const DenseMatrix& xhat) const {
    double v = fidelity(data_, xhat, mask_);
    if (reg_ != Regularizer::None && lambda_ != 0.0) v += lambda_ * reg_value(xhat);
    return v;
}

}  // namespace rdmf
