#include "rdmf/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdmf/error.hpp"

namespace rdmf {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr int kMaxSweeps = 100;

// SVD of a tall matrix (rows >= cols) by Hestenes one-sided Jacobi:
// orthogonalize the columns of a working copy with plane rotations,
// accumulating the same rotations into V. On exit the working columns are
// sigma_j * u_j.
SvdResult svd_tall(const DenseMatrix& m) {
    const int rows = m.rows(), cols = m.cols();
    DenseMatrix a = m;
    DenseMatrix v = DenseMatrix::identity(cols);

    // Every column norm is bounded below by sigma_min, so anything this far
    // under the total mass is accumulated rotation noise, not data. Flushing
    // such columns to exact zero keeps noise-noise pairs (which stay mutually
    // "parallel" at O(1) ratio) from stalling the sweep.
    double frob2 = 0.0;
    for (int k = 0; k < rows; ++k)
        for (int j = 0; j < cols; ++j) frob2 += a(k, j) * a(k, j);
    const double noise_floor = std::sqrt(frob2) * 1e-15;

    double worst = 0.0;
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        worst = 0.0;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int k = 0; k < rows; ++k) {
                    const double x = a(k, p), y = a(k, q);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if (std::sqrt(app) <= noise_floor) {
                    for (int k = 0; k < rows; ++k) a(k, p) = 0.0;
                    continue;
                }
                if (std::sqrt(aqq) <= noise_floor) {
                    for (int k = 0; k < rows; ++k) a(k, q) = 0.0;
                    continue;
                }
                const double denom = std::sqrt(app) * std::sqrt(aqq);
                if (denom == 0.0) continue;  // a zero column is orthogonal to everything
                const double ratio = std::abs(apq) / denom;
                worst = std::max(worst, ratio);
                if (ratio <= kOrthTol) continue;
                converged = false;

                // Jacobi rotation zeroing the (p,q) Gram entry.
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int k = 0; k < rows; ++k) {
                    const double x = a(k, p), y = a(k, q);
                    a(k, p) = c * x - s * y;
                    a(k, q) = s * x + c * y;
                }
                for (int k = 0; k < cols; ++k) {
                    const double x = v(k, p), y = v(k, q);
                    v(k, p) = c * x - s * y;
                    v(k, q) = s * x + c * y;
                }
            }
        }
    }
    if (!converged) {
        throw NumericError("svd did not converge in " + std::to_string(kMaxSweeps) +
                           " sweeps, off-diagonal residual " + std::to_string(worst));
    }

    std::vector<double> sigma(cols);
    for (int j = 0; j < cols; ++j) {
        double s2 = 0.0;
        for (int k = 0; k < rows; ++k) s2 += a(k, j) * a(k, j);
        sigma[j] = std::sqrt(s2);
    }

    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return sigma[x] > sigma[y]; });

    SvdResult out;
    out.s.resize(cols);
    out.u = DenseMatrix(rows, cols);
    out.v = DenseMatrix(cols, cols);
    const double sigma_max = sigma[order[0]];
    const double null_cutoff = sigma_max * 1e-300;  // only exact-ish zero columns

    int filled = 0;
    for (int j = 0; j < cols; ++j) {
        const int src = order[j];
        out.s[j] = sigma[src];
        for (int k = 0; k < cols; ++k) out.v(k, j) = v(k, src);
        if (sigma[src] > null_cutoff && sigma[src] > 0.0) {
            const double inv = 1.0 / sigma[src];
            for (int k = 0; k < rows; ++k) out.u(k, j) = a(k, src) * inv;
            filled = j + 1;
        }
    }

    // Columns for (numerically) zero singular values carry no direction of
    // their own; complete U to an orthonormal set. Take the standard basis
    // vector farthest from the current span and Gram-Schmidt it in, twice
    // for stability.
    for (int j = filled; j < cols; ++j) {
        auto residual = [&](int cand, std::vector<double>& w) {
            w.assign(rows, 0.0);
            w[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (int prev = 0; prev < j; ++prev) {
                    double dot = 0.0;
                    for (int k = 0; k < rows; ++k) dot += w[k] * out.u(k, prev);
                    for (int k = 0; k < rows; ++k) w[k] -= dot * out.u(k, prev);
                }
            }
            double norm2 = 0.0;
            for (int k = 0; k < rows; ++k) norm2 += w[k] * w[k];
            return norm2;
        };
        int best_cand = 0;
        double best_norm2 = -1.0;
        std::vector<double> w;
        for (int cand = 0; cand < rows; ++cand) {
            const double n2 = residual(cand, w);
            if (n2 > best_norm2) {
                best_norm2 = n2;
                best_cand = cand;
            }
        }
        best_norm2 = residual(best_cand, w);
        const double inv = 1.0 / std::sqrt(best_norm2);
        for (int k = 0; k < rows; ++k) out.u(k, j) = w[k] * inv;
    }
    return out;
}

}  // namespace

SvdResult svd(const DenseMatrix& m) {
    if (!m.all_finite()) throw NumericError("svd: input has non-finite entries");
    if (m.rows() >= m.cols()) return svd_tall(m);
    SvdResult t = svd_tall(m.transposed());
    return SvdResult{std::move(t.v), std::move(t.s), std::move(t.u)};
}

}  // namespace rdmf
