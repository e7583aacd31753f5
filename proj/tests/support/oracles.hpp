#ifndef RDMF_TESTS_ORACLES_HPP
#define RDMF_TESTS_ORACLES_HPP

// Independent reference implementations used to pin down expected values.
// Everything here is deliberately written in the most naive way possible
// (triple loops, explicit enumeration, closed forms) so that agreement
// with the library is meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rdmf/dense_matrix.hpp"
#include "rdmf/objective.hpp"
#include "rdmf/rng.hpp"
#include "rdmf/svd.hpp"

namespace oracles {

inline rdmf::DenseMatrix matmul_triple_loop(const rdmf::DenseMatrix& a,
                                            const rdmf::DenseMatrix& b) {
    rdmf::DenseMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

// Central finite difference of a scalar function of one matrix entry.
inline double central_diff(const std::function<double(rdmf::DenseMatrix&)>& f,
                           rdmf::DenseMatrix& m, int i, int j, double h = 1e-5) {
    const double saved = m(i, j);
    m(i, j) = saved + h;
    const double up = f(m);
    m(i, j) = saved - h;
    const double down = f(m);
    m(i, j) = saved;
    return (up - down) / (2.0 * h);
}

// Circulant forward differences, spelled out.
inline double dx_at(const rdmf::DenseMatrix& w, int i, int j) {
    return w((i + 1) % w.rows(), j) - w(i, j);
}
inline double dy_at(const rdmf::DenseMatrix& w, int i, int j) {
    return w(i, (j + 1) % w.cols()) - w(i, j);
}

inline double tv_l1_exact(const rdmf::DenseMatrix& w) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) s += std::abs(dx_at(w, i, j)) + std::abs(dy_at(w, i, j));
    return s;
}

inline double tv_l1_smoothed(const rdmf::DenseMatrix& w, double eps) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) {
            const double dx = dx_at(w, i, j);
            const double dy = dy_at(w, i, j);
            s += std::sqrt(dx * dx + eps) + std::sqrt(dy * dy + eps);
        }
    return s;
}

inline double tv_l2_smoothed(const rdmf::DenseMatrix& w, double eps) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) {
            const double dx = dx_at(w, i, j);
            const double dy = dy_at(w, i, j);
            s += std::sqrt(dx * dx + dy * dy + eps);
        }
    return s;
}

// Quadratic TV surrogate as a plain difference-stencil sum.
inline double tvquad_stencil(const rdmf::DenseMatrix& w) {
    double s = 0.0;
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j) {
            const double dx = dx_at(w, i, j);
            const double dy = dy_at(w, i, j);
            s += dx * dx + dy * dy;
        }
    return s;
}

inline double nmae_double_loop(const rdmf::DenseMatrix& x, const rdmf::DenseMatrix& xhat,
                               const rdmf::DenseMatrix& omega) {
    double lo = x(0, 0), hi = x(0, 0);
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) {
            lo = std::min(lo, x(i, j));
            hi = std::max(hi, x(i, j));
        }
    double acc = 0.0;
    long count = 0;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (omega(i, j) == 0.0) {
                acc += std::abs(xhat(i, j) - x(i, j));
                ++count;
            }
    if (count == 0 || hi <= lo) throw std::runtime_error("oracle nmae undefined");
    return acc / ((hi - lo) * static_cast<double>(count));
}

// Entropy-based effective rank straight from a singular-value list.
inline double effective_rank_from_spectrum(std::vector<double> s) {
    double mx = 0.0;
    for (double v : s) mx = std::max(mx, v);
    if (mx == 0.0) return 0.0;
    double total = 0.0;
    for (double& v : s) {
        if (v < 1e-12 * mx) v = 0.0;
        total += v;
    }
    double entropy = 0.0;
    for (double v : s) {
        if (v <= 0.0) continue;
        const double p = v / total;
        entropy -= p * std::log(p);
    }
    return std::exp(entropy);
}

// Matrix with a chosen spectrum: U diag(s) V^T with U, V orthonormal
// columns taken from the SVD of a seeded Gaussian matrix. A spectrum
// shorter than min(rows, cols) plants zeros for the remaining values.
inline rdmf::DenseMatrix matrix_with_spectrum(int rows, int cols, const std::vector<double>& s,
                                              std::uint64_t seed) {
    rdmf::Rng rng(seed);
    const rdmf::SvdResult basis = rdmf::svd(rdmf::gaussian_matrix(rng, rows, cols, 1.0));
    rdmf::DenseMatrix us = basis.u;
    const int k = std::min(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < k; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            us(i, j) *= jj < s.size() ? s[jj] : 0.0;
        }
    return rdmf::matmul_a_bt(us, basis.v);
}

// Eigenvalues of a symmetric 3x3 matrix by the trigonometric solution of
// the characteristic cubic; returned descending.
inline std::vector<double> symmetric3_eigenvalues(const rdmf::DenseMatrix& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    std::vector<double> eig(3);
    if (p1 == 0.0) {
        eig = {a(0, 0), a(1, 1), a(2, 2)};
    } else {
        const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
        const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                          (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        rdmf::DenseMatrix b = a;
        for (int i = 0; i < 3; ++i) b(i, i) -= q;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b(i, j) /= p;
        const double detb =
            b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
            b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
            b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
        const double r = std::min(1.0, std::max(-1.0, detb / 2.0));
        const double phi = std::acos(r) / 3.0;
        eig[0] = q + 2.0 * p * std::cos(phi);
        eig[2] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        eig[1] = 3.0 * q - eig[0] - eig[2];
    }
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

// Scalar recurrence h <- act(w*h + b) matching a constant-entry network.
inline double sigmoid_scalar(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Synthetic 4x4-blocked piecewise-constant image with quantized levels.
inline rdmf::DenseMatrix piecewise_constant_image(int d, std::uint64_t seed) {
    rdmf::Rng rng(seed);
    const int blocks = 4;
    const int bs = d / blocks;
    std::vector<double> level(static_cast<std::size_t>(blocks) * blocks);
    for (double& v : level) v = 0.25 * static_cast<double>(rng.next_below(5));
    rdmf::DenseMatrix img(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const int bi = std::min(i / bs, blocks - 1);
            const int bj = std::min(j / bs, blocks - 1);
            img(i, j) = level[static_cast<std::size_t>(bi) * blocks + bj];
        }
    return img;
}

// Synthetic text raster: dark glyph strokes on a white page, rendered at
// three pixels stroke width and softened by one 3x3 binomial blur. Glyph
// shapes, word gaps and line offsets are drawn from the seed, so the page
// has the irregular layout of running text rather than a periodic grid.
// The soft edges mimic a scanned page downscaled to the working size,
// which is the usual provenance of "textual image" test assets.
inline rdmf::DenseMatrix text_raster_image(int d, std::uint64_t seed = 17) {
    rdmf::Rng rng(seed);
    rdmf::DenseMatrix ink = rdmf::DenseMatrix::constant(d, d, 1.0);
    const int cw = 12, ch = 14;
    auto vbar = [&](int r0, int c0, int len) {
        for (int i = 0; i < len; ++i)
            for (int j = 0; j < 3; ++j)
                if (r0 + i < d && c0 + j < d) ink(r0 + i, c0 + j) = 0.1;
    };
    auto hbar = [&](int r0, int c0, int len) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < len; ++j)
                if (r0 + i < d && c0 + j < d) ink(r0 + i, c0 + j) = 0.1;
    };
    for (int row = 2; row + ch <= d - 2; row += ch + 3) {
        int col = 2 + static_cast<int>(rng.next_below(4));
        while (col + cw <= d - 2) {
            if (rng.next_uniform() < 0.25) {  // word gap
                col += cw - 3;
                continue;
            }
            const int kind = static_cast<int>(rng.next_below(4));
            vbar(row, col, ch - 3);  // left stem
            if (kind == 0) {
                hbar(row, col, cw - 3);
                hbar(row + (ch - 3) / 2, col, cw - 3);
            } else if (kind == 1) {
                vbar(row, col + cw - 6, ch - 3);
                hbar(row + ch - 6, col, cw - 3);
            } else if (kind == 2) {
                hbar(row + ch - 6, col, cw - 3);
            } else {
                vbar(row + 3, col + cw - 6, ch - 9);
                hbar(row, col, cw - 3);
            }
            col += cw + 1;
        }
    }
    rdmf::DenseMatrix img(d, d);
    const int w[3] = {1, 2, 1};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const int ii = std::clamp(i + di, 0, d - 1);
                    const int jj = std::clamp(j + dj, 0, d - 1);
                    acc += w[di + 1] * w[dj + 1] * ink(ii, jj);
                }
            img(i, j) = acc / 16.0;
        }
    return img;
}

// Synthetic landscape stand-in for a photograph: a sum of smooth random
// rank-one modes with k^-decay coefficients, matching the slowly decaying
// spectrum of natural images. Coarse modes are smoothed harder, so most
// of the energy sits in low spatial frequencies with fine detail on top.
// Larger decay gives a smoother scene with fewer recoverable fine modes.
inline rdmf::DenseMatrix natural_scene_image(int d, std::uint64_t seed,
                                             double decay = 0.6) {
    rdmf::Rng rng(seed);
    auto smooth_unit_vec = [&](int passes) {
        std::vector<double> v(static_cast<std::size_t>(d));
        for (double& x : v) x = rng.next_normal();
        std::vector<double> w(v.size());
        for (int p = 0; p < passes; ++p) {
            for (int i = 0; i < d; ++i) {
                const double l = v[static_cast<std::size_t>((i + d - 1) % d)];
                const double c = v[static_cast<std::size_t>(i)];
                const double r = v[static_cast<std::size_t>((i + 1) % d)];
                w[static_cast<std::size_t>(i)] = 0.25 * l + 0.5 * c + 0.25 * r;
            }
            v.swap(w);
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
        return v;
    };
    rdmf::DenseMatrix img(d, d);
    for (int k = 1; k <= d; ++k) {
        const int passes = std::max(1, d / (6 * k));
        const std::vector<double> u = smooth_unit_vec(passes);
        const std::vector<double> v = smooth_unit_vec(passes);
        const double a = std::pow(static_cast<double>(k), -decay);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                img(i, j) += a * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
    }
    double lo = img(0, 0), hi = img(0, 0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            lo = std::min(lo, img(i, j));
            hi = std::max(hi, img(i, j));
        }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) img(i, j) = (img(i, j) - lo) / (hi - lo);
    return img;
}

}  // namespace oracles

#endif
