#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rdmf/dense_matrix.hpp"
#include "rdmf/error.hpp"
#include "rdmf/metrics.hpp"
#include "rdmf/objective.hpp"
#include "rdmf/rng.hpp"

using rdmf::DenseMatrix;
using rdmf::MaskMatrix;

namespace {

DenseMatrix random_mask(rdmf::Rng& rng, int rows, int cols, double density) {
    DenseMatrix omega(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) omega(i, j) = (rng.next_uniform() < density) ? 1.0 : 0.0;
    return omega;
}

}  // namespace

TEST_CASE("nmae: perfect completion scores zero") {
    rdmf::Rng rng(51);
    const DenseMatrix x = rdmf::gaussian_matrix(rng, 4, 4, 1.0);
    const MaskMatrix mask = MaskMatrix::from_matrix(random_mask(rng, 4, 4, 0.5));
    CHECK(rdmf::nmae(x, x, mask) == 0.0);
}

TEST_CASE("nmae: hand value 0.1 with one missing entry") {
    DenseMatrix x(2, 2);
    x(0, 0) = 0; x(0, 1) = 1; x(1, 0) = 2; x(1, 1) = 3;
    DenseMatrix omega = DenseMatrix::constant(2, 2, 1.0);
    omega(0, 0) = 0.0;
    DenseMatrix xhat = x;
    xhat(0, 0) = 0.3;
    CHECK(rdmf::nmae(x, xhat, MaskMatrix::from_matrix(std::move(omega))) ==
          doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("nmae: matches the double-loop oracle on random 10x10 at 30% missing") {
    rdmf::Rng rng(52);
    const DenseMatrix x = rdmf::gaussian_matrix(rng, 10, 10, 1.0);
    const DenseMatrix xhat = rdmf::gaussian_matrix(rng, 10, 10, 1.0);
    const DenseMatrix omega = random_mask(rng, 10, 10, 0.7);
    const MaskMatrix mask = MaskMatrix::from_matrix(omega);
    const double expect = oracles::nmae_double_loop(x, xhat, omega);
    CHECK(rdmf::nmae(x, xhat, mask) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("nmae: empty complement and constant data are metric errors") {
    rdmf::Rng rng(53);
    const DenseMatrix x = rdmf::gaussian_matrix(rng, 3, 3, 1.0);
    CHECK_THROWS_AS(rdmf::nmae(x, x, MaskMatrix::full(3, 3)), rdmf::MetricError);

    const DenseMatrix constant = DenseMatrix::constant(3, 3, 0.5);
    const MaskMatrix half = MaskMatrix::from_matrix(random_mask(rng, 3, 3, 0.5));
    CHECK_THROWS_AS(rdmf::nmae(constant, x, half), rdmf::MetricError);
}

TEST_CASE("nmae: invariant under simultaneous affine rescaling") {
    rdmf::Rng rng(54);
    const DenseMatrix x = rdmf::gaussian_matrix(rng, 6, 6, 1.0);
    const DenseMatrix xhat = rdmf::gaussian_matrix(rng, 6, 6, 1.0);
    const MaskMatrix mask = MaskMatrix::from_matrix(random_mask(rng, 6, 6, 0.5));
    const double base = rdmf::nmae(x, xhat, mask);
    const double a = 2.75, b = -1.3;
    DenseMatrix xs = x, xhs = xhat;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            xs(i, j) = a * x(i, j) + b;
            xhs(i, j) = a * xhat(i, j) + b;
        }
    CHECK(rdmf::nmae(xs, xhs, mask) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("effective_rank: identity of size 5 scores exactly 5") {
    CHECK(rdmf::effective_rank(DenseMatrix::identity(5)) ==
          doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("effective_rank: rank-one outer product scores 1") {
    rdmf::Rng rng(55);
    const DenseMatrix u = rdmf::gaussian_matrix(rng, 6, 1, 1.0);
    const DenseMatrix v = rdmf::gaussian_matrix(rng, 4, 1, 1.0);
    const DenseMatrix outer = rdmf::matmul_a_bt(u, v);
    CHECK(rdmf::effective_rank(outer) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("effective_rank: diag(1,1,0,0) scores 2") {
    DenseMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    CHECK(rdmf::effective_rank(m) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("effective_rank: zero matrix scores 0 and raises the flag") {
    bool flag = false;
    CHECK(rdmf::effective_rank(DenseMatrix(3, 5), &flag) == 0.0);
    CHECK(flag);
    flag = false;
    CHECK(rdmf::effective_rank(DenseMatrix::identity(3), &flag) > 0.0);
    CHECK(!flag);
}

TEST_CASE("effective_rank: scale invariant to 1e-10") {
    rdmf::Rng rng(56);
    const DenseMatrix m = rdmf::gaussian_matrix(rng, 7, 5, 1.0);
    const double base = rdmf::effective_rank(m);
    for (double c : {3.0, -0.02, 1e6}) {
        CHECK(rdmf::effective_rank(rdmf::scaled(m, c)) ==
              doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("effective_rank: entropy bounds hold on 100 random matrices") {
    rdmf::Rng rng(57);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = 2 + static_cast<int>(rng.next_below(7));
        const int cols = 2 + static_cast<int>(rng.next_below(7));
        const DenseMatrix m = rdmf::gaussian_matrix(rng, rows, cols, 1.0);
        const double er = rdmf::effective_rank(m);
        CHECK(er >= 1.0 - 1e-9);
        CHECK(er <= std::min(rows, cols) + 1e-9);
    }
}

TEST_CASE("effective_rank: agrees with the spectrum-entropy oracle on chosen spectra") {
    const std::vector<double> s = {2.0, 1.0, 0.5, 0.1};
    const DenseMatrix m = oracles::matrix_with_spectrum(6, 4, s, 58);
    CHECK(rdmf::effective_rank(m) ==
          doctest::Approx(oracles::effective_rank_from_spectrum(s)).epsilon(1e-8));
}

TEST_CASE("singular_values: diag(3,2,1) returns [3,2,1]") {
    DenseMatrix m(3, 3);
    m(0, 0) = 3; m(1, 1) = 2; m(2, 2) = 1;
    const std::vector<double> s = rdmf::singular_values(m);
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singular_values: orthogonal matrix has a flat unit spectrum") {
    // Rotation blocks compose an exactly orthogonal 4x4.
    const double c = std::cos(0.7), sn = std::sin(0.7);
    DenseMatrix q(4, 4);
    q(0, 0) = c; q(0, 1) = -sn; q(1, 0) = sn; q(1, 1) = c;
    q(2, 2) = c; q(2, 3) = -sn; q(3, 2) = sn; q(3, 3) = c;
    for (double s : rdmf::singular_values(q)) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singular_values: match the Gram-matrix eigenvalue oracle on random 5x3") {
    rdmf::Rng rng(59);
    const DenseMatrix m = rdmf::gaussian_matrix(rng, 5, 3, 1.0);
    const DenseMatrix gram = rdmf::matmul_at_b(m, m);
    const std::vector<double> eig = oracles::symmetric3_eigenvalues(gram);
    const std::vector<double> s = rdmf::singular_values(m);
    REQUIRE(s.size() == 3);
    for (int k = 0; k < 3; ++k)
        CHECK(s[static_cast<std::size_t>(k)] ==
              doctest::Approx(std::sqrt(std::max(0.0, eig[static_cast<std::size_t>(k)])))
                  .epsilon(1e-9));
}

TEST_CASE("singular_values: known planted spectrum is recovered") {
    const std::vector<double> planted = {3.5, 1.25, 0.75, 0.03125};
    const DenseMatrix m = oracles::matrix_with_spectrum(5, 4, planted, 60);
    const std::vector<double> s = rdmf::singular_values(m);
    REQUIRE(s.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(s[k] == doctest::Approx(planted[k]).epsilon(1e-9));
}
