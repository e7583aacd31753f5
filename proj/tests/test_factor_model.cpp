#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rdmf/error.hpp"
#include "rdmf/factor_model.hpp"
#include "rdmf/objective.hpp"
#include "rdmf/rng.hpp"

using rdmf::Activation;
using rdmf::DenseMatrix;
using rdmf::FactorModel;

namespace {

FactorModel random_model(rdmf::Rng& rng, std::vector<int> dims, Activation act, bool use_bias) {
    FactorModel m(dims, act, use_bias);
    for (auto& w : m.weights) w = rdmf::gaussian_matrix(rng, w.rows(), w.cols(), 0.5);
    for (auto& b : m.biases) b = rdmf::gaussian_matrix(rng, b.rows(), b.cols(), 0.1);
    m.invalidate_cache();
    return m;
}

// Full loss evaluated at the model's current parameters; used as the scalar
// function for finite differencing.
double loss_at(FactorModel& model, const rdmf::Objective& obj) {
    model.invalidate_cache();
    return obj.value(model.forward());
}

// Checks backward() against central differences on every parameter entry.
void check_gradients(FactorModel& model, const rdmf::Objective& obj, double tol) {
    model.invalidate_cache();
    const DenseMatrix& out = model.forward();
    const auto [value, grad_out] = obj.total_loss(out);
    (void)value;
    const rdmf::GradientSet grads = model.backward(grad_out);

    const double h = 1e-5;
    double max_rel = 0.0;
    auto probe_entry = [&](DenseMatrix& param, const DenseMatrix& analytic, int i, int j) {
        const double saved = param(i, j);
        param(i, j) = saved + h;
        const double up = loss_at(model, obj);
        param(i, j) = saved - h;
        const double down = loss_at(model, obj);
        param(i, j) = saved;
        model.invalidate_cache();
        const double fd = (up - down) / (2.0 * h);
        const double scale = std::max({std::abs(fd), std::abs(analytic(i, j)), 1.0});
        max_rel = std::max(max_rel, std::abs(fd - analytic(i, j)) / scale);
    };
    for (int l = 0; l < model.depth(); ++l) {
        for (int i = 0; i < model.weights[l].rows(); ++i)
            for (int j = 0; j < model.weights[l].cols(); ++j)
                probe_entry(model.weights[l], grads.d_weights[l], i, j);
        if (model.use_bias)
            for (int i = 0; i < model.biases[l].rows(); ++i)
                for (int j = 0; j < model.biases[l].cols(); ++j)
                    probe_entry(model.biases[l], grads.d_biases[l], i, j);
    }
    CHECK(max_rel < tol);
}

std::string temp_path(const char* name) {
    return std::string("/tmp/rdmf_test_") + name;
}

}  // namespace

TEST_CASE("forward: identity factors compose to the identity") {
    FactorModel m({4, 4, 4, 4}, Activation::Linear, false);
    for (auto& w : m.weights) w = DenseMatrix::identity(4);
    m.invalidate_cache();
    CHECK(m.forward() == DenseMatrix::identity(4));
}

TEST_CASE("forward: scalar two-layer product") {
    FactorModel m({1, 1, 1}, Activation::Linear, false);
    m.weights[0](0, 0) = 3.0;
    m.weights[1](0, 0) = 2.0;
    m.invalidate_cache();
    CHECK(m.forward()(0, 0) == 6.0);
}

TEST_CASE("forward: sigmoid with zero parameters matches the scalar recurrence") {
    FactorModel m({2, 2, 2, 2}, Activation::Sigmoid, true);
    m.invalidate_cache();
    const DenseMatrix& out = m.forward();
    // With zero weights and biases every entry follows h <- sigmoid(0)
    // after the first layer kills the input, independent of position.
    double h = 0.0;
    for (int l = 0; l < 3; ++l) h = oracles::sigmoid_scalar(0.0 * h);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(out(i, j) - h) < 1e-15);
}

TEST_CASE("forward: nonzero sigmoid stack matches the scalar recurrence") {
    // Constant 1x1 layers make the network a scalar iteration, which an
    // independent recurrence can replay exactly.
    FactorModel m({1, 1, 1, 1}, Activation::Sigmoid, true);
    const double w[3] = {0.7, -1.3, 0.4};
    const double b[3] = {0.2, 0.1, -0.5};
    for (int l = 0; l < 3; ++l) {
        m.weights[l](0, 0) = w[l];
        m.biases[l](0, 0) = b[l];
    }
    m.invalidate_cache();
    double h = 1.0;
    for (int l = 0; l < 3; ++l) h = oracles::sigmoid_scalar(w[l] * h + b[l]);
    CHECK(std::abs(m.forward()(0, 0) - h) < 1e-15);
}

TEST_CASE("forward: output shape is d_o x d regardless of hidden widths") {
    rdmf::Rng rng(11);
    for (const auto& dims : std::vector<std::vector<int>>{{3, 9, 5}, {4, 2, 7, 6}, {5, 1, 1, 1, 2}}) {
        FactorModel m = random_model(rng, dims, Activation::Tanh, true);
        const DenseMatrix& out = m.forward();
        CHECK(out.rows() == dims.back());
        CHECK(out.cols() == dims.front());
    }
}

TEST_CASE("backward: scalar two-layer product rule") {
    FactorModel m({1, 1, 1}, Activation::Linear, false);
    const double w0 = 3.0, w1 = 2.0;
    m.weights[0](0, 0) = w0;
    m.weights[1](0, 0) = w1;
    m.invalidate_cache();
    m.forward();
    DenseMatrix upstream(1, 1);
    upstream(0, 0) = 1.0;
    const rdmf::GradientSet g = m.backward(upstream);
    // d(w1*w0)/dw0 = w1 and d(w1*w0)/dw1 = w0.
    CHECK(g.d_weights[0](0, 0) == w1);
    CHECK(g.d_weights[1](0, 0) == w0);
}

TEST_CASE("backward: zero upstream produces an all-zero gradient set") {
    rdmf::Rng rng(12);
    FactorModel m = random_model(rng, {3, 4, 3}, Activation::Sigmoid, true);
    m.forward();
    const rdmf::GradientSet g = m.backward(DenseMatrix(3, 3));
    for (const auto& dw : g.d_weights) CHECK(dw.max_abs() == 0.0);
    for (const auto& db : g.d_biases) CHECK(db.max_abs() == 0.0);
}

TEST_CASE("backward: before forward is a state error") {
    FactorModel m({2, 2, 2}, Activation::Linear, false);
    CHECK_THROWS_AS(m.backward(DenseMatrix(2, 2)), rdmf::StateError);
}

TEST_CASE("backward: matches finite differences on a composite loss, L=3 d=6") {
    rdmf::Rng rng(13);
    const DenseMatrix data = rdmf::gaussian_matrix(rng, 6, 6, 1.0);
    DenseMatrix omega(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) omega(i, j) = (rng.next_uniform() < 0.6) ? 1.0 : 0.0;
    const rdmf::Objective obj(data, rdmf::MaskMatrix::from_matrix(std::move(omega)),
                              rdmf::Regularizer::TvL2, 0.05);
    FactorModel m = random_model(rng, {6, 5, 4, 6}, Activation::Tanh, true);
    check_gradients(m, obj, 1e-5);
}

TEST_CASE("backward: gradient check across all activations and depths 2..4") {
    rdmf::Rng rng(14);
    const Activation acts[] = {Activation::Linear, Activation::ReLU, Activation::Sigmoid,
                               Activation::Tanh};
    int models_checked = 0;
    for (Activation act : acts) {
        for (int depth = 2; depth <= 4; ++depth) {
            for (int rep = 0; rep < 2; ++rep) {
                std::vector<int> dims;
                dims.push_back(2 + static_cast<int>(rng.next_below(7)));
                for (int l = 1; l < depth; ++l)
                    dims.push_back(1 + static_cast<int>(rng.next_below(8)));
                dims.push_back(2 + static_cast<int>(rng.next_below(7)));

                const DenseMatrix data =
                    rdmf::gaussian_matrix(rng, dims.back(), dims.front(), 1.0);
                DenseMatrix omega(dims.back(), dims.front());
                for (int i = 0; i < omega.rows(); ++i)
                    for (int j = 0; j < omega.cols(); ++j)
                        omega(i, j) = (rng.next_uniform() < 0.7) ? 1.0 : 0.0;
                const rdmf::Regularizer regs[] = {rdmf::Regularizer::None,
                                                  rdmf::Regularizer::TvL1,
                                                  rdmf::Regularizer::TvL2,
                                                  rdmf::Regularizer::TvQuad};
                const rdmf::Regularizer reg = regs[models_checked % 4];
                const bool square = dims.back() == dims.front();
                const rdmf::Objective obj(data, rdmf::MaskMatrix::from_matrix(std::move(omega)),
                                          square ? reg : rdmf::Regularizer::TvL2,
                                          (square && reg == rdmf::Regularizer::None) ? 0.0 : 0.02);
                const bool bias = act != Activation::Linear;
                FactorModel model = random_model(rng, dims, act, bias);
                check_gradients(model, obj, 1e-5);
                ++models_checked;
            }
        }
    }
    CHECK(models_checked >= 20);
}

TEST_CASE("product_matrix: identity factors give the identity") {
    FactorModel m({3, 3, 3}, Activation::Linear, false);
    for (auto& w : m.weights) w = DenseMatrix::identity(3);
    CHECK(m.product_matrix() == DenseMatrix::identity(3));
}

TEST_CASE("product_matrix: equals forward exactly for linear bias-free models") {
    rdmf::Rng rng(15);
    FactorModel m = random_model(rng, {5, 3, 6, 5}, Activation::Linear, false);
    const DenseMatrix via_forward = m.forward();
    CHECK(rdmf::sub(via_forward, m.product_matrix()).max_abs() == 0.0);
}

TEST_CASE("product_matrix: L=3 random 4x4 factors equal two chained multiplies") {
    rdmf::Rng rng(16);
    FactorModel m = random_model(rng, {4, 4, 4, 4}, Activation::Linear, false);
    const DenseMatrix chained = oracles::matmul_triple_loop(
        m.weights[2], oracles::matmul_triple_loop(m.weights[1], m.weights[0]));
    CHECK(rdmf::sub(m.product_matrix(), chained).max_abs() < 1e-12);
}

TEST_CASE("product_matrix: nonlinear or biased models are rejected") {
    FactorModel nonlinear({2, 2, 2}, Activation::Sigmoid, false);
    CHECK_THROWS_AS(nonlinear.product_matrix(), rdmf::StateError);
    FactorModel biased({2, 2, 2}, Activation::Linear, true);
    CHECK_THROWS_AS(biased.product_matrix(), rdmf::StateError);
}

TEST_CASE("validate: inconsistent shapes are rejected") {
    FactorModel m({3, 4, 3}, Activation::Linear, false);
    m.weights[0] = DenseMatrix(2, 2);
    CHECK_THROWS_AS(m.validate(), rdmf::ShapeError);
    CHECK_THROWS_AS(FactorModel({3}, Activation::Linear, false), rdmf::ShapeError);
    CHECK_THROWS_AS(FactorModel({3, 3}, Activation::Linear, false), rdmf::ShapeError);
}

TEST_CASE("checkpoint: bit-exact round-trip of a trained-looking model") {
    rdmf::Rng rng(17);
    FactorModel m = random_model(rng, {4, 6, 3, 4}, Activation::Tanh, true);
    const std::string path = temp_path("ckpt_roundtrip.bin");
    rdmf::save_checkpoint(m, path);
    const FactorModel back = rdmf::load_checkpoint(path);
    REQUIRE(back.dims == m.dims);
    CHECK(back.activation == m.activation);
    CHECK(back.use_bias == m.use_bias);
    for (int l = 0; l < m.depth(); ++l) {
        CHECK(back.weights[l] == m.weights[l]);
        CHECK(back.biases[l] == m.biases[l]);
    }
    std::remove(path.c_str());
}

TEST_CASE("checkpoint: corrupted magic or truncation are parse errors") {
    rdmf::Rng rng(18);
    FactorModel m = random_model(rng, {3, 3, 3}, Activation::Linear, false);
    const std::string path = temp_path("ckpt_corrupt.bin");
    rdmf::save_checkpoint(m, path);

    // Flip the first magic byte.
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.put('X');
    }
    CHECK_THROWS_AS(rdmf::load_checkpoint(path), rdmf::ParseError);

    // Rewrite, then truncate the payload.
    rdmf::save_checkpoint(m, path);
    std::string bytes;
    {
        std::ifstream f(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(rdmf::load_checkpoint(path), rdmf::ParseError);

    CHECK_THROWS_AS(rdmf::load_checkpoint(temp_path("ckpt_missing.bin")), rdmf::DataError);
    std::remove(path.c_str());
}
