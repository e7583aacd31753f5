#include "rdmf/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "rdmf/error.hpp"
#include "rdmf/metrics.hpp"
#include "rdmf/rng.hpp"
#include "rdmf/svd.hpp"

namespace rdmf {

FactorModel init_gaussian(const std::vector<int>& dims, Activation activation, bool use_bias,
                          std::uint64_t seed, double std_dev) {
    FactorModel model(dims, activation, use_bias);
    Rng rng(seed);
    for (auto& w : model.weights) {
        w = gaussian_matrix(rng, w.rows(), w.cols(), std_dev);
    }
    // biases stay zero
    return model;
}

namespace {

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix via modified
// Gram-Schmidt, R's diagonal signs folded into Q.
DenseMatrix random_orthogonal(Rng& rng, int n) {
    DenseMatrix g = gaussian_matrix(rng, n, n, 1.0);
    DenseMatrix q(n, n);
    for (int j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = g(i, j);
        double rjj = 0.0;
        for (int prev = 0; prev < j; ++prev) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += col[i] * q(i, prev);
            for (int i = 0; i < n; ++i) col[i] -= dot * q(i, prev);
        }
        for (int i = 0; i < n; ++i) rjj += col[i] * col[i];
        rjj = std::sqrt(rjj);
        // rjj = |residual| > 0, so R's diagonal is positive by construction;
        // this is the sign convention that makes the factorization unique
        // and the distribution Haar.
        const double inv = 1.0 / rjj;
        for (int i = 0; i < n; ++i) q(i, j) = col[i] * inv;
    }
    return q;
}

// diag(s)^(1/L) sandwiched between two orthogonal matrices: left * diag(s^(1/L)) * right^T.
DenseMatrix sandwich_root(const DenseMatrix& left, const std::vector<double>& s, double inv_l,
                          const DenseMatrix& right) {
    const int n = left.rows();
    std::vector<double> root(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) root[k] = std::pow(s[k], inv_l);
    DenseMatrix mid(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) mid(i, j) = left(i, j) * root[static_cast<std::size_t>(j)];
    }
    return matmul_a_bt(mid, right);
}

}  // namespace

FactorModel init_balanced(const std::vector<int>& dims, std::uint64_t seed, double scale) {
    const int L = static_cast<int>(dims.size()) - 1;
    if (L < 2) throw ShapeError("init_balanced needs depth >= 2");
    const int d = dims[0];
    for (int m : dims) {
        if (m != d) throw StateError("init_balanced requires equal dims (square factors)");
    }

    Rng rng(seed);
    const DenseMatrix target = gaussian_matrix(rng, d, d, scale / std::sqrt(double(d)));
    const SvdResult dec = svd(target);

    std::vector<DenseMatrix> rot;  // R_1 .. R_{L-1}
    for (int l = 0; l < L - 1; ++l) rot.push_back(random_orthogonal(rng, d));

    FactorModel model(dims, Activation::Linear, false);
    const double inv_l = 1.0 / static_cast<double>(L);
    if (L == 2) {
        model.weights[1] = sandwich_root(dec.u, dec.s, inv_l, rot[0]);
        model.weights[0] = sandwich_root(rot[0], dec.s, inv_l, dec.v);
    } else {
        model.weights[L - 1] = sandwich_root(dec.u, dec.s, inv_l, rot[L - 2]);
        for (int l = L - 2; l >= 1; --l) {
            model.weights[l] = sandwich_root(rot[l], dec.s, inv_l, rot[l - 1]);
        }
        model.weights[0] = sandwich_root(rot[0], dec.s, inv_l, dec.v);
    }
    return model;
}

void gd_step(FactorModel& model, const GradientSet& grads, double eta) {
    const int L = model.depth();
    for (int l = 0; l < L; ++l) model.weights[l].axpy(-eta, grads.d_weights[l]);
    if (model.use_bias) {
        for (int l = 0; l < L; ++l) model.biases[l].axpy(-eta, grads.d_biases[l]);
    }
    model.invalidate_cache();
}

AdamState::AdamState(const FactorModel& model, AdamConfig cfg) : cfg_(cfg) {
    for (const auto& w : model.weights) {
        m_weights_.emplace_back(w.rows(), w.cols());
        v_weights_.emplace_back(w.rows(), w.cols());
    }
    for (const auto& b : model.biases) {
        m_biases_.emplace_back(b.rows(), b.cols());
        v_biases_.emplace_back(b.rows(), b.cols());
    }
}

namespace {

void adam_update(DenseMatrix& param, DenseMatrix& m, DenseMatrix& v, const DenseMatrix& g,
                 const AdamConfig& cfg, double bias1, double bias2) {
    for (long k = 0; k < param.size(); ++k) {
        const double gk = g.data()[k];
        double& mk = m.data()[k];
        double& vk = v.data()[k];
        mk = cfg.beta1 * mk + (1.0 - cfg.beta1) * gk;
        vk = cfg.beta2 * vk + (1.0 - cfg.beta2) * gk * gk;
        const double m_hat = mk / bias1;
        const double v_hat = vk / bias2;
        param.data()[k] -= cfg.eta * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
}

}  // namespace

void AdamState::step(FactorModel& model, const GradientSet& grads) {
    ++step_count_;
    const double bias1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
    const double bias2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        adam_update(model.weights[l], m_weights_[l], v_weights_[l], grads.d_weights[l], cfg_,
                    bias1, bias2);
    }
    for (std::size_t l = 0; l < model.biases.size(); ++l) {
        adam_update(model.biases[l], m_biases_[l], v_biases_[l], grads.d_biases[l], cfg_,
                    bias1, bias2);
    }
    model.invalidate_cache();
}

bool should_use_bias(const TrainConfig& cfg) {
    if (!cfg.use_bias_auto) return cfg.use_bias;
    return cfg.activation != Activation::Linear;
}

TrainReport train(const Objective& obj, const TrainConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();

    TrainReport report;
    if (cfg.init_kind == InitKind::Balanced) {
        report.model = init_balanced(cfg.dims, cfg.seed, cfg.init_scale);
    } else {
        report.model = init_gaussian(cfg.dims, cfg.activation, should_use_bias(cfg), cfg.seed,
                                     cfg.init_std);
    }
    FactorModel& model = report.model;

    AdamConfig adam_cfg;
    adam_cfg.eta = cfg.eta;
    AdamState adam(model, adam_cfg);

    const bool want_nmae =
        cfg.record_singular_values_every > 0 && obj.mask().missing_count() > 0;

    auto record_extras = [&](long iter, const DenseMatrix& output) {
        if (cfg.record_singular_values_every <= 0) return;
        if (iter % cfg.record_singular_values_every != 0) return;
        report.sv_snapshots.push_back({iter, singular_values(output)});
        if (want_nmae) {
            report.nmae_history.emplace_back(iter, nmae(obj.data(), output, obj.mask()));
        }
    };

    auto check_finite = [&](double loss, long iter) {
        if (!std::isfinite(loss)) {
            const double last = report.losses.empty() ? 0.0 : report.losses.back();
            throw NumericError("training loss became non-finite at iteration " +
                               std::to_string(iter) + "; last finite loss " +
                               std::to_string(last));
        }
    };

    auto [loss, grad_out] = obj.total_loss(model.forward());
    check_finite(loss, 0);
    report.losses.push_back(loss);
    record_extras(0, model.forward());

    double prev_loss = loss;
    for (long t = 1; t <= cfg.max_iters; ++t) {
        const GradientSet grads = model.backward(grad_out);
        adam.step(model, grads);

        const DenseMatrix& output = model.forward();
        auto [cur_loss, cur_grad] = obj.total_loss(output);
        check_finite(cur_loss, t);
        report.losses.push_back(cur_loss);
        record_extras(t, output);
        report.iterations_run = t;

        if (std::abs(prev_loss - cur_loss) < cfg.loss_delta_tol) {
            report.stopped_by_delta = true;
            break;
        }
        prev_loss = cur_loss;
        grad_out = std::move(cur_grad);
    }

    report.restored = model.forward();
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace rdmf
