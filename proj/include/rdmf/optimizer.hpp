#ifndef RDMF_OPTIMIZER_HPP
#define RDMF_OPTIMIZER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rdmf/factor_model.hpp"
#include "rdmf/objective.hpp"

namespace rdmf {

// Weights i.i.d. N(0, std^2); biases (when present) start at zero.
FactorModel init_gaussian(const std::vector<int>& dims, Activation activation, bool use_bias,
                          std::uint64_t seed, double std_dev);

// Balanced factors for the linear bias-free square case: a random target of
// the given scale is split through its SVD as
//   W[L-1] = U S^{1/L} R_{L-1}^T,  W[l] = R_{l+1} S^{1/L} R_l^T,
//   W[0] = R_1 S^{1/L} V^T,
// with Haar orthogonal R_l (QR of a Gaussian, diagonal signs fixed). The
// product reconstructs the target and consecutive factors satisfy
// W[l+1]^T W[l+1] = W[l] W[l]^T to round-off. The target's entries are
// N(0, (scale/sqrt(d))^2), so its largest singular value is about 2*scale.
FactorModel init_balanced(const std::vector<int>& dims, std::uint64_t seed, double scale);

// Plain theta <- theta - eta * g.
void gd_step(FactorModel& model, const GradientSet& grads, double eta);

struct AdamConfig {
    double eta = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with bias correction. Moment accumulators mirror the model shapes.
class AdamState {
public:
    AdamState(const FactorModel& model, AdamConfig cfg);
    void step(FactorModel& model, const GradientSet& grads);
    long step_count() const { return step_count_; }

private:
    AdamConfig cfg_;
    std::vector<DenseMatrix> m_weights_, v_weights_;
    std::vector<DenseMatrix> m_biases_, v_biases_;
    long step_count_ = 0;
};

enum class InitKind { Gaussian, Balanced };

struct TrainConfig {
    std::vector<int> dims;
    Activation activation = Activation::Linear;
    // Bias default follows the activation: off for Linear, on (zero-init)
    // otherwise. Set use_bias to override.
    bool use_bias_auto = true;
    bool use_bias = false;

    InitKind init_kind = InitKind::Gaussian;
    double init_std = 0.031622776601683794;  // sqrt(1e-3)
    double init_scale = 1.0;                 // balanced init target scale
    std::uint64_t seed = 0;

    double eta = 1e-3;
    long max_iters = 10000;
    double loss_delta_tol = 1e-3;

    int record_singular_values_every = 0;  // 0 = never; also records NMAE
};

struct SvSnapshot {
    long iteration;
    std::vector<double> values;
};

struct TrainReport {
    FactorModel model;
    DenseMatrix restored;                     // final forward output
    std::vector<double> losses;               // losses[t] = R(theta_t)
    std::vector<std::pair<long, double>> nmae_history;
    std::vector<SvSnapshot> sv_snapshots;
    long iterations_run = 0;
    bool stopped_by_delta = false;
    double wall_time_s = 0.0;
};

// Adam-driven minimization of obj over the factor model. Stops after
// max_iters steps or as soon as consecutive losses differ by less than
// loss_delta_tol. Aborts with NumericError (iteration index, last finite
// loss) if the loss leaves the finite range.
TrainReport train(const Objective& obj, const TrainConfig& cfg);

bool should_use_bias(const TrainConfig& cfg);

}  // namespace rdmf

#endif
