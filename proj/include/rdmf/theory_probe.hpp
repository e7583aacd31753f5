#ifndef RDMF_THEORY_PROBE_HPP
#define RDMF_THEORY_PROBE_HPP

#include <cstdint>
#include <vector>

#include "rdmf/dense_matrix.hpp"
#include "rdmf/factor_model.hpp"
#include "rdmf/objective.hpp"
#include "rdmf/svd.hpp"

namespace rdmf {

// Euler-discretized gradient flow on a linear bias-free factorization,
// instrumented to compare the measured motion of the product matrix's
// signed singular values against the closed-form laws
//   sigma_dot_r = -L (sigma_r^2)^(1-1/L) <grad R_fid, u_r v_r^T>
// and, with the quadratic TV surrogate at weight lambda, the extra decay
//   -2 L lambda (sigma_r^2)^(3/2-1/L) gamma_r,  gamma_r = |A u_r|^2 + |A v_r|^2.

struct FlowProbeConfig {
    int d = 10;
    int depth = 2;  // L, factor count
    double dt = 1e-4;
    int steps = 500;
    double lambda = 0.0;
    bool use_tvquad = true;     // regularizer entering the flow when lambda > 0
    double mask_density = 0.5;  // observed fraction; 0 gives the pure-regularizer flow
    std::uint64_t seed = 0;
    double data_std = 1.0;      // synthetic ground-truth entry scale
    double init_scale = 1.0;    // balanced-init target scale
};

// SVD with per-column track identity. Columns keep the order of the track
// they continue, not sorted order; signs are chosen so both singular-vector
// tracks stay positively aligned step to step, with flips absorbed into the
// signed sigma.
struct SignedSvd {
    std::vector<double> sigma;   // signed
    DenseMatrix u;
    DenseMatrix v;
    std::vector<char> crossing;  // degenerate gap or ambiguous match
};

// One Euler step W[l] <- W[l] - dt * dR/dW[l], all layers simultaneously,
// gradients taken at the pre-step state. Throws NumericError on NaN.
void flow_step(FactorModel& model, const Objective& obj, double dt);

// Continue (or start, when prev is null) the signed SVD track of m.
// Matching maximizes |<u_prev, u>| + |<v_prev, v>| greedily in track order;
// a candidate tie within 1e-6, or an unsigned singular-value gap below
// 1e-6, flags the track as a crossing.
SignedSvd track_signed_svd(const SignedSvd* prev, const DenseMatrix& m);

// |A u|^2 + |A v|^2 for one singular-vector pair.
double gamma_alignment(const std::vector<double>& u, const std::vector<double>& v,
                       const DenseMatrix& a);

// Analytic right-hand sides.
double prop1_velocity(double sigma, double fid_alignment, int depth);
double tv_attenuation_velocity(double sigma, double gamma, int depth, double lambda);

// Relative residuals |measured - predicted| / (|measured| + 1e-12), one per
// track. Entries whose crossing flag is set are returned as 0 and should be
// skipped by callers.
std::vector<double> prop1_residual(const SignedSvd& state,
                                   const std::vector<double>& sigma_dot_measured,
                                   const DenseMatrix& grad_fid, int depth);
std::vector<double> corollary1_residual(const SignedSvd& state,
                                        const std::vector<double>& sigma_dot_measured,
                                        const DenseMatrix& grad_fid, const DenseMatrix& a,
                                        int depth, double lambda);

struct FlowStepRecord {
    int step = 0;
    double t = 0.0;
    std::vector<double> sigma;                 // signed, track order
    std::vector<double> sigma_dot_measured;    // central difference; NaN at ends
    std::vector<double> sigma_dot_pred_prop1;
    std::vector<double> sigma_dot_pred_cor1;
    std::vector<double> gamma;
    std::vector<double> fid_alignment;         // <grad R_fid, u_r v_r^T>
    std::vector<char> crossing;
};

struct FlowProbeResult {
    FlowProbeConfig cfg;
    std::vector<FlowStepRecord> records;  // steps + 1 entries
};

// Run the full instrumented flow: synthetic Gaussian data, exact-count
// mask at the configured density, balanced initialization.
FlowProbeResult run_flow_probe(const FlowProbeConfig& cfg);

// Trained-model effective-rank grid (drives the low-rank trend checks).
struct RankTrendCell {
    int depth = 3;
    Regularizer regularizer = Regularizer::None;
    double lambda = 0.0;
    std::uint64_t seed = 0;
};

struct RankTrendSetup {
    DenseMatrix data;
    double missing_pct = 0.5;
    int hidden_width = 0;  // 0 = use the data dimension
    Activation activation = Activation::Linear;
    double eta = 1e-3;
    long max_iters = 10000;
    double loss_delta_tol = 1e-3;
    double init_std = 0.031622776601683794;
    std::uint64_t mask_seed_offset = 0x6d61736b;  // same seed => same mask across cells
};

struct RankTrendRow {
    RankTrendCell cell;
    double effective_rank = 0.0;
    double nmae = 0.0;
    long iterations = 0;
    double final_loss = 0.0;
};

std::vector<RankTrendRow> rank_trend_experiment(const RankTrendSetup& setup,
                                                const std::vector<RankTrendCell>& cells);

}  // namespace rdmf

#endif
