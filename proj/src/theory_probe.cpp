#include "rdmf/theory_probe.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "rdmf/error.hpp"
#include "rdmf/mask.hpp"
#include "rdmf/metrics.hpp"
#include "rdmf/optimizer.hpp"
#include "rdmf/rng.hpp"

namespace rdmf {

namespace {

constexpr double kMatchTol = 1e-6;     // ambiguity margin on track matching
constexpr double kGapTol = 1e-6;       // unsigned singular-value degeneracy
constexpr double kResidualFloor = 1e-12;

std::vector<double> column_of(const DenseMatrix& m, int c) {
    std::vector<double> col(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) col[static_cast<std::size_t>(i)] = m(i, c);
    return col;
}

double column_dot(const DenseMatrix& a, int ca, const DenseMatrix& b, int cb) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, ca) * b(i, cb);
    return s;
}

// u^T g v.
double bilinear(const std::vector<double>& u, const DenseMatrix& g, const std::vector<double>& v) {
    double s = 0.0;
    for (int i = 0; i < g.rows(); ++i) {
        double row = 0.0;
        for (int j = 0; j < g.cols(); ++j) row += g(i, j) * v[static_cast<std::size_t>(j)];
        s += u[static_cast<std::size_t>(i)] * row;
    }
    return s;
}

}  // namespace

void flow_step(FactorModel& model, const Objective& obj, double dt) {
    if (!(dt >= 0.0)) throw ConfigError("flow step size must be non-negative");
    const DenseMatrix& out = model.forward();
    auto [value, grad] = obj.total_loss(out);
    if (!std::isfinite(value)) throw NumericError("gradient flow diverged: non-finite loss");
    const GradientSet grads = model.backward(grad);
    gd_step(model, grads, dt);
    for (const DenseMatrix& w : model.weights)
        if (!w.all_finite()) throw NumericError("gradient flow diverged: non-finite weights");
}

SignedSvd track_signed_svd(const SignedSvd* prev, const DenseMatrix& m) {
    SvdResult dec = svd(m);
    const int k = static_cast<int>(dec.s.size());

    std::vector<char> gap_flag(static_cast<std::size_t>(k), 0);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (std::abs(dec.s[static_cast<std::size_t>(a)] - dec.s[static_cast<std::size_t>(b)]) <
                kGapTol) {
                gap_flag[static_cast<std::size_t>(a)] = 1;
                gap_flag[static_cast<std::size_t>(b)] = 1;
            }

    SignedSvd out;
    out.sigma.resize(static_cast<std::size_t>(k));
    out.crossing.assign(static_cast<std::size_t>(k), 0);

    if (prev == nullptr) {
        out.u = std::move(dec.u);
        out.v = std::move(dec.v);
        for (int r = 0; r < k; ++r) {
            out.sigma[static_cast<std::size_t>(r)] = dec.s[static_cast<std::size_t>(r)];
            out.crossing[static_cast<std::size_t>(r)] = gap_flag[static_cast<std::size_t>(r)];
        }
        return out;
    }

    if (static_cast<int>(prev->sigma.size()) != k || prev->u.rows() != dec.u.rows() ||
        prev->v.rows() != dec.v.rows())
        throw ShapeError("signed SVD track shape changed between steps");

    out.u = DenseMatrix(dec.u.rows(), k);
    out.v = DenseMatrix(dec.v.rows(), k);
    std::vector<char> used(static_cast<std::size_t>(k), 0);
    for (int r = 0; r < k; ++r) {
        double best = -1.0;
        double second = -1.0;
        int best_c = -1;
        for (int c = 0; c < k; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            const double score =
                std::abs(column_dot(prev->u, r, dec.u, c)) + std::abs(column_dot(prev->v, r, dec.v, c));
            if (score > best) {
                second = best;
                best = score;
                best_c = c;
            } else if (score > second) {
                second = score;
            }
        }
        used[static_cast<std::size_t>(best_c)] = 1;
        const bool ambiguous = second >= 0.0 && best - second < kMatchTol;

        const double du = column_dot(prev->u, r, dec.u, best_c);
        const double dv = column_dot(prev->v, r, dec.v, best_c);
        const double su = du < 0.0 ? -1.0 : 1.0;
        const double sv = dv < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < out.u.rows(); ++i) out.u(i, r) = su * dec.u(i, best_c);
        for (int i = 0; i < out.v.rows(); ++i) out.v(i, r) = sv * dec.v(i, best_c);
        out.sigma[static_cast<std::size_t>(r)] = su * sv * dec.s[static_cast<std::size_t>(best_c)];
        out.crossing[static_cast<std::size_t>(r)] =
            (ambiguous || gap_flag[static_cast<std::size_t>(best_c)]) ? 1 : 0;
    }
    return out;
}

double gamma_alignment(const std::vector<double>& u, const std::vector<double>& v,
                       const DenseMatrix& a) {
    if (static_cast<int>(u.size()) != a.cols() || static_cast<int>(v.size()) != a.cols())
        throw ShapeError("gamma_alignment: vector length does not match the operator");
    double total = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double au = 0.0;
        double av = 0.0;
        for (int j = 0; j < a.cols(); ++j) {
            au += a(i, j) * u[static_cast<std::size_t>(j)];
            av += a(i, j) * v[static_cast<std::size_t>(j)];
        }
        total += au * au + av * av;
    }
    return total;
}

double prop1_velocity(double sigma, double fid_alignment, int depth) {
    const double l = static_cast<double>(depth);
    return -l * std::pow(sigma * sigma, 1.0 - 1.0 / l) * fid_alignment;
}

double tv_attenuation_velocity(double sigma, double gamma, int depth, double lambda) {
    const double l = static_cast<double>(depth);
    return -2.0 * l * lambda * std::pow(sigma * sigma, 1.5 - 1.0 / l) * gamma;
}

std::vector<double> prop1_residual(const SignedSvd& state,
                                   const std::vector<double>& sigma_dot_measured,
                                   const DenseMatrix& grad_fid, int depth) {
    if (sigma_dot_measured.size() != state.sigma.size())
        throw ShapeError("prop1_residual: measured velocity count mismatch");
    std::vector<double> out(state.sigma.size(), 0.0);
    for (std::size_t r = 0; r < state.sigma.size(); ++r) {
        if (state.crossing[r]) continue;
        const int ri = static_cast<int>(r);
        const double align =
            bilinear(column_of(state.u, ri), grad_fid, column_of(state.v, ri));
        const double pred = prop1_velocity(state.sigma[r], align, depth);
        out[r] = std::abs(sigma_dot_measured[r] - pred) /
                 (std::abs(sigma_dot_measured[r]) + kResidualFloor);
    }
    return out;
}

std::vector<double> corollary1_residual(const SignedSvd& state,
                                        const std::vector<double>& sigma_dot_measured,
                                        const DenseMatrix& grad_fid, const DenseMatrix& a,
                                        int depth, double lambda) {
    if (sigma_dot_measured.size() != state.sigma.size())
        throw ShapeError("corollary1_residual: measured velocity count mismatch");
    std::vector<double> out(state.sigma.size(), 0.0);
    for (std::size_t r = 0; r < state.sigma.size(); ++r) {
        if (state.crossing[r]) continue;
        const int ri = static_cast<int>(r);
        const std::vector<double> ur = column_of(state.u, ri);
        const std::vector<double> vr = column_of(state.v, ri);
        const double pred = prop1_velocity(state.sigma[r], bilinear(ur, grad_fid, vr), depth) +
                            tv_attenuation_velocity(state.sigma[r], gamma_alignment(ur, vr, a),
                                                    depth, lambda);
        out[r] = std::abs(sigma_dot_measured[r] - pred) /
                 (std::abs(sigma_dot_measured[r]) + kResidualFloor);
    }
    return out;
}

FlowProbeResult run_flow_probe(const FlowProbeConfig& cfg) {
    if (cfg.d < 2) throw ConfigError("flow probe needs d >= 2");
    if (cfg.depth < 2) throw ConfigError("flow probe needs depth >= 2");
    if (!(cfg.dt > 0.0)) throw ConfigError("flow probe needs dt > 0");
    if (cfg.steps < 2) throw ConfigError("flow probe needs at least 2 steps");
    if (!(cfg.mask_density >= 0.0 && cfg.mask_density <= 1.0))
        throw ConfigError("mask_density must lie in [0, 1]");

    Rng data_rng(cfg.seed);
    const DenseMatrix x = gaussian_matrix(data_rng, cfg.d, cfg.d, cfg.data_std);
    const MaskMatrix mask =
        generate_mask(cfg.d, cfg.d, 1.0 - cfg.mask_density, cfg.seed ^ 0x6d61736bULL);
    const bool with_tv = cfg.use_tvquad && cfg.lambda > 0.0;
    const Objective obj(x, mask, with_tv ? Regularizer::TvQuad : Regularizer::None, cfg.lambda);
    const DenseMatrix a = difference_matrix(cfg.d);

    std::vector<int> dims(static_cast<std::size_t>(cfg.depth) + 1, cfg.d);
    FactorModel model = init_balanced(dims, cfg.seed + 1, cfg.init_scale);

    FlowProbeResult result;
    result.cfg = cfg;
    result.records.reserve(static_cast<std::size_t>(cfg.steps) + 1);

    SignedSvd track;
    for (int k = 0; k <= cfg.steps; ++k) {
        const DenseMatrix w = model.product_matrix();
        track = track_signed_svd(k == 0 ? nullptr : &track, w);
        const DenseMatrix gfid = fidelity_grad(x, w, mask);

        FlowStepRecord rec;
        rec.step = k;
        rec.t = k * cfg.dt;
        rec.sigma = track.sigma;
        rec.crossing = track.crossing;
        const std::size_t nr = track.sigma.size();
        rec.sigma_dot_measured.assign(nr, std::numeric_limits<double>::quiet_NaN());
        rec.sigma_dot_pred_prop1.resize(nr);
        rec.sigma_dot_pred_cor1.resize(nr);
        rec.gamma.resize(nr);
        rec.fid_alignment.resize(nr);
        for (std::size_t r = 0; r < nr; ++r) {
            const int ri = static_cast<int>(r);
            const std::vector<double> ur = column_of(track.u, ri);
            const std::vector<double> vr = column_of(track.v, ri);
            rec.fid_alignment[r] = bilinear(ur, gfid, vr);
            rec.gamma[r] = gamma_alignment(ur, vr, a);
            rec.sigma_dot_pred_prop1[r] =
                prop1_velocity(track.sigma[r], rec.fid_alignment[r], cfg.depth);
            rec.sigma_dot_pred_cor1[r] =
                rec.sigma_dot_pred_prop1[r] +
                tv_attenuation_velocity(track.sigma[r], rec.gamma[r], cfg.depth,
                                        with_tv ? cfg.lambda : 0.0);
        }
        result.records.push_back(std::move(rec));
        if (k < cfg.steps) flow_step(model, obj, cfg.dt);
    }

    for (int k = 1; k < cfg.steps; ++k) {
        FlowStepRecord& rec = result.records[static_cast<std::size_t>(k)];
        const std::vector<double>& before = result.records[static_cast<std::size_t>(k) - 1].sigma;
        const std::vector<double>& after = result.records[static_cast<std::size_t>(k) + 1].sigma;
        for (std::size_t r = 0; r < rec.sigma.size(); ++r)
            rec.sigma_dot_measured[r] = (after[r] - before[r]) / (2.0 * cfg.dt);
    }
    return result;
}

std::vector<RankTrendRow> rank_trend_experiment(const RankTrendSetup& setup,
                                                const std::vector<RankTrendCell>& cells) {
    const int d = setup.data.cols();
    const int d_o = setup.data.rows();
    std::vector<RankTrendRow> rows;
    rows.reserve(cells.size());
    for (const RankTrendCell& cell : cells) {
        if (cell.depth < 2) throw ConfigError("rank trend cells need depth >= 2");
        const MaskMatrix mask =
            generate_mask(d_o, d, setup.missing_pct, setup.mask_seed_offset + cell.seed);
        const Objective obj(setup.data, mask, cell.regularizer, cell.lambda);

        TrainConfig tc;
        const int width = setup.hidden_width > 0 ? setup.hidden_width : d;
        tc.dims.assign(static_cast<std::size_t>(cell.depth) + 1, width);
        tc.dims.front() = d;
        tc.dims.back() = d_o;
        tc.activation = setup.activation;
        tc.seed = cell.seed;
        tc.eta = setup.eta;
        tc.max_iters = setup.max_iters;
        tc.loss_delta_tol = setup.loss_delta_tol;
        tc.init_std = setup.init_std;

        const TrainReport report = train(obj, tc);

        RankTrendRow row;
        row.cell = cell;
        row.effective_rank = effective_rank(report.restored);
        row.nmae = nmae(setup.data, report.restored, mask);
        row.iterations = report.iterations_run;
        row.final_loss = report.losses.back();
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace rdmf
