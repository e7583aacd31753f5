#ifndef RDMF_RUN_CONFIG_HPP
#define RDMF_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rdmf/factor_model.hpp"
#include "rdmf/metrics.hpp"
#include "rdmf/objective.hpp"
#include "rdmf/optimizer.hpp"
#include "rdmf/theory_probe.hpp"

namespace rdmf {

// File-backed run description. The config format is flat key=value text:
// one pair per line, dotted keys for sections ("optimizer.eta=0.001"),
// '#' starts a comment, blank lines are ignored. Unknown keys are
// ConfigError. Command-line overrides use the same key=value shape and
// are applied on top of the file.

struct MaskSource {
    std::string path;          // non-empty: load this mask PGM
    double missing_pct = 0.5;  // otherwise generate with these
    std::uint64_t seed = 0;
};

struct OutputSpec {
    std::string restored_path;
    std::string mask_path;  // where to dump a generated mask
    std::string metrics_path;
    std::string trajectory_path;
    int snapshot_period = 0;  // 0 disables trajectory recording
};

struct RunConfig {
    std::string image_path;
    MaskSource mask;

    int depth = 3;
    int hidden_width = 0;  // 0 = image width
    Activation activation = Activation::Linear;
    int use_bias = -1;  // -1 auto (off for linear, on otherwise), 0 off, 1 on
    Regularizer regularizer = Regularizer::None;
    double lambda = 0.0;
    double smoothing_eps = 1e-8;

    double eta = 1e-3;
    long max_iters = 10000;
    double loss_delta_tol = 1e-3;
    InitKind init_kind = InitKind::Gaussian;
    double init_std = 0.031622776601683794;
    double init_scale = 1.0;
    std::uint64_t seed = 0;

    OutputSpec outputs;

    // Sweep axes. An empty axis falls back to the base value above, so a
    // plain run config doubles as a one-cell sweep. Lists are kept sorted
    // and deduplicated; the grid walks them in nested order
    // missing_pct > activation > regularizer > lambda > depth > width > seed,
    // which is also the emitted row order.
    std::vector<double> sweep_missing_pct;
    std::vector<Activation> sweep_activation;
    std::vector<Regularizer> sweep_regularizer;
    std::vector<double> sweep_lambda;
    std::vector<int> sweep_depth;
    std::vector<int> sweep_width;
    std::vector<std::uint64_t> sweep_seed;
    // An axis key given with no values (e.g. "sweep.seed=") empties the
    // whole Cartesian product: the sweep runs zero cells. Also settable
    // directly as "sweep.empty=true".
    bool sweep_empty = false;

    FlowProbeConfig probe;
};

RunConfig parse_run_config_text(const std::string& text,
                                const std::vector<std::string>& overrides);
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides);

// Canonical key=value rendering; parsing it back yields an identical config.
std::string serialize_run_config(const RunConfig& cfg);

// Load image, build mask, train, write configured outputs, evaluate.
// Errors are rethrown with the failing stage prepended to the message.
MetricRecord run_single(const RunConfig& cfg);

struct SweepOutcome {
    std::vector<MetricRecord> records;  // successful cells in grid order
    std::vector<std::string> failures;  // "cell <key>: <error>", grid order
};

// One run per grid cell; a failing cell is recorded and the sweep moves
// on. Writes the aggregate CSV to outputs.metrics when set. Masks depend
// only on (missing_pct, seed), so cells differing in model or objective
// share the same observation pattern.
SweepOutcome run_sweep(const RunConfig& cfg);

// Deterministic "%.12g" rendering used by every CSV emitter.
std::string format_double(double v);

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricRecord& rec);
void write_metrics_csv(const std::vector<MetricRecord>& records, const std::string& path);

// Flow-probe trajectory: one row per (step, singular-value track).
void write_probe_csv(const FlowProbeResult& result, const std::string& path);

}  // namespace rdmf

#endif
