#include "rdmf/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "rdmf/error.hpp"
#include "rdmf/image_io.hpp"
#include "rdmf/mask.hpp"

namespace rdmf {

namespace {

// Decorrelates mask generation from weight initialization when one sweep
// seed drives both.
constexpr std::uint64_t kMaskSeedSalt = 0x6d61736bULL;

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

double parse_double_token(const std::string& tok, const std::string& key) {
    double value = 0.0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("key '" + key + "': '" + tok + "' is not a number");
    return value;
}

long parse_long_token(const std::string& tok, const std::string& key) {
    long value = 0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("key '" + key + "': '" + tok + "' is not an integer");
    return value;
}

std::uint64_t parse_u64_token(const std::string& tok, const std::string& key) {
    std::uint64_t value = 0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("key '" + key + "': '" + tok + "' is not an unsigned integer");
    return value;
}

bool parse_bool_token(const std::string& tok, const std::string& key) {
    if (tok == "true" || tok == "1") return true;
    if (tok == "false" || tok == "0") return false;
    throw ConfigError("key '" + key + "': '" + tok + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            const std::string t = trim(cur);
            if (!t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    const std::string t = trim(cur);
    if (!t.empty()) out.push_back(t);
    return out;
}

// Flat store plus consumption tracking, so leftovers can be reported as
// unknown keys after every recognized key has been pulled.
class ConfigReader {
public:
    void ingest_pair(const std::string& text, const std::string& where) {
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key=value, got '" + trim(text) + "'");
        const std::string key = trim(text.substr(0, eq));
        if (key.empty()) throw ConfigError(where + ": empty key");
        values_[key] = trim(text.substr(eq + 1));
    }

    void ingest_line(const std::string& raw, int lineno) {
        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) return;
        ingest_pair(line, "config line " + std::to_string(lineno));
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& def) {
        const auto it = values_.find(key);
        if (it == values_.end()) return def;
        consumed_.insert(key);
        return it->second;
    }

    double get_double(const std::string& key, double def) {
        const auto it = values_.find(key);
        if (it == values_.end()) return def;
        consumed_.insert(key);
        return parse_double_token(it->second, key);
    }

    long get_long(const std::string& key, long def) {
        const auto it = values_.find(key);
        if (it == values_.end()) return def;
        consumed_.insert(key);
        return parse_long_token(it->second, key);
    }

    int get_int(const std::string& key, int def) {
        return static_cast<int>(get_long(key, def));
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t def) {
        const auto it = values_.find(key);
        if (it == values_.end()) return def;
        consumed_.insert(key);
        return parse_u64_token(it->second, key);
    }

    bool get_bool(const std::string& key, bool def) {
        const auto it = values_.find(key);
        if (it == values_.end()) return def;
        consumed_.insert(key);
        return parse_bool_token(it->second, key);
    }

    // Returns whether the key was present; tokens is cleared first.
    bool get_tokens(const std::string& key, std::vector<std::string>& tokens) {
        tokens.clear();
        const auto it = values_.find(key);
        if (it == values_.end()) return false;
        consumed_.insert(key);
        tokens = split_list(it->second);
        return true;
    }

    void finish() const {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : values_)
            if (consumed_.count(key) == 0) unknown.push_back(key);
        if (!unknown.empty()) {
            std::string msg = "unknown config key(s):";
            for (const std::string& k : unknown) msg += " '" + k + "'";
            throw ConfigError(msg);
        }
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

// Returns true when the key was present but listed no values, which marks
// the whole sweep grid as empty.
template <class T, class Parse>
bool read_axis(ConfigReader& r, const std::string& key, std::vector<T>& axis, Parse parse) {
    std::vector<std::string> tokens;
    if (!r.get_tokens(key, tokens)) return false;
    axis.clear();
    for (const std::string& tok : tokens) axis.push_back(parse(tok, key));
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    return axis.empty();
}

std::string stage_msg(const char* stage, const char* what) {
    return std::string("stage ") + stage + ": " + what;
}

template <class Fn>
auto with_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(stage_msg(stage, e.what()));
    } catch (const ParseError& e) {
        throw ParseError(stage_msg(stage, e.what()));
    } catch (const DataError& e) {
        throw DataError(stage_msg(stage, e.what()));
    } catch (const NumericError& e) {
        throw NumericError(stage_msg(stage, e.what()));
    } catch (const ShapeError& e) {
        throw ShapeError(stage_msg(stage, e.what()));
    } catch (const StateError& e) {
        throw StateError(stage_msg(stage, e.what()));
    } catch (const MetricError& e) {
        throw MetricError(stage_msg(stage, e.what()));
    }
}

void write_trajectory_csv(const TrainReport& report, const std::string& path) {
    if (report.sv_snapshots.empty()) return;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    std::map<long, double> nmae_at;
    for (const auto& [iter, value] : report.nmae_history) nmae_at[iter] = value;

    const std::size_t k = report.sv_snapshots.front().values.size();
    out << "iter,loss,nmae";
    for (std::size_t i = 0; i < k; ++i) out << ",sigma_" << i;
    out << "\n";
    for (const SvSnapshot& snap : report.sv_snapshots) {
        const auto idx = static_cast<std::size_t>(snap.iteration);
        out << snap.iteration << ',' << format_double(report.losses[idx]);
        const auto it = nmae_at.find(snap.iteration);
        out << ',' << (it == nmae_at.end() ? "nan" : format_double(it->second));
        for (double s : snap.values) out << ',' << format_double(s);
        out << "\n";
    }
    if (!out) throw DataError("write failure on " + path);
}

std::string cell_key(const RunConfig& cell) {
    std::ostringstream ss;
    ss << "missing_pct=" << format_double(cell.mask.missing_pct)
       << ",activation=" << activation_name(cell.activation)
       << ",regularizer=" << regularizer_name(cell.regularizer)
       << ",lambda=" << format_double(cell.lambda) << ",L=" << cell.depth
       << ",width=" << cell.hidden_width << ",seed=" << cell.seed;
    return ss.str();
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

RunConfig parse_run_config_text(const std::string& text,
                                const std::vector<std::string>& overrides) {
    ConfigReader r;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) r.ingest_line(line, ++lineno);
    for (const std::string& o : overrides) r.ingest_pair(o, "override");

    RunConfig cfg;
    cfg.image_path = r.get_string("image", "");
    cfg.mask.path = r.get_string("mask.path", "");
    cfg.mask.missing_pct = r.get_double("mask.missing_pct", cfg.mask.missing_pct);
    cfg.mask.seed = r.get_u64("mask.seed", cfg.mask.seed);

    cfg.depth = r.get_int("model.depth", cfg.depth);
    cfg.hidden_width = r.get_int("model.width", cfg.hidden_width);
    cfg.activation = activation_from_name(r.get_string("model.activation", "linear"));
    const std::string bias = r.get_string("model.use_bias", "auto");
    if (bias == "auto")
        cfg.use_bias = -1;
    else
        cfg.use_bias = parse_bool_token(bias, "model.use_bias") ? 1 : 0;

    cfg.regularizer = regularizer_from_name(r.get_string("objective.regularizer", "none"));
    cfg.lambda = r.get_double("objective.lambda", cfg.lambda);
    cfg.smoothing_eps = r.get_double("objective.eps", cfg.smoothing_eps);

    cfg.eta = r.get_double("optimizer.eta", cfg.eta);
    cfg.max_iters = r.get_long("optimizer.max_iters", cfg.max_iters);
    cfg.loss_delta_tol = r.get_double("optimizer.loss_delta_tol", cfg.loss_delta_tol);
    const std::string kind = r.get_string("optimizer.init.kind", "gaussian");
    if (kind == "gaussian")
        cfg.init_kind = InitKind::Gaussian;
    else if (kind == "balanced")
        cfg.init_kind = InitKind::Balanced;
    else
        throw ConfigError("optimizer.init.kind must be 'gaussian' or 'balanced', got '" + kind +
                          "'");
    cfg.init_std = r.get_double("optimizer.init.std", cfg.init_std);
    cfg.init_scale = r.get_double("optimizer.init.scale", cfg.init_scale);
    cfg.seed = r.get_u64("optimizer.init.seed", cfg.seed);

    cfg.outputs.restored_path = r.get_string("outputs.restored", "");
    cfg.outputs.mask_path = r.get_string("outputs.mask", "");
    cfg.outputs.metrics_path = r.get_string("outputs.metrics", "");
    cfg.outputs.trajectory_path = r.get_string("outputs.trajectory", "");
    cfg.outputs.snapshot_period = r.get_int("outputs.snapshot_period", 0);

    bool blank_axis = false;
    blank_axis |= read_axis(r, "sweep.missing_pct", cfg.sweep_missing_pct,
              [](const std::string& t, const std::string& k) { return parse_double_token(t, k); });
    blank_axis |= read_axis(r, "sweep.activation", cfg.sweep_activation,
              [](const std::string& t, const std::string&) { return activation_from_name(t); });
    blank_axis |= read_axis(r, "sweep.regularizer", cfg.sweep_regularizer,
              [](const std::string& t, const std::string&) { return regularizer_from_name(t); });
    blank_axis |= read_axis(r, "sweep.lambda", cfg.sweep_lambda,
              [](const std::string& t, const std::string& k) { return parse_double_token(t, k); });
    blank_axis |= read_axis(r, "sweep.depth", cfg.sweep_depth,
              [](const std::string& t, const std::string& k) {
        return static_cast<int>(parse_long_token(t, k));
    });
    blank_axis |= read_axis(r, "sweep.width", cfg.sweep_width,
              [](const std::string& t, const std::string& k) {
        return static_cast<int>(parse_long_token(t, k));
    });
    blank_axis |= read_axis(r, "sweep.seed", cfg.sweep_seed,
              [](const std::string& t, const std::string& k) { return parse_u64_token(t, k); });
    cfg.sweep_empty = r.get_bool("sweep.empty", false) || blank_axis;

    cfg.probe.d = r.get_int("probe.d", cfg.probe.d);
    cfg.probe.depth = r.get_int("probe.depth", cfg.probe.depth);
    cfg.probe.dt = r.get_double("probe.dt", cfg.probe.dt);
    cfg.probe.steps = r.get_int("probe.steps", cfg.probe.steps);
    cfg.probe.lambda = r.get_double("probe.lambda", cfg.probe.lambda);
    cfg.probe.use_tvquad = r.get_bool("probe.use_tvquad", cfg.probe.use_tvquad);
    cfg.probe.mask_density = r.get_double("probe.mask_density", cfg.probe.mask_density);
    cfg.probe.seed = r.get_u64("probe.seed", cfg.probe.seed);
    cfg.probe.data_std = r.get_double("probe.data_std", cfg.probe.data_std);
    cfg.probe.init_scale = r.get_double("probe.init_scale", cfg.probe.init_scale);

    r.finish();

    if (cfg.depth < 2) throw ConfigError("model.depth must be >= 2");
    if (cfg.hidden_width < 0) throw ConfigError("model.width must be >= 0");
    if (!(cfg.mask.missing_pct >= 0.0 && cfg.mask.missing_pct <= 1.0))
        throw ConfigError("mask.missing_pct must lie in [0, 1]");
    if (!(cfg.eta > 0.0)) throw ConfigError("optimizer.eta must be > 0");
    if (cfg.max_iters < 1) throw ConfigError("optimizer.max_iters must be >= 1");
    if (cfg.loss_delta_tol < 0.0) throw ConfigError("optimizer.loss_delta_tol must be >= 0");
    if (cfg.init_std < 0.0) throw ConfigError("optimizer.init.std must be >= 0");
    if (cfg.outputs.snapshot_period < 0)
        throw ConfigError("outputs.snapshot_period must be >= 0");
    for (double p : cfg.sweep_missing_pct)
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("sweep.missing_pct values must lie in [0, 1]");
    for (double l : cfg.sweep_lambda)
        if (l < 0.0) throw ConfigError("sweep.lambda values must be >= 0");
    for (int dep : cfg.sweep_depth)
        if (dep < 2) throw ConfigError("sweep.depth values must be >= 2");
    for (int w : cfg.sweep_width)
        if (w < 0) throw ConfigError("sweep.width values must be >= 0");
    return cfg;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw ConfigError("read failure on config file " + path);
    return parse_run_config_text(std::move(ss).str(), overrides);
}

namespace {

template <class T, class Render>
void emit_axis(std::ostringstream& out, const char* key, const std::vector<T>& axis,
               Render render) {
    if (axis.empty()) return;
    out << key << "=";
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (i != 0) out << ",";
        out << render(axis[i]);
    }
    out << "\n";
}

}  // namespace

std::string serialize_run_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "image=" << cfg.image_path << "\n";
    out << "mask.path=" << cfg.mask.path << "\n";
    out << "mask.missing_pct=" << format_double(cfg.mask.missing_pct) << "\n";
    out << "mask.seed=" << cfg.mask.seed << "\n";
    out << "model.depth=" << cfg.depth << "\n";
    out << "model.width=" << cfg.hidden_width << "\n";
    out << "model.activation=" << activation_name(cfg.activation) << "\n";
    out << "model.use_bias=" << (cfg.use_bias < 0 ? "auto" : cfg.use_bias == 1 ? "true" : "false")
        << "\n";
    out << "objective.regularizer=" << regularizer_name(cfg.regularizer) << "\n";
    out << "objective.lambda=" << format_double(cfg.lambda) << "\n";
    out << "objective.eps=" << format_double(cfg.smoothing_eps) << "\n";
    out << "optimizer.eta=" << format_double(cfg.eta) << "\n";
    out << "optimizer.max_iters=" << cfg.max_iters << "\n";
    out << "optimizer.loss_delta_tol=" << format_double(cfg.loss_delta_tol) << "\n";
    out << "optimizer.init.kind=" << (cfg.init_kind == InitKind::Gaussian ? "gaussian" : "balanced")
        << "\n";
    out << "optimizer.init.std=" << format_double(cfg.init_std) << "\n";
    out << "optimizer.init.scale=" << format_double(cfg.init_scale) << "\n";
    out << "optimizer.init.seed=" << cfg.seed << "\n";
    out << "outputs.restored=" << cfg.outputs.restored_path << "\n";
    out << "outputs.mask=" << cfg.outputs.mask_path << "\n";
    out << "outputs.metrics=" << cfg.outputs.metrics_path << "\n";
    out << "outputs.trajectory=" << cfg.outputs.trajectory_path << "\n";
    out << "outputs.snapshot_period=" << cfg.outputs.snapshot_period << "\n";
    emit_axis(out, "sweep.missing_pct", cfg.sweep_missing_pct,
              [](double v) { return format_double(v); });
    emit_axis(out, "sweep.activation", cfg.sweep_activation,
              [](Activation a) { return std::string(activation_name(a)); });
    emit_axis(out, "sweep.regularizer", cfg.sweep_regularizer,
              [](Regularizer r) { return std::string(regularizer_name(r)); });
    emit_axis(out, "sweep.lambda", cfg.sweep_lambda, [](double v) { return format_double(v); });
    emit_axis(out, "sweep.depth", cfg.sweep_depth, [](int v) { return std::to_string(v); });
    emit_axis(out, "sweep.width", cfg.sweep_width, [](int v) { return std::to_string(v); });
    emit_axis(out, "sweep.seed", cfg.sweep_seed,
              [](std::uint64_t v) { return std::to_string(v); });
    if (cfg.sweep_empty) out << "sweep.empty=true\n";
    out << "probe.d=" << cfg.probe.d << "\n";
    out << "probe.depth=" << cfg.probe.depth << "\n";
    out << "probe.dt=" << format_double(cfg.probe.dt) << "\n";
    out << "probe.steps=" << cfg.probe.steps << "\n";
    out << "probe.lambda=" << format_double(cfg.probe.lambda) << "\n";
    out << "probe.use_tvquad=" << (cfg.probe.use_tvquad ? "true" : "false") << "\n";
    out << "probe.mask_density=" << format_double(cfg.probe.mask_density) << "\n";
    out << "probe.seed=" << cfg.probe.seed << "\n";
    out << "probe.data_std=" << format_double(cfg.probe.data_std) << "\n";
    out << "probe.init_scale=" << format_double(cfg.probe.init_scale) << "\n";
    return out.str();
}

MetricRecord run_single(const RunConfig& cfg) {
    if (cfg.image_path.empty())
        throw ConfigError("stage load-image: no input image configured");
    const GrayImage img = with_stage("load-image", [&] { return read_pgm(cfg.image_path); });
    const DenseMatrix x = image_to_matrix(img);
    const int d = img.width;
    const int d_o = img.height;

    const MaskMatrix mask = with_stage("build-mask", [&]() -> MaskMatrix {
        if (!cfg.mask.path.empty()) {
            MaskMatrix m = read_mask_pgm(cfg.mask.path);
            if (m.rows() != d_o || m.cols() != d)
                throw ShapeError("mask is " + shape_string(m.omega) + " but the image is " +
                                 std::to_string(d_o) + "x" + std::to_string(d));
            return m;
        }
        return generate_mask(d_o, d, cfg.mask.missing_pct, cfg.mask.seed);
    });

    const Objective obj = with_stage("build-objective", [&] {
        return Objective(x, mask, cfg.regularizer, cfg.lambda, cfg.smoothing_eps);
    });

    TrainConfig tc;
    const int width = cfg.hidden_width > 0 ? cfg.hidden_width : d;
    tc.dims.assign(static_cast<std::size_t>(cfg.depth) + 1, width);
    tc.dims.front() = d;
    tc.dims.back() = d_o;
    tc.activation = cfg.activation;
    if (cfg.use_bias >= 0) {
        tc.use_bias_auto = false;
        tc.use_bias = cfg.use_bias == 1;
    }
    tc.init_kind = cfg.init_kind;
    tc.init_std = cfg.init_std;
    tc.init_scale = cfg.init_scale;
    tc.seed = cfg.seed;
    tc.eta = cfg.eta;
    tc.max_iters = cfg.max_iters;
    tc.loss_delta_tol = cfg.loss_delta_tol;
    tc.record_singular_values_every = cfg.outputs.snapshot_period;

    const TrainReport report = with_stage("train", [&] { return train(obj, tc); });

    MetricRecord rec = with_stage("metrics", [&] {
        MetricRecord r;
        r.missing_pct =
            static_cast<double>(mask.missing_count()) / static_cast<double>(mask.omega.size());
        r.activation = cfg.activation;
        r.regularizer = cfg.regularizer;
        r.lambda = cfg.lambda;
        r.depth = cfg.depth;
        r.m1 = tc.dims[1];
        r.m2 = tc.dims[static_cast<std::size_t>(cfg.depth) - 1];
        r.seed = cfg.seed;
        r.nmae = mask.missing_count() > 0 ? nmae(x, report.restored, mask)
                                          : std::numeric_limits<double>::quiet_NaN();
        r.effective_rank = effective_rank(report.restored);
        r.iterations = report.iterations_run;
        r.final_loss = report.losses.back();
        r.wall_time_s = report.wall_time_s;
        return r;
    });

    with_stage("write-outputs", [&] {
        if (!cfg.outputs.mask_path.empty()) write_mask_pgm(mask, cfg.outputs.mask_path);
        if (!cfg.outputs.restored_path.empty())
            write_pgm(image_from_matrix(report.restored), cfg.outputs.restored_path);
        if (!cfg.outputs.metrics_path.empty())
            write_metrics_csv({rec}, cfg.outputs.metrics_path);
        if (!cfg.outputs.trajectory_path.empty())
            write_trajectory_csv(report, cfg.outputs.trajectory_path);
        return 0;
    });
    return rec;
}

namespace {

template <class T>
std::vector<T> axis_or(const std::vector<T>& axis, const T& base) {
    if (!axis.empty()) return axis;
    return {base};
}

}  // namespace

SweepOutcome run_sweep(const RunConfig& cfg) {
    SweepOutcome outcome;
    if (cfg.sweep_empty) {
        if (!cfg.outputs.metrics_path.empty())
            write_metrics_csv(outcome.records, cfg.outputs.metrics_path);
        return outcome;
    }
    const std::vector<double> missing = axis_or(cfg.sweep_missing_pct, cfg.mask.missing_pct);
    const std::vector<Activation> acts = axis_or(cfg.sweep_activation, cfg.activation);
    const std::vector<Regularizer> regs = axis_or(cfg.sweep_regularizer, cfg.regularizer);
    const std::vector<double> lambdas = axis_or(cfg.sweep_lambda, cfg.lambda);
    const std::vector<int> depths = axis_or(cfg.sweep_depth, cfg.depth);
    const std::vector<int> widths = axis_or(cfg.sweep_width, cfg.hidden_width);
    const std::vector<std::uint64_t> seeds = axis_or(cfg.sweep_seed, cfg.seed);

    for (double mp : missing)
        for (Activation act : acts)
            for (Regularizer reg : regs)
                for (double lam : lambdas)
                    for (int dep : depths)
                        for (int w : widths)
                            for (std::uint64_t s : seeds) {
                                RunConfig cell = cfg;
                                cell.mask.path.clear();
                                cell.mask.missing_pct = mp;
                                cell.mask.seed = s ^ kMaskSeedSalt;
                                cell.activation = act;
                                cell.regularizer = reg;
                                cell.lambda = lam;
                                cell.depth = dep;
                                cell.hidden_width = w;
                                cell.seed = s;
                                cell.outputs = OutputSpec{};
                                try {
                                    outcome.records.push_back(run_single(cell));
                                } catch (const Error& e) {
                                    outcome.failures.push_back("cell " + cell_key(cell) + ": " +
                                                               e.what());
                                }
                            }

    if (!cfg.outputs.metrics_path.empty())
        write_metrics_csv(outcome.records, cfg.outputs.metrics_path);
    return outcome;
}

std::string metrics_csv_header() {
    return "missing_pct,activation,regularizer,lambda,L,m1,m2,seed,nmae,effective_rank,iters,"
           "final_loss,wall_time_s";
}

std::string metrics_csv_row(const MetricRecord& rec) {
    std::ostringstream ss;
    ss << format_double(rec.missing_pct) << ',' << activation_name(rec.activation) << ','
       << regularizer_name(rec.regularizer) << ',' << format_double(rec.lambda) << ','
       << rec.depth << ',' << rec.m1 << ',' << rec.m2 << ',' << rec.seed << ','
       << format_double(rec.nmae) << ',' << format_double(rec.effective_rank) << ','
       << rec.iterations << ',' << format_double(rec.final_loss) << ','
       << format_double(rec.wall_time_s);
    return ss.str();
}

void write_metrics_csv(const std::vector<MetricRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << metrics_csv_header() << "\n";
    for (const MetricRecord& rec : records) out << metrics_csv_row(rec) << "\n";
    if (!out) throw DataError("write failure on " + path);
}

void write_probe_csv(const FlowProbeResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << "step,t,r,sigma_signed,sigma_dot_measured,sigma_dot_pred_prop1,sigma_dot_pred_cor1,"
           "gamma_r,crossing_flag\n";
    for (const FlowStepRecord& rec : result.records) {
        for (std::size_t r = 0; r < rec.sigma.size(); ++r) {
            out << rec.step << ',' << format_double(rec.t) << ',' << r << ','
                << format_double(rec.sigma[r]) << ',' << format_double(rec.sigma_dot_measured[r])
                << ',' << format_double(rec.sigma_dot_pred_prop1[r]) << ','
                << format_double(rec.sigma_dot_pred_cor1[r]) << ',' << format_double(rec.gamma[r])
                << ',' << static_cast<int>(rec.crossing[r]) << "\n";
        }
    }
    if (!out) throw DataError("write failure on " + path);
}

}  // namespace rdmf
