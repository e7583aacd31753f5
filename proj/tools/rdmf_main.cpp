// Command-line front end: mask / complete / sweep / metrics / probe.
// Every subcommand takes a config file plus key=value overrides; exit
// codes are 0 success, 2 config error, 3 data/parse error, 4 numeric or
// internal-state failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdmf/error.hpp"
#include "rdmf/image_io.hpp"
#include "rdmf/mask.hpp"
#include "rdmf/metrics.hpp"
#include "rdmf/run_config.hpp"
#include "rdmf/theory_probe.hpp"

namespace {

int run_mask(const rdmf::RunConfig& cfg) {
    if (cfg.image_path.empty())
        throw rdmf::ConfigError("mask needs an input image for its dimensions");
    if (cfg.outputs.mask_path.empty())
        throw rdmf::ConfigError("mask needs outputs.mask as its destination");
    const rdmf::GrayImage img = rdmf::read_pgm(cfg.image_path);
    const rdmf::MaskMatrix mask =
        rdmf::generate_mask(img.height, img.width, cfg.mask.missing_pct, cfg.mask.seed);
    rdmf::write_mask_pgm(mask, cfg.outputs.mask_path);
    std::cout << "mask " << img.height << "x" << img.width << ": " << mask.observed_count
              << " observed, " << mask.missing_count() << " missing -> "
              << cfg.outputs.mask_path << "\n";
    return 0;
}

int run_complete(const rdmf::RunConfig& cfg) {
    const rdmf::MetricRecord rec = rdmf::run_single(cfg);
    std::cout << rdmf::metrics_csv_header() << "\n" << rdmf::metrics_csv_row(rec) << "\n";
    return 0;
}

int run_sweep_cmd(const rdmf::RunConfig& cfg) {
    const rdmf::SweepOutcome outcome = rdmf::run_sweep(cfg);
    for (const std::string& failure : outcome.failures) std::cerr << failure << "\n";
    if (cfg.outputs.metrics_path.empty()) {
        std::cout << rdmf::metrics_csv_header() << "\n";
        for (const rdmf::MetricRecord& rec : outcome.records)
            std::cout << rdmf::metrics_csv_row(rec) << "\n";
    } else {
        std::cout << "wrote " << outcome.records.size() << " rows to "
                  << cfg.outputs.metrics_path << "\n";
    }
    return 0;
}

int run_metrics(const rdmf::RunConfig& cfg) {
    if (cfg.image_path.empty()) throw rdmf::ConfigError("metrics needs the original image");
    if (cfg.outputs.restored_path.empty())
        throw rdmf::ConfigError("metrics needs outputs.restored as the image to evaluate");
    const rdmf::GrayImage original = rdmf::read_pgm(cfg.image_path);
    const rdmf::GrayImage restored = rdmf::read_pgm(cfg.outputs.restored_path);
    if (original.width != restored.width || original.height != restored.height)
        throw rdmf::ShapeError("restored image dimensions do not match the original");
    const rdmf::DenseMatrix x = rdmf::image_to_matrix(original);
    const rdmf::DenseMatrix xhat = rdmf::image_to_matrix(restored);
    const rdmf::MaskMatrix mask =
        cfg.mask.path.empty()
            ? rdmf::generate_mask(original.height, original.width, cfg.mask.missing_pct,
                                  cfg.mask.seed)
            : rdmf::read_mask_pgm(cfg.mask.path);
    std::cout << "nmae=" << rdmf::format_double(rdmf::nmae(x, xhat, mask)) << "\n";
    std::cout << "effective_rank=" << rdmf::format_double(rdmf::effective_rank(xhat)) << "\n";
    return 0;
}

int run_probe(const rdmf::RunConfig& cfg) {
    if (cfg.outputs.trajectory_path.empty())
        throw rdmf::ConfigError("probe needs outputs.trajectory as its destination");
    const rdmf::FlowProbeResult result = rdmf::run_flow_probe(cfg.probe);
    rdmf::write_probe_csv(result, cfg.outputs.trajectory_path);
    const std::size_t tracks =
        result.records.empty() ? 0 : result.records.front().sigma.size();
    std::cout << "wrote " << result.records.size() * tracks << " trajectory rows to "
              << cfg.outputs.trajectory_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep matrix factorization laboratory"};
    app.require_subcommand(1);

    struct SubSpec {
        const char* name;
        const char* desc;
        int (*fn)(const rdmf::RunConfig&);
    };
    const std::vector<SubSpec> subs = {
        {"mask", "Generate an observation mask PGM", &run_mask},
        {"complete", "Train on one image and write the restored result", &run_complete},
        {"sweep", "Run a config grid and aggregate a metrics CSV", &run_sweep_cmd},
        {"metrics", "Evaluate a restored image against the original", &run_metrics},
        {"probe", "Record singular-value flow dynamics to a CSV", &run_probe},
    };

    std::string config_path;
    std::vector<std::string> overrides;
    for (const SubSpec& spec : subs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.desc);
        sub->add_option("config", config_path, "config file (key=value lines)")->required();
        sub->add_option("overrides", overrides, "key=value overrides applied after the file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const rdmf::RunConfig cfg = rdmf::load_run_config(config_path, overrides);
        for (const SubSpec& spec : subs)
            if (app.get_subcommand(spec.name)->parsed()) return spec.fn(cfg);
        throw rdmf::StateError("no subcommand dispatched");
    } catch (const rdmf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rdmf::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const rdmf::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const rdmf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 4;
    }
}
