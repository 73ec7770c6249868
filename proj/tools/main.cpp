#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "spp/pipeline.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> grid;
    std::optional<double> sigma;
    std::optional<double> alpha;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
};

void add_common(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("-c,--config", ov.config_path, "analysis config (JSON)")
        ->required();
    cmd->add_option("--seed", ov.seed, "override the RNG seed");
    cmd->add_option("--grid", ov.grid, "override the grid, e.g. 128x128");
    cmd->add_option("--sigma", ov.sigma, "override the intensity bandwidth (km)");
    cmd->add_option("--alpha", ov.alpha, "override the stepwise threshold");
    cmd->add_option("--threads", ov.threads, "cap worker threads (0 = all cores)");
    cmd->add_option("--out", ov.out_dir, "override the output directory");
}

spp::AnalysisConfig resolve(const Overrides& ov) {
    spp::AnalysisConfig cfg = spp::load_config(ov.config_path);
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.grid) {
        int nx = 0, ny = 0;
        if (std::sscanf(ov.grid->c_str(), "%dx%d", &nx, &ny) != 2 || nx < 1 || ny < 1)
            throw spp::InputError("--grid expects NXxNY, got: " + *ov.grid);
        cfg.grid_nx = nx;
        cfg.grid_ny = ny;
    }
    if (ov.sigma) {
        if (!(*ov.sigma > 0.0)) throw spp::InputError("--sigma must be > 0");
        cfg.sigma = *ov.sigma;
    }
    if (ov.alpha) cfg.stepwise_alpha = *ov.alpha;
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.out_dir) cfg.output_dir = *ov.out_dir;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatial point pattern analysis pipeline"};
    app.require_subcommand(1);

    Overrides ov;
    spp::SimulateOptions sim_opts;
    std::string render_raster, render_out, render_palette = "linear";

    CLI::App* density = app.add_subcommand(
        "density", "kernel intensity of the point pattern");
    add_common(density, ov);

    CLI::App* smooth = app.add_subcommand(
        "smooth-covariate", "build the configured covariate rasters");
    add_common(smooth, ov);

    CLI::App* test = app.add_subcommand(
        "test", "CSR tests: quadrat chi-squared, spatial KS, K envelope");
    add_common(test, ov);

    CLI::App* fit = app.add_subcommand(
        "fit", "fit the loglinear intensity model and map residuals");
    add_common(fit, ov);

    CLI::App* simulate = app.add_subcommand("simulate", "generate a point pattern");
    add_common(simulate, ov);
    simulate->add_option("--kind", sim_opts.kind, "csr | poisson | inhom | cluster");
    simulate->add_option("--n", sim_opts.n, "point count (csr)");
    simulate->add_option("--lambda", sim_opts.lambda, "intensity per km^2 (poisson)");
    simulate->add_option("--lambda-raster", sim_opts.lambda_raster,
                         "intensity raster (inhom)");
    simulate->add_option("--parents", sim_opts.parents, "parent count (cluster)");
    simulate->add_option("--offspring", sim_opts.offspring,
                         "offspring per parent (cluster)");
    simulate->add_option("--cluster-sigma", sim_opts.cluster_sigma,
                         "offspring displacement sd in km (cluster)");

    CLI::App* render = app.add_subcommand("render", "raster to PNG heatmap");
    render->add_option("raster", render_raster, "input raster (.asc)")->required();
    render->add_option("-o,--out", render_out, "output PNG path")->required();
    render->add_option("--palette", render_palette, "linear | quantile");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render->parsed()) {
            spp::PaletteMode mode;
            if (render_palette == "linear")
                mode = spp::PaletteMode::linear;
            else if (render_palette == "quantile")
                mode = spp::PaletteMode::quantile;
            else
                throw spp::InputError("--palette must be linear or quantile");
            spp::cmd_render(render_raster, render_out, mode);
            return 0;
        }

        const spp::AnalysisConfig cfg = resolve(ov);
        if (density->parsed()) spp::cmd_density(cfg);
        else if (smooth->parsed()) spp::cmd_smooth_covariate(cfg);
        else if (test->parsed()) spp::cmd_test(cfg);
        else if (fit->parsed()) spp::cmd_fit(cfg);
        else if (simulate->parsed()) spp::cmd_simulate(cfg, sim_opts);
        return 0;
    } catch (const spp::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const spp::RankDeficiencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
