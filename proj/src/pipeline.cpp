#include "spp/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "spp/inference.hpp"
#include "spp/io.hpp"
#include "spp/parallel.hpp"
#include "spp/sim.hpp"
#include "spp/smoothing.hpp"

namespace spp {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class StageTimer {
public:
    explicit StageTimer(std::string name)
        : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
        std::cerr << "[spptool] " << name_ << ": " << ms << " ms\n";
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

CovariateKind kind_from_string(const std::string& s) {
    if (s == "point-smooth") return CovariateKind::point_smooth;
    if (s == "weighted-intensity") return CovariateKind::weighted_intensity;
    if (s == "neighbor-count") return CovariateKind::neighbor_count;
    if (s == "raster") return CovariateKind::raster;
    throw InputError("unknown covariate kind: " + s);
}

std::string kind_to_string(CovariateKind k) {
    switch (k) {
        case CovariateKind::point_smooth: return "point-smooth";
        case CovariateKind::weighted_intensity: return "weighted-intensity";
        case CovariateKind::neighbor_count: return "neighbor-count";
        case CovariateKind::raster: return "raster";
    }
    return "raster";
}

void require_readable(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot read file: " + path);
}

// Collects written files and their content hashes for the report manifest.
class Manifest {
public:
    explicit Manifest(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw InputError("cannot create output dir: " + dir_.string());
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void record(const std::string& file) {
        entries_.push_back({{"path", file}, {"fnv1a64", file_hash_hex(file)}});
    }

    json write_report(const std::string& name, json report) {
        report["files"] = entries_;
        const std::string p = path(name);
        std::ofstream out(p);
        if (!out) throw InputError("cannot write report: " + p);
        out << report.dump(2) << "\n";
        return report;
    }

private:
    fs::path dir_;
    json entries_ = json::array();
};

Projection make_projection(const AnalysisConfig& cfg) { return Projection(cfg.projection); }

std::pair<double, double> lscv_range(const AnalysisConfig& cfg, const Window& w) {
    if (cfg.lscv_lo > 0.0 && cfg.lscv_hi > cfg.lscv_lo)
        return {cfg.lscv_lo, cfg.lscv_hi};
    const double diag = w.bbox().diagonal();
    return {diag / 500.0, diag / 5.0};
}

json bandwidth_json(const Bandwidth& bw) {
    return {{"sigma_x", bw.sigma_x}, {"sigma_y", bw.sigma_y}};
}

json test_result_json(const TestResult& t) {
    json j{{"method", t.method},       {"statistic", t.statistic},
           {"p_value", t.p_value},     {"df", t.df},
           {"n_used", t.n_used},       {"n_dropped", t.n_dropped}};
    for (const auto& [k, v] : t.details) j["details"][k] = v;
    return j;
}

json model_json(const FittedModel& m) {
    json coef = json::array();
    for (Eigen::Index j = 0; j < m.beta.size(); ++j)
        coef.push_back({{"name", m.names[static_cast<std::size_t>(j)]},
                        {"beta", m.beta(j)},
                        {"se", m.se(j)},
                        {"p_value", m.p_values(j)}});
    return {{"coefficients", coef},
            {"loglik", m.loglik},
            {"converged", m.converged},
            {"iterations", m.iterations}};
}

std::vector<double> default_r_grid(const AnalysisConfig& cfg, const Window& w) {
    double r_max = cfg.tests.r_max;
    if (!(r_max > 0.0))
        r_max = 0.25 * std::min(w.bbox().width(), w.bbox().height());
    const int n_r = std::max(cfg.tests.n_r, 2);
    std::vector<double> r(n_r);
    for (int i = 0; i < n_r; ++i) r[i] = r_max * i / (n_r - 1);
    return r;
}

std::vector<BuiltCovariate> build_all_covariates(const AnalysisConfig& cfg,
                                                 const PipelineContext& ctx) {
    std::vector<BuiltCovariate> out;
    out.reserve(cfg.covariates.size());
    for (const auto& cc : cfg.covariates) {
        StageTimer timer("covariate " + cc.name);
        out.push_back(build_covariate(cc, ctx, cfg));
    }
    return out;
}

}  // namespace

std::string file_hash_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot hash missing file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[8192];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof buf)) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

AnalysisConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InputError("invalid JSON config " + path + ": " + e.what());
    }

    AnalysisConfig cfg;
    try {
        cfg.window_path = j.at("window").get<std::string>();
        cfg.window_geo = j.value("window_geo", false);
        if (j.contains("projection")) {
            const auto& p = j.at("projection");
            cfg.projection.parallel1_deg = p.value("parallel1", cfg.projection.parallel1_deg);
            cfg.projection.parallel2_deg = p.value("parallel2", cfg.projection.parallel2_deg);
            cfg.projection.origin_lat_deg = p.value("origin_lat", cfg.projection.origin_lat_deg);
            cfg.projection.origin_lon_deg = p.value("origin_lon", cfg.projection.origin_lon_deg);
            cfg.projection.false_easting_km =
                p.value("false_easting", cfg.projection.false_easting_km);
            cfg.projection.false_northing_km =
                p.value("false_northing", cfg.projection.false_northing_km);
            cfg.projection.semi_major_km = p.value("semi_major", cfg.projection.semi_major_km);
            cfg.projection.flattening = p.value("flattening", cfg.projection.flattening);
        }
        if (j.contains("grid")) {
            cfg.grid_nx = j.at("grid").value("nx", 128);
            cfg.grid_ny = j.at("grid").value("ny", 128);
        }
        cfg.points_path = j.value("points", "");
        cfg.points_geo = j.value("points_geo", false);
        cfg.sigma = j.value("sigma", 20.0);
        cfg.lscv_lo = j.value("lscv_lo", 0.0);
        cfg.lscv_hi = j.value("lscv_hi", 0.0);
        for (const auto& jc : j.value("covariates", json::array())) {
            CovariateConfig cc;
            cc.name = jc.at("name").get<std::string>();
            cc.path = jc.at("path").get<std::string>();
            cc.kind = kind_from_string(jc.at("kind").get<std::string>());
            cc.sigma = jc.value("sigma", 0.0);
            cc.radius = jc.value("radius", 0.0);
            cc.log_transform = jc.value("log_transform", false);
            cc.geo = jc.value("geo", false);
            cfg.covariates.push_back(std::move(cc));
        }
        if (j.contains("tests")) {
            const auto& t = j.at("tests");
            cfg.tests.quadrat_nx = t.value("quadrat_nx", 6);
            cfg.tests.quadrat_ny = t.value("quadrat_ny", 6);
            cfg.tests.nsim = t.value("nsim", 100);
            cfg.tests.r_max = t.value("r_max", 0.0);
            cfg.tests.n_r = t.value("n_r", 50);
        }
        cfg.seed = j.value("seed", 0ULL);
        if (j.contains("stepwise_alpha"))
            cfg.stepwise_alpha = j.at("stepwise_alpha").get<double>();
        cfg.output_dir = j.value("output_dir", "out");
        cfg.threads = j.value("threads", 0);
    } catch (const json::exception& e) {
        throw InputError("config " + path + ": " + e.what());
    }

    if (cfg.grid_nx < 1 || cfg.grid_ny < 1) throw InputError("config: grid nx, ny must be >= 1");
    if (!(cfg.sigma > 0.0)) throw InputError("config: sigma must be > 0");
    if (cfg.stepwise_alpha && !(*cfg.stepwise_alpha > 0.0 && *cfg.stepwise_alpha <= 1.0))
        throw InputError("config: stepwise_alpha must be in (0,1]");

    std::set<std::string> paths;
    auto check_path = [&paths](const std::string& p, const std::string& what) {
        if (p.empty()) return;
        if (!paths.insert(p).second)
            throw InputError("config: path referenced twice: " + p);
        std::ifstream f(p);
        if (!f) throw InputError("config: cannot read " + what + ": " + p);
    };
    check_path(cfg.window_path, "window");
    check_path(cfg.points_path, "points");
    for (const auto& cc : cfg.covariates) {
        check_path(cc.path, "covariate " + cc.name);
        const bool needs_sigma = cc.kind == CovariateKind::point_smooth ||
                                 cc.kind == CovariateKind::weighted_intensity;
        if (needs_sigma && !(cc.sigma > 0.0))
            throw InputError("config: covariate " + cc.name + " needs sigma > 0");
        if (cc.kind == CovariateKind::neighbor_count && !(cc.radius > 0.0))
            throw InputError("config: covariate " + cc.name + " needs radius > 0");
    }
    return cfg;
}

json config_to_json(const AnalysisConfig& cfg) {
    json j;
    j["window"] = cfg.window_path;
    j["window_geo"] = cfg.window_geo;
    j["projection"] = {{"parallel1", cfg.projection.parallel1_deg},
                       {"parallel2", cfg.projection.parallel2_deg},
                       {"origin_lat", cfg.projection.origin_lat_deg},
                       {"origin_lon", cfg.projection.origin_lon_deg},
                       {"false_easting", cfg.projection.false_easting_km},
                       {"false_northing", cfg.projection.false_northing_km},
                       {"semi_major", cfg.projection.semi_major_km},
                       {"flattening", cfg.projection.flattening}};
    j["grid"] = {{"nx", cfg.grid_nx}, {"ny", cfg.grid_ny}};
    j["points"] = cfg.points_path;
    j["points_geo"] = cfg.points_geo;
    j["sigma"] = cfg.sigma;
    j["covariates"] = json::array();
    for (const auto& cc : cfg.covariates)
        j["covariates"].push_back({{"name", cc.name},
                                   {"path", cc.path},
                                   {"kind", kind_to_string(cc.kind)},
                                   {"sigma", cc.sigma},
                                   {"radius", cc.radius},
                                   {"log_transform", cc.log_transform},
                                   {"geo", cc.geo}});
    j["tests"] = {{"quadrat_nx", cfg.tests.quadrat_nx},
                  {"quadrat_ny", cfg.tests.quadrat_ny},
                  {"nsim", cfg.tests.nsim},
                  {"r_max", cfg.tests.r_max},
                  {"n_r", cfg.tests.n_r}};
    j["seed"] = cfg.seed;
    if (cfg.stepwise_alpha) j["stepwise_alpha"] = *cfg.stepwise_alpha;
    j["output_dir"] = cfg.output_dir;
    j["threads"] = cfg.threads;
    return j;
}

PipelineContext make_context(const AnalysisConfig& cfg, bool need_points) {
    set_max_threads(cfg.threads);
    PipelineContext ctx;
    const Projection proj = make_projection(cfg);

    {
        StageTimer timer("load window");
        ctx.window = load_window(cfg.window_path, cfg.window_geo ? &proj : nullptr);
    }
    {
        StageTimer timer("build grid");
        ctx.grid = build_grid({cfg.grid_nx, cfg.grid_ny, ctx.window.get()});
    }
    if (need_points) {
        if (cfg.points_path.empty()) throw InputError("config: points file required");
        StageTimer timer("load points");
        PointsFile pf = load_points_csv(cfg.points_path, cfg.points_geo ? &proj : nullptr);
        FilteredPattern fp = make_pattern_dropping_outside(
            ctx.window, std::move(pf.points), std::move(pf.marks));
        ctx.points = std::move(fp.pattern);
        ctx.points_dropped = fp.n_dropped;
        if (ctx.points_dropped > 0)
            std::cerr << "[spptool] warning: dropped " << ctx.points_dropped
                      << " point(s) outside the window\n";
    }
    return ctx;
}

BuiltCovariate build_covariate(const CovariateConfig& cc, const PipelineContext& ctx,
                               const AnalysisConfig& cfg) {
    BuiltCovariate out;
    out.covariate.name = cc.name;
    out.covariate.log_transform = cc.log_transform;

    if (cc.kind == CovariateKind::raster) {
        PixelImage src = read_esri_ascii(cc.path);
        const bool same_grid =
            src.nx() == ctx.grid.nx() && src.ny() == ctx.grid.ny() &&
            src.dx() == ctx.grid.dx() && src.dy() == ctx.grid.dy() &&
            src.origin().x == ctx.grid.origin().x && src.origin().y == ctx.grid.origin().y;
        if (same_grid) {
            out.covariate.image = std::move(src);
            return out;
        }
        // Nearest-cell resample onto the analysis grid.
        PixelImage img = PixelImage::like(ctx.grid);
        for (int iy = 0; iy < img.ny(); ++iy) {
            for (int ix = 0; ix < img.nx(); ++ix) {
                if (!img.masked(ix, iy)) continue;
                if (const auto v = src.lookup(img.cell_center(ix, iy)))
                    img.set_value(ix, iy, *v);
                else
                    img.set_missing(ix, iy);
            }
        }
        out.covariate.image = std::move(img);
        return out;
    }

    const Projection proj = make_projection(cfg);
    PointsFile pf = load_points_csv(cc.path, cc.geo ? &proj : nullptr);
    FilteredPattern fp =
        make_pattern_dropping_outside(ctx.window, std::move(pf.points), std::move(pf.marks));
    out.n_dropped_outside = fp.n_dropped;
    const PointPattern& pts = fp.pattern;

    switch (cc.kind) {
        case CovariateKind::point_smooth:
            if (!pts.has_marks())
                throw InputError("covariate " + cc.name + ": point-smooth needs a mark column");
            out.covariate.image = nw_smooth(pts, Bandwidth::isotropic(cc.sigma), ctx.grid);
            break;
        case CovariateKind::weighted_intensity: {
            const std::vector<double>* w = pts.has_marks() ? &pts.marks() : nullptr;
            out.covariate.image =
                kernel_intensity(pts, Bandwidth::isotropic(cc.sigma), ctx.grid, w);
            break;
        }
        case CovariateKind::neighbor_count:
            out.covariate.image = count_within(pts, ctx.grid, cc.radius);
            break;
        case CovariateKind::raster:
            break;  // handled above
    }
    return out;
}

json cmd_density(const AnalysisConfig& cfg) {
    PipelineContext ctx = make_context(cfg, true);
    Manifest manifest(cfg.output_dir);
    const PointPattern& pts = *ctx.points;

    json results;
    results["n"] = pts.n();
    results["n_dropped_outside"] = ctx.points_dropped;
    results["window_area"] = ctx.window->area();
    results["masked_cells"] = ctx.grid.masked_count();
    results["average_intensity"] = average_intensity(pts);
    results["sigma"] = cfg.sigma;

    PixelImage lambda_star;
    {
        StageTimer timer("kernel intensity");
        lambda_star = kernel_intensity(pts, Bandwidth::isotropic(cfg.sigma), ctx.grid);
    }
    results["integral"] = lambda_star.integrate();
    if (pts.n() == 0)
        std::cerr << "[spptool] warning: empty point pattern, intensity is zero\n";

    if (pts.n() >= 2) {
        {
            StageTimer timer("bw_scott");
            try {
                results["bw_scott"] = bandwidth_json(bw_scott(pts));
            } catch (const std::exception& e) {
                results["bw_scott"] = nullptr;
                std::cerr << "[spptool] bw_scott unavailable: " << e.what() << "\n";
            }
        }
        {
            StageTimer timer("bw_lscv_density");
            const auto [lo, hi] = lscv_range(cfg, *ctx.window);
            const BandwidthSearch s = bw_lscv_density(pts, ctx.grid, lo, hi);
            results["bw_lscv"] = {{"sigma", s.sigma},
                                  {"unimodal", s.unimodal},
                                  {"degenerate", s.degenerate},
                                  {"range", {lo, hi}}};
        }
    } else {
        results["bw_scott"] = nullptr;
        results["bw_lscv"] = nullptr;
    }

    const std::string raster_path = manifest.path("lambda_star.asc");
    write_esri_ascii(lambda_star, raster_path);
    manifest.record(raster_path);

    json report{{"command", "density"}, {"config", config_to_json(cfg)},
                {"results", results}};
    return manifest.write_report("density_report.json", std::move(report));
}

json cmd_smooth_covariate(const AnalysisConfig& cfg) {
    if (cfg.covariates.empty()) throw InputError("config: no covariates configured");
    PipelineContext ctx = make_context(cfg, false);
    Manifest manifest(cfg.output_dir);

    json results = json::array();
    for (const auto& cc : cfg.covariates) {
        BuiltCovariate built = build_covariate(cc, ctx, cfg);
        const std::string path = manifest.path("cov_" + cc.name + ".asc");
        write_esri_ascii(built.covariate.image, path);
        manifest.record(path);
        results.push_back({{"name", cc.name},
                           {"kind", kind_to_string(cc.kind)},
                           {"defined_cells", built.covariate.image.defined_count()},
                           {"n_dropped_outside", built.n_dropped_outside},
                           {"integral", built.covariate.image.integrate()}});
    }
    json report{{"command", "smooth-covariate"},
                {"config", config_to_json(cfg)},
                {"results", {{"covariates", results}}}};
    return manifest.write_report("covariates_report.json", std::move(report));
}

json cmd_test(const AnalysisConfig& cfg) {
    PipelineContext ctx = make_context(cfg, true);
    Manifest manifest(cfg.output_dir);
    const PointPattern& pts = *ctx.points;
    if (pts.n() < 2) throw InputError("test: need at least 2 points");

    json results;
    {
        StageTimer timer("quadrat test");
        results["quadrat"] = test_result_json(
            quadrat_test(pts, cfg.tests.quadrat_nx, cfg.tests.quadrat_ny, ctx.grid));
    }

    results["ks"] = json::array();
    for (const auto& built : build_all_covariates(cfg, ctx)) {
        StageTimer timer("ks test " + built.covariate.name);
        json t = test_result_json(ks_test_covariate(pts, built.covariate.image));
        t["covariate"] = built.covariate.name;
        results["ks"].push_back(std::move(t));
    }

    {
        StageTimer timer("k envelope");
        const std::vector<double> r = default_r_grid(cfg, *ctx.window);
        const EnvelopeResult env =
            k_envelope(pts, cfg.tests.nsim, r, ctx.grid, RngSeed{cfg.seed, 0});
        results["k_envelope"] = {{"nsim", env.envelope.nsim},
                                 {"r", env.envelope.r},
                                 {"lower", env.envelope.lower},
                                 {"upper", env.envelope.upper},
                                 {"khat", env.data_k.khat},
                                 {"correction", env.data_k.correction},
                                 {"outside", env.outside}};
    }

    json report{{"command", "test"}, {"config", config_to_json(cfg)},
                {"results", results}};
    return manifest.write_report("test_report.json", std::move(report));
}

json cmd_fit(const AnalysisConfig& cfg) {
    PipelineContext ctx = make_context(cfg, true);
    Manifest manifest(cfg.output_dir);
    const PointPattern& pts = *ctx.points;

    std::vector<BuiltCovariate> built = build_all_covariates(cfg, ctx);
    std::vector<CovariateImage> covariates;
    covariates.reserve(built.size());
    for (auto& b : built) covariates.push_back(std::move(b.covariate));

    json results;
    results["n"] = pts.n();
    results["n_dropped_outside"] = ctx.points_dropped;

    QuadratureScheme quad;
    {
        StageTimer timer("quadrature");
        quad = build_quadrature(pts, covariates, ctx.grid);
    }
    results["quadrature"] = {{"n_data", quad.n_data},
                             {"n_dummy", static_cast<long>(quad.points.size()) - quad.n_data},
                             {"n_dropped_data", quad.n_dropped_data},
                             {"n_dropped_dummy", quad.n_dropped_dummy},
                             {"total_weight", quad.total_weight}};

    FittedModel final_model;
    {
        StageTimer timer("fit");
        FittedModel full = fit_ppm(quad);
        results["full_model"] = model_json(full);
        if (cfg.stepwise_alpha) {
            StepwiseResult sw = stepwise_backward(quad, *cfg.stepwise_alpha);
            json trace = json::array();
            for (const auto& rm : sw.trace)
                trace.push_back({{"name", rm.name}, {"p_value", rm.p_value}});
            results["stepwise"] = {{"alpha", *cfg.stepwise_alpha},
                                   {"removed", trace},
                                   {"kept", sw.kept}};
            final_model = std::move(sw.model);
        } else {
            final_model = std::move(full);
        }
        results["final_model"] = model_json(final_model);
    }
    if (!final_model.converged)
        std::cerr << "[spptool] warning: IRLS did not converge\n";

    // Keep only the covariates the final model retained.
    std::vector<CovariateImage> kept;
    for (const auto& cov : covariates)
        for (std::size_t j = 1; j < final_model.names.size(); ++j)
            if (cov.term_name() == final_model.names[j]) kept.push_back(cov);

    PixelImage lambda_hat, lambda_star;
    {
        StageTimer timer("predict");
        lambda_hat = predict_intensity(final_model, kept, ctx.grid);
        lambda_star = kernel_intensity(pts, Bandwidth::isotropic(cfg.sigma), ctx.grid);
    }
    results["lambda_hat_integral"] = lambda_hat.integrate();
    results["lambda_star_integral"] = lambda_star.integrate();

    const PixelImage res_raw = residuals(lambda_star, lambda_hat, ResidualKind::raw);
    const PixelImage res_pearson =
        residuals(lambda_star, lambda_hat, ResidualKind::pearson);
    results["pearson_quantiles"] = {
        {"q05", res_pearson.quantile_threshold(0.05)},
        {"q95", res_pearson.quantile_threshold(0.95)}};

    for (const auto& [name, img] :
         std::initializer_list<std::pair<const char*, const PixelImage*>>{
             {"lambda_hat.asc", &lambda_hat},
             {"lambda_star.asc", &lambda_star},
             {"residual_raw.asc", &res_raw},
             {"residual_pearson.asc", &res_pearson}}) {
        const std::string path = manifest.path(name);
        write_esri_ascii(*img, path);
        manifest.record(path);
    }

    json report{{"command", "fit"}, {"config", config_to_json(cfg)},
                {"results", results}};
    return manifest.write_report("fit_report.json", std::move(report));
}

json cmd_simulate(const AnalysisConfig& cfg, const SimulateOptions& opts) {
    PipelineContext ctx = make_context(cfg, false);
    Manifest manifest(cfg.output_dir);

    PointPattern sim(ctx.window, {});
    const RngSeed seed{cfg.seed, 0};
    if (opts.kind == "csr") {
        sim = sim_csr(ctx.window, opts.n, seed);
    } else if (opts.kind == "poisson") {
        sim = sim_poisson(ctx.window, opts.lambda, seed);
    } else if (opts.kind == "inhom") {
        if (opts.lambda_raster.empty())
            throw InputError("simulate inhom: --lambda-raster required");
        require_readable(opts.lambda_raster);
        sim = sim_inhomogeneous(ctx.window, read_esri_ascii(opts.lambda_raster), seed);
    } else if (opts.kind == "cluster") {
        sim = sim_cluster(ctx.window, opts.parents, opts.offspring, opts.cluster_sigma,
                          seed);
    } else {
        throw InputError("simulate: unknown kind " + opts.kind);
    }

    const std::string path = manifest.path("simulated_points.csv");
    write_points_csv(path, sim);
    manifest.record(path);

    json report{{"command", "simulate"},
                {"config", config_to_json(cfg)},
                {"results",
                 {{"kind", opts.kind}, {"n", sim.n()}, {"seed", cfg.seed}}}};
    return manifest.write_report("simulate_report.json", std::move(report));
}

json cmd_render(const std::string& raster_path, const std::string& out_png,
                PaletteMode mode) {
    require_readable(raster_path);
    const PixelImage img = read_esri_ascii(raster_path);
    const std::vector<LegendEntry> legend = render_png(img, out_png, mode);

    json jlegend = json::array();
    for (const auto& e : legend)
        jlegend.push_back({{"value", e.value}, {"color", e.color}});
    json sidecar{{"raster", raster_path},
                 {"mode", mode == PaletteMode::linear ? "linear" : "quantile"},
                 {"breaks", jlegend}};
    const std::string legend_path = out_png + ".legend.json";
    std::ofstream out(legend_path);
    if (!out) throw InputError("cannot write legend: " + legend_path);
    out << sidecar.dump(2) << "\n";
    return sidecar;
}

}  // namespace spp
