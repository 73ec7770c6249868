#ifndef SPP_PIPELINE_HPP
#define SPP_PIPELINE_HPP

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spp/model.hpp"
#include "spp/pattern.hpp"
#include "spp/projection.hpp"
#include "spp/raster.hpp"
#include "spp/render.hpp"

namespace spp {

/// Unreadable files, malformed configs and the like; the CLI maps this to
/// exit code 2 (numerical failures exit 3).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CovariateKind { point_smooth, weighted_intensity, neighbor_count, raster };

struct CovariateConfig {
    std::string name;
    std::string path;
    CovariateKind kind{CovariateKind::raster};
    double sigma{0.0};      // km, smoothing kinds
    double radius{0.0};     // km, neighbor-count
    bool log_transform{false};
    bool geo{false};        // point file carries lon/lat
};

struct TestConfig {
    int quadrat_nx{6};
    int quadrat_ny{6};
    int nsim{100};
    double r_max{0.0};  // 0 = quarter of the shorter bbox side
    int n_r{50};
};

struct AnalysisConfig {
    std::string window_path;
    bool window_geo{false};
    ProjectionSpec projection{ProjectionSpec::lambert2_etendu()};
    int grid_nx{128};
    int grid_ny{128};
    std::string points_path;
    bool points_geo{false};
    double sigma{20.0};  // response intensity bandwidth, km
    double lscv_lo{0.0}, lscv_hi{0.0};  // 0 = derived from the window size
    std::vector<CovariateConfig> covariates;
    TestConfig tests;
    std::uint64_t seed{0};
    std::optional<double> stepwise_alpha;
    std::string output_dir{"out"};
    int threads{0};
};

/// Parses the declarative JSON config file and validates it (paths
/// readable and pairwise distinct, positive bandwidths). Throws InputError.
AnalysisConfig load_config(const std::string& path);

nlohmann::json config_to_json(const AnalysisConfig& cfg);

/// Window, analysis grid and ingested response points shared by the
/// pipeline stages.
struct PipelineContext {
    std::shared_ptr<const Window> window;
    PixelImage grid;
    std::optional<PointPattern> points;
    long points_dropped{0};
};

PipelineContext make_context(const AnalysisConfig& cfg, bool need_points);

struct BuiltCovariate {
    CovariateImage covariate;
    long n_dropped_outside{0};  // source points outside the window
};

BuiltCovariate build_covariate(const CovariateConfig& cc, const PipelineContext& ctx,
                               const AnalysisConfig& cfg);

/// Pipeline commands. Each writes its artifacts under cfg.output_dir,
/// writes a <command>_report.json and returns the report. Reports are
/// deterministic for a fixed config and seed; timings go to stderr only.
nlohmann::json cmd_density(const AnalysisConfig& cfg);
nlohmann::json cmd_smooth_covariate(const AnalysisConfig& cfg);
nlohmann::json cmd_test(const AnalysisConfig& cfg);
nlohmann::json cmd_fit(const AnalysisConfig& cfg);

struct SimulateOptions {
    std::string kind{"csr"};  // csr | poisson | inhom | cluster
    long n{100};              // csr
    double lambda{0.0};       // poisson
    std::string lambda_raster;  // inhom
    int parents{25};
    int offspring{10};
    double cluster_sigma{1.0};
};
nlohmann::json cmd_simulate(const AnalysisConfig& cfg, const SimulateOptions& opts);

nlohmann::json cmd_render(const std::string& raster_path, const std::string& out_png,
                          PaletteMode mode);

/// FNV-1a 64-bit content hash used in report file manifests.
std::string file_hash_hex(const std::string& path);

}  // namespace spp

#endif
