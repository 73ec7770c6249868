#ifndef SPP_PATTERN_HPP
#define SPP_PATTERN_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spp/geometry.hpp"
#include "spp/raster.hpp"

namespace spp {

/// Finite planar point pattern in a window, with optional per-point marks.
/// Construction rejects points outside the window.
class PointPattern {
public:
    PointPattern(std::shared_ptr<const Window> window,
                 std::vector<PlanarPoint> points,
                 std::vector<double> marks = {});

    long n() const { return static_cast<long>(points_.size()); }
    const std::vector<PlanarPoint>& points() const { return points_; }
    bool has_marks() const { return !marks_.empty(); }
    const std::vector<double>& marks() const { return marks_; }
    const Window& window() const { return *window_; }
    std::shared_ptr<const Window> window_ptr() const { return window_; }

private:
    std::shared_ptr<const Window> window_;
    std::vector<PlanarPoint> points_;
    std::vector<double> marks_;
};

/// Points outside the window are dropped (with a count) instead of erroring.
struct FilteredPattern {
    PointPattern pattern;
    long n_dropped;
};
FilteredPattern make_pattern_dropping_outside(std::shared_ptr<const Window> window,
                                              std::vector<PlanarPoint> points,
                                              std::vector<double> marks = {});

/// One multi-witness observation to be reduced to a single location.
struct ObservationGroup {
    std::string id;
    std::vector<PlanarPoint> witness_points;
};

/// Centroid of the convex hull of the witness points, or nullopt when any
/// hull vertex is farther than max_radius from the centroid (the
/// observation is too imprecise to locate).
std::optional<PlanarPoint> aggregate_observation(const ObservationGroup& g,
                                                 double max_radius);

/// Per masked cell: number of sites within `radius` of the cell center
/// (inclusive boundary).
PixelImage count_within(const PointPattern& sites, const PixelImage& grid,
                        double radius);

/// n / window area.
double average_intensity(const PointPattern& p);

}  // namespace spp

#endif
