#include "spp/pattern.hpp"

#include <cmath>
#include <stdexcept>

#include "spp/parallel.hpp"

namespace spp {

PointPattern::PointPattern(std::shared_ptr<const Window> window,
                           std::vector<PlanarPoint> points,
                           std::vector<double> marks)
    : window_(std::move(window)), points_(std::move(points)), marks_(std::move(marks)) {
    if (!window_) throw std::invalid_argument("point pattern needs a window");
    if (!marks_.empty() && marks_.size() != points_.size())
        throw std::invalid_argument("marks must align 1:1 with points");
    for (const double m : marks_)
        if (!std::isfinite(m)) throw std::invalid_argument("non-finite mark");
    long outside = 0;
    for (const auto& p : points_)
        if (!window_->contains(p)) ++outside;
    if (outside > 0)
        throw std::invalid_argument(std::to_string(outside) +
                                    " point(s) outside the window");
}

FilteredPattern make_pattern_dropping_outside(std::shared_ptr<const Window> window,
                                              std::vector<PlanarPoint> points,
                                              std::vector<double> marks) {
    if (!window) throw std::invalid_argument("point pattern needs a window");
    std::vector<PlanarPoint> kept;
    std::vector<double> kept_marks;
    long dropped = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (window->contains(points[i])) {
            kept.push_back(points[i]);
            if (!marks.empty()) kept_marks.push_back(marks[i]);
        } else {
            ++dropped;
        }
    }
    return {PointPattern(std::move(window), std::move(kept), std::move(kept_marks)),
            dropped};
}

std::optional<PlanarPoint> aggregate_observation(const ObservationGroup& g,
                                                 double max_radius) {
    if (g.witness_points.empty())
        throw std::invalid_argument("observation group is empty");
    if (max_radius <= 0.0)
        throw std::invalid_argument("max_radius must be positive");

    const std::vector<PlanarPoint> hull = convex_hull(g.witness_points);
    PlanarPoint centroid;
    if (hull.size() == 1) {
        centroid = hull[0];
    } else if (hull.size() == 2) {
        centroid = {0.5 * (hull[0].x + hull[1].x), 0.5 * (hull[0].y + hull[1].y)};
    } else {
        centroid = ring_centroid(hull);
    }
    for (const auto& v : hull)
        if (distance(centroid, v) > max_radius) return std::nullopt;
    return centroid;
}

PixelImage count_within(const PointPattern& sites, const PixelImage& grid,
                        double radius) {
    if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
    PixelImage out = PixelImage::like(grid);
    const auto& pts = sites.points();
    parallel_for_rows(grid.ny(), [&](int iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            if (!grid.masked(ix, iy)) continue;
            const PlanarPoint u = grid.cell_center(ix, iy);
            long count = 0;
            for (const auto& s : pts)
                if (distance(u, s) <= radius) ++count;
            out.set_value(ix, iy, static_cast<double>(count));
        }
    });
    return out;
}

double average_intensity(const PointPattern& p) {
    return static_cast<double>(p.n()) / p.window().area();
}

}  // namespace spp
