#ifndef SPP_GEOMETRY_HPP
#define SPP_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <vector>

namespace spp {

/// Planar location in kilometers (east, north).
struct PlanarPoint {
    double x{0.0};
    double y{0.0};
};

inline double distance(PlanarPoint p, PlanarPoint q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

struct Bbox {
    double xmin{0.0}, xmax{0.0}, ymin{0.0}, ymax{0.0};

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diagonal() const { return std::hypot(width(), height()); }
};

using Ring = std::vector<PlanarPoint>;

/// Polygonal observation region: one outer ring plus optional holes.
/// Rings are stored open (no repeated closing vertex). Points exactly on
/// an edge count as inside.
class Window {
public:
    /// Validates and takes ownership of the rings. The first ring is the
    /// outer boundary, the rest are holes. Throws std::invalid_argument on
    /// degenerate or self-intersecting rings, or non-positive area.
    explicit Window(std::vector<Ring> rings);

    static Window rectangle(double xmin, double ymin, double xmax, double ymax);

    const std::vector<Ring>& rings() const { return rings_; }
    double area() const { return area_; }
    const Bbox& bbox() const { return bbox_; }

    /// Even-odd rule over all rings; on-edge points are inside.
    bool contains(PlanarPoint p) const;

private:
    std::vector<Ring> rings_;
    double area_{0.0};
    Bbox bbox_;
};

inline bool contains(const Window& w, PlanarPoint p) { return w.contains(p); }
inline double polygon_area(const Window& w) { return w.area(); }

/// Signed shoelace area of one ring (positive for counter-clockwise order).
double ring_signed_area(const Ring& ring);

/// Area centroid of a simple polygon ring; falls back to the vertex mean
/// when the ring is degenerate (near-zero area).
PlanarPoint ring_centroid(const Ring& ring);

/// Monotone-chain convex hull in counter-clockwise order, collinear points
/// dropped. Collinear input collapses to its two extreme points; a single
/// point is returned as-is.
std::vector<PlanarPoint> convex_hull(std::vector<PlanarPoint> points);

}  // namespace spp

#endif
