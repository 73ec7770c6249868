#include "spp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace spp {

namespace {

double cross(PlanarPoint o, PlanarPoint a, PlanarPoint b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(PlanarPoint a, PlanarPoint b, PlanarPoint p) {
    if (cross(a, b, p) != 0.0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

// Proper crossing test for the simplicity check: segments sharing an
// endpoint (adjacent ring edges) are skipped by the caller.
bool segments_cross(PlanarPoint a, PlanarPoint b, PlanarPoint c, PlanarPoint d) {
    const double d1 = cross(c, d, a);
    const double d2 = cross(c, d, b);
    const double d3 = cross(a, b, c);
    const double d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    // Collinear overlap: an interior point of one segment lying on the other.
    if (d1 == 0 && on_segment(c, d, a)) return true;
    if (d2 == 0 && on_segment(c, d, b)) return true;
    if (d3 == 0 && on_segment(a, b, c)) return true;
    if (d4 == 0 && on_segment(a, b, d)) return true;
    return false;
}

Ring normalize_ring(Ring ring) {
    // Accept closed input (first vertex repeated at the end) and store open.
    while (ring.size() > 1 && ring.front().x == ring.back().x &&
           ring.front().y == ring.back().y)
        ring.pop_back();
    return ring;
}

void validate_ring(const Ring& ring) {
    if (ring.size() < 3)
        throw std::invalid_argument("window ring needs at least 3 vertices");
    for (const auto& p : ring)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("window ring has non-finite vertex");
    if (ring_signed_area(ring) == 0.0)
        throw std::invalid_argument("window ring is degenerate (zero area)");
    const std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            // Skip edges adjacent to edge i (shared vertices).
            if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
            if (segments_cross(ring[i], ring[(i + 1) % m], ring[j], ring[(j + 1) % m]))
                throw std::invalid_argument("window ring is self-intersecting");
        }
    }
}

}  // namespace

double ring_signed_area(const Ring& ring) {
    double acc = 0.0;
    const std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = ring[i];
        const auto& b = ring[(i + 1) % m];
        acc += a.x * b.y - b.x * a.y;
    }
    return 0.5 * acc;
}

PlanarPoint ring_centroid(const Ring& ring) {
    const double a = ring_signed_area(ring);
    double scale = 0.0;
    for (const auto& p : ring) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    if (std::abs(a) <= 1e-12 * std::max(1.0, scale * scale)) {
        PlanarPoint mean{};
        for (const auto& p : ring) {
            mean.x += p.x;
            mean.y += p.y;
        }
        mean.x /= static_cast<double>(ring.size());
        mean.y /= static_cast<double>(ring.size());
        return mean;
    }
    double cx = 0.0, cy = 0.0;
    const std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = ring[i];
        const auto& q = ring[(i + 1) % m];
        const double w = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

Window::Window(std::vector<Ring> rings) {
    if (rings.empty()) throw std::invalid_argument("window needs an outer ring");
    for (auto& r : rings) {
        r = normalize_ring(std::move(r));
        validate_ring(r);
    }
    rings_ = std::move(rings);

    double outer = std::abs(ring_signed_area(rings_[0]));
    for (std::size_t i = 1; i < rings_.size(); ++i)
        outer -= std::abs(ring_signed_area(rings_[i]));
    if (outer <= 0.0)
        throw std::invalid_argument("window area is not positive");
    area_ = outer;

    bbox_.xmin = bbox_.ymin = std::numeric_limits<double>::infinity();
    bbox_.xmax = bbox_.ymax = -std::numeric_limits<double>::infinity();
    for (const auto& p : rings_[0]) {
        bbox_.xmin = std::min(bbox_.xmin, p.x);
        bbox_.xmax = std::max(bbox_.xmax, p.x);
        bbox_.ymin = std::min(bbox_.ymin, p.y);
        bbox_.ymax = std::max(bbox_.ymax, p.y);
    }
}

Window Window::rectangle(double xmin, double ymin, double xmax, double ymax) {
    return Window({{{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}}});
}

bool Window::contains(PlanarPoint p) const {
    if (p.x < bbox_.xmin || p.x > bbox_.xmax || p.y < bbox_.ymin || p.y > bbox_.ymax)
        return false;
    int crossings = 0;
    for (const auto& ring : rings_) {
        const std::size_t m = ring.size();
        for (std::size_t i = 0; i < m; ++i) {
            const auto& a = ring[i];
            const auto& b = ring[(i + 1) % m];
            if (on_segment(a, b, p)) return true;
            // Half-open rule on the vertical span avoids double-counting vertices.
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (x_at > p.x) ++crossings;
            }
        }
    }
    return (crossings % 2) == 1;
}

std::vector<PlanarPoint> convex_hull(std::vector<PlanarPoint> points) {
    std::sort(points.begin(), points.end(), [](PlanarPoint a, PlanarPoint b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [](PlanarPoint a, PlanarPoint b) {
                                 return a.x == b.x && a.y == b.y;
                             }),
                 points.end());
    const std::size_t n = points.size();
    if (n <= 2) return points;

    std::vector<PlanarPoint> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace spp
