#ifndef SPP_IO_HPP
#define SPP_IO_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spp/geometry.hpp"
#include "spp/pattern.hpp"
#include "spp/projection.hpp"

namespace spp {

/// GeoJSON-style polygon (a Polygon object, a Feature wrapping one, or the
/// first feature of a FeatureCollection). When projection is given, vertex
/// coordinates are lon/lat degrees and are projected on load; otherwise
/// they are kilometers.
std::shared_ptr<const Window> load_window(const std::string& path,
                                          const Projection* projection = nullptr);

struct PointsFile {
    std::vector<std::string> ids;
    std::vector<PlanarPoint> points;
    std::vector<double> marks;  // empty when the file has no mark column
};

/// CSV with header `id,x,y[,mark]` in kilometers, or `id,lon,lat[,mark]`
/// projected on load when a projection is given.
PointsFile load_points_csv(const std::string& path,
                           const Projection* projection = nullptr);

void write_points_csv(const std::string& path, const PointPattern& p);

/// CSV with header `group_id,x,y`; consecutive rows sharing group_id form
/// one observation group (kilometers, or lon/lat with a projection).
std::vector<ObservationGroup> load_groups_csv(const std::string& path,
                                              const Projection* projection = nullptr);

}  // namespace spp

#endif
