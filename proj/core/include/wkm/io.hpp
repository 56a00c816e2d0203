#ifndef WKM_IO_HPP
#define WKM_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wkm/core.hpp"
#include "wkm/sensor.hpp"

/**
 * @file io.hpp
 * @brief File formats.
 *
 * Point sets are CSV with header `x1,...,xd,weight`, one point per row, `.`
 * as decimal separator. Regions are JSON:
 *
 *     {"polygon": [[0,0],[1,0],[1,1],[0,1]],
 *      "density": {"type": "uniform"},
 *      "grid_eps": 0.05}
 *
 * with density types `uniform`, `gaussian_mixture` (`components`: list of
 * `{"mean": [x,y], "cov": [[a,b],[c,d]], "weight": w}`) and `raster`
 * (`origin`, `cell_size`: [w,h], `shape`: [nx,ny], `values`, x fastest).
 */

namespace wkm {

/// Throws InputError with a 1-based line number on malformed input.
[[nodiscard]] WeightedPointSet read_points_csv(std::istream& in);
[[nodiscard]] WeightedPointSet load_points_csv(const std::filesystem::path& path);

/// Numbers are written in shortest round-trip form.
void write_points_csv(std::ostream& out, const WeightedPointSet& points);
void save_points_csv(const std::filesystem::path& path, const WeightedPointSet& points);

struct RegionFile {
  SensorRegion region;
  std::optional<double> grid_eps;
};

[[nodiscard]] RegionFile parse_region(const nlohmann::json& doc);
[[nodiscard]] RegionFile load_region(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json region_to_json(const SensorRegion& region, std::optional<double> grid_eps = {});

[[nodiscard]] nlohmann::json centers_to_json(const CenterSet& centers);
/// Everything except timing, so equal runs serialize to equal bytes.
[[nodiscard]] nlohmann::json result_to_json(const ClusteringResult& result);
[[nodiscard]] nlohmann::json placement_to_json(const Placement& placement);

}  // namespace wkm

#endif  // WKM_IO_HPP
