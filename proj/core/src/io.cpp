#include "wkm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "wkm/error.hpp"

namespace wkm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

double parse_field(std::string_view field, std::size_t line) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (field.empty() || res.ec != std::errc() || res.ptr != end) {
    fail_at(line, "cannot parse number '" + std::string(field) + "'");
  }
  return v;
}

Vec2 read_pair(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError(std::string(what) + " must be a pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json pair_json(Vec2 v) { return nlohmann::json::array({v.x, v.y}); }

Density parse_density(const nlohmann::json& d) {
  if (!d.is_object() || !d.contains("type") || !d["type"].is_string()) {
    throw InputError("density needs a string 'type'");
  }
  const auto type = d["type"].get<std::string>();
  if (type == "uniform") return Density(UniformDensity{});
  if (type == "gaussian_mixture") {
    GaussianMixtureDensity mix;
    if (!d.contains("components") || !d["components"].is_array()) {
      throw InputError("gaussian_mixture needs a 'components' array");
    }
    for (const auto& c : d["components"]) {
      GaussianComponent g;
      g.mean = read_pair(c.at("mean"), "component mean");
      const auto& cov = c.at("cov");
      if (!cov.is_array() || cov.size() != 2) throw InputError("component cov must be a 2x2 array");
      const Vec2 r0 = read_pair(cov[0], "cov row");
      const Vec2 r1 = read_pair(cov[1], "cov row");
      g.cov = {r0.x, r0.y, r1.x, r1.y};
      g.weight = c.value("weight", 1.0);
      mix.components.push_back(g);
    }
    return Density(std::move(mix));
  }
  if (type == "raster") {
    RasterDensity r;
    r.origin = read_pair(d.at("origin"), "raster origin");
    const Vec2 size = read_pair(d.at("cell_size"), "raster cell_size");
    r.cell_width = size.x;
    r.cell_height = size.y;
    const auto& shape = d.at("shape");
    if (!shape.is_array() || shape.size() != 2) throw InputError("raster shape must be [nx, ny]");
    r.nx = shape[0].get<std::size_t>();
    r.ny = shape[1].get<std::size_t>();
    r.values = d.at("values").get<std::vector<double>>();
    return Density(std::move(r));
  }
  throw InputError("unknown density type '" + type + "'");
}

nlohmann::json density_json(const Density& density) {
  nlohmann::json out;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, UniformDensity>) {
          out = {{"type", "uniform"}};
        } else if constexpr (std::is_same_v<T, GaussianMixtureDensity>) {
          nlohmann::json comps = nlohmann::json::array();
          for (const auto& c : shape.components) {
            comps.push_back({{"mean", pair_json(c.mean)},
                             {"cov", {{c.cov[0], c.cov[1]}, {c.cov[2], c.cov[3]}}},
                             {"weight", c.weight}});
          }
          out = {{"type", "gaussian_mixture"}, {"components", comps}};
        } else {
          out = {{"type", "raster"},
                 {"origin", pair_json(shape.origin)},
                 {"cell_size", {shape.cell_width, shape.cell_height}},
                 {"shape", {shape.nx, shape.ny}},
                 {"values", shape.values}};
        }
      },
      density.shape());
  if (density.scale() != 1.0) out["scale"] = density.scale();
  return out;
}

}  // namespace

WeightedPointSet read_points_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<double> coords;
  std::vector<double> weights;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    if (!have_header) {
      if (fields.size() < 2 || fields.back() != "weight") fail_at(line_no, "header must be x1,...,xd,weight");
      for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
        if (fields[j] != "x" + std::to_string(j + 1)) {
          fail_at(line_no, "header column " + std::to_string(j + 1) + " must be x" + std::to_string(j + 1));
        }
      }
      dim = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != dim + 1) {
      fail_at(line_no, "expected " + std::to_string(dim + 1) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = parse_field(fields[j], line_no);
      if (!std::isfinite(v)) fail_at(line_no, "coordinates must be finite");
      coords.push_back(v);
    }
    const double w = parse_field(fields[dim], line_no);
    if (!(w > 0.0) || !std::isfinite(w)) fail_at(line_no, "weight must be positive and finite");
    weights.push_back(w);
  }
  if (!have_header) throw InputError("line 1: missing header x1,...,xd,weight");
  if (weights.empty()) throw InputError("line " + std::to_string(line_no) + ": no data rows");
  return {dim, std::move(coords), std::move(weights)};
}

WeightedPointSet load_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return read_points_csv(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_points_csv(std::ostream& out, const WeightedPointSet& points) {
  for (std::size_t j = 0; j < points.dim(); ++j) out << 'x' << (j + 1) << ',';
  out << "weight\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double x : points.point(i)) out << format_number(x) << ',';
    out << format_number(points.weight(i)) << '\n';
  }
}

void save_points_csv(const std::filesystem::path& path, const WeightedPointSet& points) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_points_csv(out, points);
}

RegionFile parse_region(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("region file must be a JSON object");
  if (!doc.contains("polygon") || !doc["polygon"].is_array()) throw InputError("region needs a 'polygon' array");
  Polygon poly;
  for (const auto& v : doc["polygon"]) poly.push_back(read_pair(v, "polygon vertex"));
  Density density;
  try {
    density = doc.contains("density") ? parse_density(doc["density"]) : Density(UniformDensity{});
  } catch (const nlohmann::json::exception& e) {
    // Missing keys and wrong value types inside the density block.
    throw InputError(std::string("malformed density: ") + e.what());
  }
  RegionFile out{make_region(std::move(poly), std::move(density)), std::nullopt};
  if (doc.contains("grid_eps")) {
    if (!doc["grid_eps"].is_number()) throw InputError("grid_eps must be a number");
    out.grid_eps = doc["grid_eps"].get<double>();
  }
  return out;
}

RegionFile load_region(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    return parse_region(doc);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

nlohmann::json region_to_json(const SensorRegion& region, std::optional<double> grid_eps) {
  nlohmann::json poly = nlohmann::json::array();
  for (const auto& v : region.polygon) poly.push_back(pair_json(v));
  nlohmann::json out = {{"polygon", poly}, {"density", density_json(region.density)}};
  if (grid_eps) out["grid_eps"] = *grid_eps;
  return out;
}

nlohmann::json centers_to_json(const CenterSet& centers) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto c = centers.center(i);
    out.push_back(std::vector<double>(c.begin(), c.end()));
  }
  return out;
}

nlohmann::json result_to_json(const ClusteringResult& result) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : result.meta.params) params[key] = value;
  nlohmann::json out = {
      {"solver", result.meta.solver},
      {"seed", result.meta.seed},
      {"params", params},
      {"iterations", result.meta.iterations},
      {"cost", result.cost},
      {"centers", centers_to_json(result.centers)},
      {"assignment", result.assignment},
  };
  return out;
}

nlohmann::json placement_to_json(const Placement& placement) {
  return {
      {"solver", result_to_json(placement.clustering)},
      {"centers", centers_to_json(placement.clustering.centers)},
      {"coverage_cost", placement.coverage},
      {"weighted_cost", placement.weighted_cost},
      {"inertia", placement.inertia},
      {"decomposition_rhs", placement.weighted_cost + placement.inertia},
      {"grid_eps", placement.discretization.grid_eps},
      {"cells", placement.discretization.cells.size()},
      {"dropped_cells", placement.discretization.dropped},
      {"total_cell_weight", placement.discretization.total_weight()},
      {"warnings", placement.warnings},
  };
}

}  // namespace wkm
