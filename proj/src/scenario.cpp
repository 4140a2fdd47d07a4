#include "beamhop/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "beamhop/errors.hpp"

namespace beamhop {

namespace {

using Vec3 = Eigen::Vector3d;

constexpr double kDeg = kPi / 180.0;

Vec3 to_cartesian(const GeoPoint& p, double radius_km) {
  const double lat = p.lat_deg * kDeg;
  const double lon = p.lon_deg * kDeg;
  return {radius_km * std::cos(lat) * std::cos(lon), radius_km * std::cos(lat) * std::sin(lon),
          radius_km * std::sin(lat)};
}

Vec3 satellite_position(const SatelliteGeometry& sat) {
  return to_cartesian(sat.nadir, kEarthRadiusKm + sat.altitude_km);
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double normalize_lon(double lon) {
  double out = std::fmod(lon + 180.0, 360.0);
  if (out < 0.0) {
    out += 360.0;
  }
  out -= 180.0;
  return out >= 180.0 ? out - 360.0 : out;
}

// Point at planar offset (east, north) km under the azimuthal equidistant map.
GeoPoint destination(const GeoPoint& origin, double east_km, double north_km) {
  const double dist = std::hypot(east_km, north_km);
  if (dist == 0.0) {
    return origin;
  }
  const double bearing = std::atan2(east_km, north_km);
  const double delta = dist / kEarthRadiusKm;
  const double lat1 = origin.lat_deg * kDeg;
  const double lon1 = origin.lon_deg * kDeg;
  const double sin_lat2 =
      std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(bearing);
  const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
  const double lon2 = lon1 + std::atan2(std::sin(bearing) * std::sin(delta) * std::cos(lat1),
                                        std::cos(delta) - std::sin(lat1) * sin_lat2);
  return {lat2 / kDeg, normalize_lon(lon2 / kDeg)};
}

int hex_distance(int q, int r) { return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2; }

void check(bool ok, const std::string& message) {
  if (!ok) {
    throw ValidationError(message);
  }
}

} // namespace

// ---- LinkBudget -----------------------------------------------------------

double LinkBudget::g_t() const { return std::pow(10.0, g_t_dbi / 10.0); }

double LinkBudget::g_max() const {
  const double k = kPi * aperture_m / wavelength_m();
  return efficiency * k * k;
}

double LinkBudget::g_max_dbi() const { return 10.0 * std::log10(g_max()); }

double LinkBudget::rho() const { return std::pow(10.0, rho_db / 10.0); }

double LinkBudget::gamma_th() const { return std::pow(10.0, gamma_th_db / 10.0); }

double rho_db_from_terms(const LinkBudgetTerms& terms, double g_max_dbi) {
  const double p_tx_dbw = terms.p_tx_dbm - 30.0;
  const double noise_temp_dbk = g_max_dbi - terms.g_over_t_db;
  return p_tx_dbw - terms.boltzmann_dbw - noise_temp_dbk - 10.0 * std::log10(terms.bandwidth_hz);
}

LinkBudget default_link_budget() {
  LinkBudget link;
  link.terms = LinkBudgetTerms{};
  link.rho_db = rho_db_from_terms(*link.terms, link.g_max_dbi());
  return link;
}

// ---- Scenario -------------------------------------------------------------

Scenario::Scenario(std::vector<Cell> cells, SatelliteGeometry geometry, LinkBudget link,
                   PatternDims dims, std::optional<Eigen::MatrixXd> gains)
    : cells_(std::move(cells)), geometry_(geometry), link_(std::move(link)), dims_(dims) {
  check(!cells_.empty(), "scenario has no cells");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    const std::string where = "cell " + std::to_string(i) + ": ";
    check(c.id == static_cast<int>(i), where + "ids must be 0..N_c-1 in order");
    check(std::isfinite(c.demand) && c.demand >= 1.0, where + "demand must be >= 1");
    check(c.activation > 0.0 && c.activation <= 1.0, where + "activation probability out of range");
    check(c.center.lat_deg >= -90.0 && c.center.lat_deg <= 90.0, where + "latitude out of range");
    check(c.center.lon_deg >= -180.0 && c.center.lon_deg < 180.0, where + "longitude out of range");
  }
  check(geometry_.altitude_km > 0.0, "satellite altitude must be positive");
  check(link_.f_c_hz > 0.0 && link_.aperture_m > 0.0, "carrier frequency and aperture must be positive");
  check(link_.efficiency > 0.0 && link_.efficiency <= 1.0, "aperture efficiency out of range");
  check(link_.n_r >= 1, "resource block count must be >= 1");
  check(std::isfinite(link_.rho_db) && std::isfinite(link_.gamma_th_db) && std::isfinite(link_.g_t_dbi),
        "link budget values must be finite");
  check(dims_.n_slot >= 1, "n_slot must be >= 1");
  check(dims_.n_b >= 1 && dims_.n_b <= n_cells(), "n_b must satisfy 1 <= n_b <= n_cells");

  if (gains) {
    gains_ = std::move(*gains);
    check(gains_.rows() == n_cells() && gains_.cols() == n_cells(), "gain matrix must be N_c x N_c");
    check(gains_.allFinite() && (gains_.array() > 0.0).all(), "gains must be finite and positive");
  } else {
    gains_ = gain_matrix(cells_, geometry_, link_);
  }
}

Eigen::VectorXd Scenario::demands() const {
  Eigen::VectorXd out(n_cells());
  for (int i = 0; i < n_cells(); ++i) {
    out(i) = cell(i).demand;
  }
  return out;
}

Eigen::VectorXd Scenario::activations() const {
  Eigen::VectorXd out(n_cells());
  for (int i = 0; i < n_cells(); ++i) {
    out(i) = cell(i).activation;
  }
  return out;
}

double Scenario::decoding_margin(int i) const {
  return gains_(i, i) / link_.gamma_th() - 1.0 / link_.rho();
}

Scenario Scenario::with_geometry(const SatelliteGeometry& geometry) const {
  return Scenario(cells_, geometry, link_, dims_);
}

bool Scenario::operator==(const Scenario& other) const {
  return cells_ == other.cells_ && geometry_ == other.geometry_ && link_ == other.link_ &&
         dims_ == other.dims_ && gains_.rows() == other.gains_.rows() &&
         gains_.cols() == other.gains_.cols() && gains_ == other.gains_;
}

// ---- geometry -------------------------------------------------------------

double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  return kEarthRadiusKm * angle_between(to_cartesian(a, 1.0), to_cartesian(b, 1.0));
}

double elevation_deg(const GeoPoint& ground, const SatelliteGeometry& sat) {
  const Vec3 p = to_cartesian(ground, kEarthRadiusKm);
  const Vec3 los = satellite_position(sat) - p;
  const double sin_el = p.normalized().dot(los.normalized());
  return std::asin(std::clamp(sin_el, -1.0, 1.0)) / kDeg;
}

HexTiling::HexTiling(GeoPoint anchor, double cell_radius_km, int rings)
    : anchor_(anchor), radius_km_(cell_radius_km), rings_(rings) {
  check(cell_radius_km > 0.0, "cell radius must be positive");
  check(rings >= 0 && rings <= kMaxTilingRings, "n_cells exceeds the generated tiling extent");
  const double sqrt3 = std::sqrt(3.0);
  for (int q = -rings; q <= rings; ++q) {
    for (int r = -rings; r <= rings; ++r) {
      if (hex_distance(q, r) > rings) {
        continue;
      }
      const double east = sqrt3 * radius_km_ * (q + 0.5 * r);
      const double north = 1.5 * radius_km_ * r;
      tiles_.push_back({q, r, destination(anchor_, east, north)});
    }
  }
}

std::vector<HexTile> HexTiling::nearest(const GeoPoint& point, int n) const {
  check(n >= 1, "n_cells must be >= 1");
  check(n <= static_cast<int>(tiles_.size()), "n_cells exceeds the generated tiling extent");
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(tiles_.size());
  for (std::size_t k = 0; k < tiles_.size(); ++k) {
    order.emplace_back(great_circle_km(point, tiles_[k].center), k);
  }
  std::partial_sort(order.begin(), order.begin() + n, order.end());
  // Every tile outside the generated rings is at least this far from `point`.
  const double outside =
      0.98 * 1.5 * radius_km_ * (rings_ + 1) - great_circle_km(point, anchor_);
  check(order[static_cast<std::size_t>(n - 1)].first <= outside,
        "n_cells exceeds the generated tiling extent");
  std::vector<HexTile> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.push_back(tiles_[order[static_cast<std::size_t>(k)].second]);
  }
  return out;
}

namespace {

int rings_for(int n_cells, double offset_km, double radius_km) {
  int k = 0;
  while (3 * k * (k + 1) + 1 < n_cells && k <= kMaxTilingRings) {
    ++k;
  }
  // the n nearest tiles lie within sqrt(3) k R + R of the query point, and
  // anything beyond ring K is at least 1.5 (K + 1) R from the anchor
  const double reach = std::sqrt(3.0) * k * radius_km + radius_km + 2.0 * offset_km;
  return static_cast<int>(std::ceil(reach / (0.98 * 1.5 * radius_km)));
}

} // namespace

std::vector<GeoPoint> build_cell_grid(GeoPoint center, double cell_radius_km, int n_cells) {
  check(n_cells >= 1, "n_cells must be >= 1");
  check(cell_radius_km > 0.0, "cell radius must be positive");
  const int rings = rings_for(n_cells, 0.0, cell_radius_km);
  check(rings <= kMaxTilingRings, "n_cells exceeds the generated tiling extent");
  HexTiling tiling(center, cell_radius_km, rings);
  std::vector<GeoPoint> out;
  for (const auto& t : tiling.nearest(center, n_cells)) {
    out.push_back(t.center);
  }
  return out;
}

// ---- demand ---------------------------------------------------------------

double demand_model(double u, double p, double eta, double n_avg) {
  return n_avg * (eta * u + (1.0 - eta) * p);
}

std::vector<double> population_weights(const std::vector<double>& populations, double beta) {
  std::vector<double> w(populations.size());
  std::transform(populations.begin(), populations.end(), w.begin(),
                 [beta](double p) { return std::pow(std::max(p, 0.0), beta); });
  const double mean = w.empty() ? 0.0 : std::accumulate(w.begin(), w.end(), 0.0) / w.size();
  if (mean <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0);
    return w;
  }
  for (double& x : w) {
    x /= mean;
  }
  return w;
}

// ---- antenna / channel ----------------------------------------------------

double receive_gain(double theta_rad, const LinkBudget& link) {
  const double u = kPi * link.aperture_m / link.wavelength_m() * std::sin(std::abs(theta_rad));
  if (u < 1e-8) {
    return link.g_max();
  }
  const double j = 2.0 * std::cyl_bessel_j(1.0, u) / u;
  return link.g_max() * j * j;
}

Eigen::MatrixXd gain_matrix(const std::vector<Cell>& cells, const SatelliteGeometry& geometry,
                            const LinkBudget& link) {
  const auto n = static_cast<Eigen::Index>(cells.size());
  const Vec3 sat = satellite_position(geometry);
  std::vector<Vec3> los(cells.size());
  Eigen::VectorXd path(n);
  const double lambda_km = link.wavelength_m() / 1000.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Cell& c = cells[static_cast<std::size_t>(j)];
    if (elevation_deg(c.center, geometry) <= 0.0) {
      throw ValidationError("cell " + std::to_string(c.id) + " is below the horizon");
    }
    los[static_cast<std::size_t>(j)] = to_cartesian(c.center, kEarthRadiusKm) - sat;
    const double d = los[static_cast<std::size_t>(j)].norm();
    const double fspl = 4.0 * kPi * d / lambda_km;
    path(j) = 1.0 / (fspl * fspl);
  }
  Eigen::MatrixXd g(n, n);
  const double g_t = link.g_t();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double theta =
          i == j ? 0.0 : angle_between(los[static_cast<std::size_t>(i)], los[static_cast<std::size_t>(j)]);
      g(i, j) = g_t * receive_gain(theta, link) * path(j);
    }
  }
  return g;
}

// ---- generation -----------------------------------------------------------

GeneratorConfig GeneratorConfig::reference() { return GeneratorConfig{}; }

GeneratorConfig GeneratorConfig::desk() {
  GeneratorConfig c;
  c.n_cells = 20;
  c.n_b = 3;
  c.n_slot = 16;
  return c;
}

namespace {

std::mt19937_64 tile_rng(std::uint64_t seed, int q, int r, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(r), stream};
  return std::mt19937_64(seq);
}

} // namespace

double synthetic_population(std::uint64_t seed, int q, int r, double log_mean, double log_sigma) {
  auto rng = tile_rng(seed, q, r, 1);
  std::lognormal_distribution<double> dist(log_mean, log_sigma);
  return dist(rng);
}

Scenario generate_scenario(const GeneratorConfig& config) {
  if (config.n_cells < 1 || config.n_b < 1 || config.n_slot < 1) {
    throw ValidationError("n_cells, n_b and n_slot must be positive");
  }
  if (config.eta < 0.0 || config.eta > 1.0) {
    throw ValidationError("eta must lie in [0, 1]");
  }
  if (config.beta < 0.0 || config.beta > 1.0) {
    throw ValidationError("beta must lie in [0, 1]");
  }
  if (config.n_avg <= 0.0) {
    throw ValidationError("n_avg must be positive");
  }
  const GeoPoint anchor = config.anchor.value_or(config.satellite.nadir);
  const double offset = great_circle_km(anchor, config.satellite.nadir);
  const int rings = rings_for(config.n_cells, offset, config.cell_radius_km);
  if (rings > kMaxTilingRings) {
    throw ValidationError("n_cells exceeds the generated tiling extent");
  }
  const HexTiling tiling(anchor, config.cell_radius_km, rings);
  const auto tiles = tiling.nearest(config.satellite.nadir, config.n_cells);

  std::vector<double> populations;
  if (config.populations) {
    if (static_cast<int>(config.populations->size()) != config.n_cells) {
      throw ValidationError("population list must have one entry per cell");
    }
    populations = *config.populations;
  } else {
    for (const auto& t : tiles) {
      populations.push_back(synthetic_population(config.seed, t.q, t.r, config.population_log_mean,
                                                 config.population_log_sigma));
    }
  }
  const auto weights = population_weights(populations, config.beta);

  std::vector<Cell> cells;
  for (int i = 0; i < config.n_cells; ++i) {
    const auto& t = tiles[static_cast<std::size_t>(i)];
    auto rng = tile_rng(config.seed, t.q, t.r, 2);
    std::uniform_real_distribution<double> ubiq(0.5, 1.5);
    const double u = ubiq(rng);
    const double n = demand_model(u, weights[static_cast<std::size_t>(i)], config.eta, config.n_avg);
    cells.push_back({i, t.center, std::max(1.0, n), config.alpha});
  }
  return Scenario(std::move(cells), config.satellite, config.link, {config.n_slot, config.n_b});
}

std::vector<double> load_populations_csv(const std::string& path, int n_cells) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open population file: " + path);
  }
  std::vector<double> out(static_cast<std::size_t>(n_cells), -1.0);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::stringstream ss(line);
    std::string id_s, pop_s;
    if (!std::getline(ss, id_s, ',') || !std::getline(ss, pop_s, ',')) {
      throw ParseError("population file line " + std::to_string(line_no) + ": expected cell_id,population");
    }
    int id = 0;
    double pop = 0.0;
    try {
      id = std::stoi(id_s);
      pop = std::stod(pop_s);
    } catch (const std::exception&) {
      if (line_no == 1) {
        continue; // header
      }
      throw ParseError("population file line " + std::to_string(line_no) + ": bad number");
    }
    if (id < 0 || id >= n_cells) {
      throw ParseError("population file line " + std::to_string(line_no) + ": cell_id out of range");
    }
    if (pop < 0.0) {
      throw ValidationError("population must be non-negative (cell " + std::to_string(id) + ")");
    }
    out[static_cast<std::size_t>(id)] = pop;
  }
  for (int i = 0; i < n_cells; ++i) {
    if (out[static_cast<std::size_t>(i)] < 0.0) {
      throw ParseError("population file has no entry for cell " + std::to_string(i));
    }
  }
  return out;
}

// ---- persistence ----------------------------------------------------------

namespace {

using nlohmann::json;

constexpr const char* kScenarioSchema = "beamhop-scenario/1";

const json& field(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError("missing field '" + context + key + "'");
  }
  return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& context) {
  const json& v = field(obj, key, context);
  if (!v.is_number()) {
    throw ParseError("field '" + context + key + "' must be a number");
  }
  return v.get<double>();
}

int integer(const json& obj, const std::string& key, const std::string& context) {
  const json& v = field(obj, key, context);
  if (!v.is_number_integer()) {
    throw ParseError("field '" + context + key + "' must be an integer");
  }
  return v.get<int>();
}

} // namespace

std::string scenario_to_json(const Scenario& s, bool include_gains) {
  json j;
  j["schema"] = kScenarioSchema;
  json cells = json::array();
  for (const auto& c : s.cells()) {
    cells.push_back({{"id", c.id},
                     {"lat", c.center.lat_deg},
                     {"lon", c.center.lon_deg},
                     {"demand", c.demand},
                     {"activation", c.activation}});
  }
  j["cells"] = cells;
  j["satellite"] = {{"lat", s.geometry().nadir.lat_deg},
                    {"lon", s.geometry().nadir.lon_deg},
                    {"altitude_km", s.geometry().altitude_km}};
  const LinkBudget& l = s.link();
  json link = {{"g_t_dbi", l.g_t_dbi},     {"f_c_hz", l.f_c_hz},           {"aperture_m", l.aperture_m},
               {"efficiency", l.efficiency}, {"gamma_th_db", l.gamma_th_db}, {"n_r", l.n_r}};
  if (l.terms) {
    link["budget"] = {{"p_tx_dbm", l.terms->p_tx_dbm},
                      {"g_over_t_db", l.terms->g_over_t_db},
                      {"bandwidth_hz", l.terms->bandwidth_hz},
                      {"boltzmann_dbw", l.terms->boltzmann_dbw}};
  } else {
    link["rho_db"] = l.rho_db;
  }
  j["link"] = link;
  j["pattern_dims"] = {{"n_slot", s.n_slot()}, {"n_b", s.n_b()}};
  if (include_gains) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.gains().rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < s.gains().cols(); ++k) {
        row.push_back(s.gains()(i, k));
      }
      rows.push_back(row);
    }
    j["gains"] = rows;
  }
  return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (j.contains("schema") && j["schema"] != kScenarioSchema) {
    throw ParseError("unsupported scenario schema");
  }
  const json& jcells = field(j, "cells", "");
  if (!jcells.is_array()) {
    throw ParseError("field 'cells' must be an array");
  }
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < jcells.size(); ++k) {
    const std::string ctx = "cells[" + std::to_string(k) + "].";
    const json& c = jcells[k];
    cells.push_back({integer(c, "id", ctx),
                     {number(c, "lat", ctx), number(c, "lon", ctx)},
                     number(c, "demand", ctx),
                     number(c, "activation", ctx)});
  }
  const json& js = field(j, "satellite", "");
  SatelliteGeometry geometry{{number(js, "lat", "satellite."), number(js, "lon", "satellite.")},
                             number(js, "altitude_km", "satellite.")};

  const json& jl = field(j, "link", "");
  LinkBudget link;
  link.g_t_dbi = number(jl, "g_t_dbi", "link.");
  link.f_c_hz = number(jl, "f_c_hz", "link.");
  link.aperture_m = number(jl, "aperture_m", "link.");
  link.efficiency = jl.contains("efficiency") ? number(jl, "efficiency", "link.") : 0.55;
  link.gamma_th_db = number(jl, "gamma_th_db", "link.");
  link.n_r = integer(jl, "n_r", "link.");
  if (jl.contains("rho_db")) {
    link.rho_db = number(jl, "rho_db", "link.");
  } else if (jl.contains("budget")) {
    const json& b = jl["budget"];
    LinkBudgetTerms t;
    t.p_tx_dbm = number(b, "p_tx_dbm", "link.budget.");
    t.g_over_t_db = number(b, "g_over_t_db", "link.budget.");
    t.bandwidth_hz = number(b, "bandwidth_hz", "link.budget.");
    t.boltzmann_dbw = b.contains("boltzmann_dbw") ? number(b, "boltzmann_dbw", "link.budget.") : -228.6;
    link.terms = t;
    link.rho_db = rho_db_from_terms(t, link.g_max_dbi());
  } else {
    throw ParseError("missing field 'link.rho_db' (or 'link.budget')");
  }

  const json& jd = field(j, "pattern_dims", "");
  PatternDims dims{integer(jd, "n_slot", "pattern_dims."), integer(jd, "n_b", "pattern_dims.")};

  std::optional<Eigen::MatrixXd> gains;
  if (j.contains("gains")) {
    const json& jg = j["gains"];
    const auto n = static_cast<Eigen::Index>(cells.size());
    if (!jg.is_array() || static_cast<Eigen::Index>(jg.size()) != n) {
      throw ParseError("field 'gains' must be an N_c x N_c array");
    }
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = jg[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ParseError("field 'gains[" + std::to_string(i) + "]' must have N_c entries");
      }
      for (Eigen::Index k = 0; k < n; ++k) {
        if (!row[static_cast<std::size_t>(k)].is_number()) {
          throw ParseError("field 'gains[" + std::to_string(i) + "][" + std::to_string(k) +
                           "]' must be a number");
        }
        g(i, k) = row[static_cast<std::size_t>(k)].get<double>();
      }
    }
    gains = std::move(g);
  }
  return Scenario(std::move(cells), geometry, link, dims, std::move(gains));
}

void save_scenario(const Scenario& scenario, const std::string& path, bool include_gains) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write scenario file: " + path);
  }
  out << scenario_to_json(scenario, include_gains) << '\n';
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open scenario file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

} // namespace beamhop
