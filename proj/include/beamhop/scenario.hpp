#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace beamhop {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Geodetic position in degrees.
struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

struct Cell {
  int id = 0;
  GeoPoint center;
  double demand = 1.0;      ///< expected device count N_i (may be fractional)
  double activation = 0.01; ///< per-device activation probability

  bool operator==(const Cell&) const = default;
};

struct SatelliteGeometry {
  GeoPoint nadir;
  double altitude_km = 600.0;

  bool operator==(const SatelliteGeometry&) const = default;
};

/// Raw link-budget terms used to derive the transmit SNR.
struct LinkBudgetTerms {
  double p_tx_dbm = 23.0;
  double g_over_t_db = 1.1;       ///< receive G/T in dB/K
  double bandwidth_hz = 1.0e6;    ///< per resource block
  double boltzmann_dbw = -228.6;  ///< dBW/K/Hz

  bool operator==(const LinkBudgetTerms&) const = default;
};

/// Link parameters. Fields are kept in the units they are stored on disk
/// (dB where applicable); the linear accessors are what formulas use.
struct LinkBudget {
  double g_t_dbi = 0.0;
  double f_c_hz = 2.0e9;
  double aperture_m = 2.0;
  double efficiency = 0.55;
  double rho_db = 0.0;          ///< transmit SNR P_tx/(N0 B), excluding path gains
  double gamma_th_db = 5.0;
  int n_r = 20;
  /// When set, rho_db was derived from these terms (see rho_db_from_terms).
  std::optional<LinkBudgetTerms> terms;

  double wavelength_m() const { return kSpeedOfLight / f_c_hz; }
  double g_t() const;
  double g_max() const;
  double g_max_dbi() const;
  double rho() const;
  double gamma_th() const;

  bool operator==(const LinkBudget&) const = default;
};

/// Transmit SNR in dB from raw terms. The system noise temperature is
/// recovered from G/T using the boresight gain, since g_ij already carries
/// the receive antenna gain.
double rho_db_from_terms(const LinkBudgetTerms& terms, double g_max_dbi);

/// Link budget populated with the reference simulation parameters.
LinkBudget default_link_budget();

struct PatternDims {
  int n_slot = 64;
  int n_b = 6;

  bool operator==(const PatternDims&) const = default;
};

/// Immutable served-area description with the derived average gain matrix.
class Scenario {
public:
  /// Validates every invariant; computes the gain matrix when `gains` is empty.
  Scenario(std::vector<Cell> cells, SatelliteGeometry geometry, LinkBudget link,
           PatternDims dims, std::optional<Eigen::MatrixXd> gains = std::nullopt);

  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_slot() const { return dims_.n_slot; }
  int n_b() const { return dims_.n_b; }
  int n_r() const { return link_.n_r; }
  int capacity() const { return dims_.n_slot * dims_.n_b; }

  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(int i) const { return cells_[static_cast<std::size_t>(i)]; }
  const SatelliteGeometry& geometry() const { return geometry_; }
  const LinkBudget& link() const { return link_; }
  const PatternDims& dims() const { return dims_; }

  /// g(i, j): gain of the beam pointed at cell i for a device in cell j.
  const Eigen::MatrixXd& gains() const { return gains_; }
  double gain(int i, int j) const { return gains_(i, j); }

  Eigen::VectorXd demands() const;
  Eigen::VectorXd activations() const;

  /// Denominator g_ii/gamma_th - 1/rho of the interference bound; <= 0 means
  /// the cell cannot decode even without interference.
  double decoding_margin(int i) const;

  /// Same scenario with a different satellite position (gains recomputed).
  Scenario with_geometry(const SatelliteGeometry& geometry) const;

  /// Field-wise equality (gains compared exactly).
  bool operator==(const Scenario& other) const;

private:
  std::vector<Cell> cells_;
  SatelliteGeometry geometry_;
  LinkBudget link_;
  PatternDims dims_;
  Eigen::MatrixXd gains_;
};

// ---- geometry -------------------------------------------------------------

double great_circle_km(const GeoPoint& a, const GeoPoint& b);

/// Elevation (degrees) of the satellite seen from a ground point.
double elevation_deg(const GeoPoint& ground, const SatelliteGeometry& sat);

/// One hexagon of the synthetic tiling, identified by axial coordinates.
struct HexTile {
  int q = 0;
  int r = 0;
  GeoPoint center;
};

/// Axial-coordinate hexagonal tiling laid out on the tangent plane at
/// `anchor` and mapped to the sphere with the azimuthal equidistant
/// projection (planar distance from the anchor equals great-circle distance).
class HexTiling {
public:
  HexTiling(GeoPoint anchor, double cell_radius_km, int rings);

  const GeoPoint& anchor() const { return anchor_; }
  double cell_radius_km() const { return radius_km_; }
  int rings() const { return rings_; }
  const std::vector<HexTile>& tiles() const { return tiles_; }

  /// The `n` tiles whose centers are closest to `point`, nearest first.
  /// Throws ValidationError when the tiling cannot guarantee the answer.
  std::vector<HexTile> nearest(const GeoPoint& point, int n) const;

private:
  GeoPoint anchor_;
  double radius_km_;
  int rings_;
  std::vector<HexTile> tiles_;
};

inline constexpr double kDefaultCellRadiusKm = 23.73;
inline constexpr int kMaxTilingRings = 200;

/// Centers of the `n_cells` hexagonal cells nearest to `center`, ordered by
/// great-circle distance. The first cell sits exactly at `center`.
std::vector<GeoPoint> build_cell_grid(GeoPoint center, double cell_radius_km, int n_cells);

// ---- demand ---------------------------------------------------------------

/// Hybrid traffic demand N = n_avg * (eta * u + (1 - eta) * p).
double demand_model(double u, double p, double eta, double n_avg);

/// Population-centric weights P_i^beta normalised to unit mean over the cells.
std::vector<double> population_weights(const std::vector<double>& populations, double beta);

// ---- antenna / channel ----------------------------------------------------

/// Circular-aperture (Airy) receive pattern G_max * |2 J1(u) / u|^2 with
/// u = (pi D / lambda) sin(theta).
double receive_gain(double theta_rad, const LinkBudget& link);

/// Average channel gains g(i, j) = G_t G_r(theta_ij) (lambda / (4 pi d_j))^2.
/// Throws ValidationError if any cell does not see the satellite above the horizon.
Eigen::MatrixXd gain_matrix(const std::vector<Cell>& cells, const SatelliteGeometry& geometry,
                            const LinkBudget& link);

// ---- generation -----------------------------------------------------------

struct GeneratorConfig {
  int n_cells = 80;
  int n_b = 6;
  int n_slot = 64;
  double alpha = 0.01;
  double n_avg = 1000.0;
  double beta = 0.5;
  double eta = 0.3;
  double cell_radius_km = kDefaultCellRadiusKm;
  SatelliteGeometry satellite{{37.5, 127.0}, 600.0};
  /// Tiling anchor; defaults to the satellite nadir.
  std::optional<GeoPoint> anchor;
  LinkBudget link = default_link_budget();
  /// Standard deviation of log-population for the synthetic generator.
  double population_log_sigma = 1.5;
  double population_log_mean = 9.0;
  /// Explicit populations keyed by cell index; overrides the generator.
  std::optional<std::vector<double>> populations;
  std::uint64_t seed = 1;

  static GeneratorConfig reference();
  static GeneratorConfig desk();
};

/// Builds a scenario: nearest tiles to the nadir, hybrid demand, gains.
Scenario generate_scenario(const GeneratorConfig& config);

/// Deterministic synthetic population of one tile (log-normal).
double synthetic_population(std::uint64_t seed, int q, int r, double log_mean, double log_sigma);

/// Reads `cell_id,population` rows (header optional).
std::vector<double> load_populations_csv(const std::string& path, int n_cells);

// ---- persistence ----------------------------------------------------------

std::string scenario_to_json(const Scenario& scenario, bool include_gains = true);
Scenario scenario_from_json(const std::string& text);
void save_scenario(const Scenario& scenario, const std::string& path, bool include_gains = true);
Scenario load_scenario(const std::string& path);

} // namespace beamhop
