#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sifdecay/gauge.hpp"

namespace sifdecay {

// Address of one interval of the generalized Cantor construction: `path` holds
// `generation` bits, most significant first, 0 = left child, 1 = right child.
struct NodeAddress {
  int generation = 0;
  std::uint64_t path = 0;
};

struct MassBracket {
  double value;  // midpoint of [lo, hi]
  double lo;
  double hi;
};

struct CalibrationReport {
  double mass_scale = 1.0;       // chosen c
  double point_max_ratio = 0.0;  // M: largest unscaled mu(B)/h over checked configurations
  double clause_mass = 0.0;      // h(pi)/m0
  double clause_ratio = 0.0;     // 1/(2M)
  int scales_checked = 0;
  double argmax_t = 0.0;
  double argmax_theta = 0.0;
};

struct FrostmanReport {
  bool pass = false;
  double max_ratio = 0.0;       // certified upper bound over ALL theta, t in [t_lo, pi]
  double grid_max_ratio = 0.0;  // plain scan over the theta grid (point evaluations)
  double argmax_t = 0.0;
  double argmax_theta = 0.0;
  int scale_points = 0;
  int theta_points = 0;
  double t_lo = 0.0;
};

// Generalized Cantor set with its Frostman measure.  Generation n consists of
// 2^n closed arcs of common length l_n; each child sits flush at one end of
// its parent; every generation-n arc carries mass c * m0 * 2^-n.  The arcs
// never wrap (l_0 <= pi), so node coordinates live on the line and only
// queries get reduced to the circle.
class CantorModel {
public:
  const Gauge& gauge() const { return gauge_; }
  int max_generation() const { return static_cast<int>(lengths_.size()) - 1; }
  double length(int generation) const;
  const std::vector<double>& lengths() const { return lengths_; }
  double m0() const { return m0_; }
  double base_center() const { return base_center_; }
  double base_start() const { return base_center_ - 0.5 * lengths_[0]; }
  double mass_scale() const { return mass_scale_; }
  double total_mass() const { return mass_scale_ * m0_; }
  double node_mass(int generation) const;
  std::pair<double, double> node_arc(const NodeAddress& address) const;

  // Both endpoints of every generation-n arc, sorted ascending (line coords).
  std::vector<double> generation_endpoints(int generation) const;

  // Measure of the circular arc [start, end] (end - start >= 0; a query of
  // length >= 2*pi returns the total mass).  The result is a certified
  // bracket; descent stops once a straddling node's mass drops below tol
  // (default 1e-15 * total mass).
  MassBracket arc_mass(double start, double end, double tol = -1.0) const;

  const CalibrationReport& calibration() const { return calibration_; }

  // Same construction with the mass scale replaced (the calibration report is
  // kept as recorded).  Backs the measure-scaling law checks and the tamper
  // tests; scales outside the calibrated value void the Frostman certificate.
  CantorModel with_mass_scale(double scale) const;

  nlohmann::json to_json() const;
  static CantorModel from_json(const nlohmann::json& j);

private:
  friend CantorModel build_model(const Gauge&, const struct BuildOptions&);
  friend CalibrationReport calibrate_scaling(const Gauge&, const std::vector<double>&, double,
                                             int);
  CantorModel(Gauge gauge, std::vector<double> lengths, double m0, double base_center,
              double mass_scale, CalibrationReport calibration);
  void mass_walk(int gen, double offset, double qlen, double tol, double& lo, double& hi) const;

  Gauge gauge_ = Gauge::power_law(1.0);
  std::vector<double> lengths_;
  double m0_ = 1.0;
  double base_center_ = 0.0;
  double mass_scale_ = 1.0;
  CalibrationReport calibration_;
};

struct BuildOptions {
  int depth_hint = 12;       // calibration scans down to l_{depth_hint}
  double m0 = 1.0;
  double base_center = 0.0;
  int max_depth = 64;        // materialization stops here...
  double min_length = 1e-18; // ...or once lengths drop below this
};

// Materialize lengths (l_0 = min(h^-1(m0), pi), l_n = min(h^-1(2^-n m0),
// l_{n-1}/2)), then calibrate the mass scale and assemble the model.
CantorModel build_model(const Gauge& gauge, const BuildOptions& options = {});

// c = min(1, h(pi)/m0, 1/(2M)) where M is the largest unscaled mu(B(theta,t))/h(t)
// found over the checked configurations (structural scales, a geometric scale
// grid down to l_{depth_hint}, endpoint enumerations, and the branch-and-bound
// maximizer's best candidates).
CalibrationReport calibrate_scaling(const Gauge& gauge, const std::vector<double>& lengths,
                                    double m0, int depth_hint);

// Certified check of mu(B(theta, t)) <= h(t).  max_ratio bounds the supremum
// over all theta and all t in [l_depth, pi]; grid_max_ratio is the plain scan
// over `theta_points` equispaced angles plus generation endpoints.
FrostmanReport verify_frostman(const CantorModel& model, int theta_points = 4096,
                               int scale_points = 512);

// 2^n * h(l_n): an upper bound for the h-Hausdorff measure of the limit set
// via the generation-n cover.
double hausdorff_upper_bound(const CantorModel& model, int generation);

// Mass-distribution floor: any cover satisfies sum h(|I_j|) >= c * m0.
double hausdorff_lower_bound(const CantorModel& model);

// Certified global maximum of mu([x, x+len]) over all window positions x.
// `upper` is a certified upper bound, `best` the largest point evaluation
// found, `arg_start` its window start.  `slack` is the absolute gap at which
// branch-and-bound stops tightening.
struct ArcMassMax {
  double upper = 0.0;
  double best = 0.0;
  double arg_start = 0.0;
};
ArcMassMax max_arc_mass(const CantorModel& model, double len, double slack);

}  // namespace sifdecay
