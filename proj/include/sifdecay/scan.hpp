#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "sifdecay/cantor.hpp"
#include "sifdecay/gauge.hpp"
#include "sifdecay/poisson.hpp"

namespace sifdecay {

// Result of maximizing u over one circle |z| = r.  The modulus bracket is
// [exp(-u_max - tol), exp(-u_max + tol)]: its upper end is a certified upper
// bound on the true circle minimum, the lower end is heuristic (a grid can in
// principle miss a spike of u, which is why the certification chain also
// carries the grid-free split bound).
struct CircleMin {
  double r = 0.0;
  double min_modulus_lo = 0.0;
  double min_modulus_hi = 0.0;
  double argmin_theta = 0.0;
  double u_max = 0.0;
  double u_max_error = 0.0;
  long points = 0;
};

// Grid of at least max(1024, ceil(64/(1-r))) equispaced angles in (-pi, pi]
// (rounded up to a power of two), seeded with the construction endpoints of
// every generation whose arcs are still longer than 1-r.  The grid is ranked
// in one sweep by convolving binned leaf masses with the sampled kernel; the
// leading cells are then re-evaluated at full tolerance and the winner is
// refined by golden section down to angular resolution 1e-3*(1-r).  Ties
// resolve toward the smallest angle.
CircleMin min_on_circle(const CantorModel& model, double r, double tol = 1e-9);
CircleMin min_on_circle(const PointMassModel& model, double r, double tol = 1e-9);

// The disk minimum equals the circle minimum (S has no zeros, so |S| obeys
// the minimum principle); kept as its own entry point so callers state what
// they mean.
CircleMin min_on_disk(const CantorModel& model, double r, double tol = 1e-9);
CircleMin min_on_disk(const PointMassModel& model, double r, double tol = 1e-9);

struct ScanReport {
  double r = 0.0;
  double min_modulus_lo = 0.0;
  double min_modulus_hi = 0.0;
  double argmin_theta = 0.0;
  double omega_r = 0.0;
  double proof_bound = 0.0;
  bool pass_estimate = false;
  bool pass_proof_chain = false;
  std::string status = "ok";  // "indeterminate" when precision was unreachable
  double u_max = 0.0;
  double u_max_error = 0.0;
};

// Scans each radius (sorted ascending), compares against the decay profile
// carried by the gauge, and records both checks: the modulus estimate
// min|S| >= omega(r) and the chain bound max u <= log(1/omega(r)) + tol.
// proof_bound is omega evaluated at the substitution gap fl(pi(1-r))/pi,
// which keeps it within a few ulp of omega_r.
std::vector<ScanReport> certify_estimate(const CantorModel& model, const Gauge& gauge,
                                         std::vector<double> radii, double tol = 1e-9);

std::string scan_to_csv(const std::vector<ScanReport>& reports);
nlohmann::json scan_to_json(const std::vector<ScanReport>& reports);

// "0.5,0.9,0.99" or "geo:0.9:1e-6:10" (n radii with 1-r geometric between
// 1-r0 and the end gap).  Empty input gives an empty list.
std::vector<double> parse_radii_spec(const std::string& spec);

// Point-mass diagnostic: (min_{|z|=r}|S|)^(1-r) = exp(-a(1+r)) for an atom of
// mass a, evaluated over a radii grid together with the grid infimum.  Stays
// above exp(-2a) on [0,1), which is the constraint on how fast any profile
// certified by a finite measure can decay.
struct FastBoundReport {
  std::vector<double> radii;
  std::vector<double> values;
  double infimum = 0.0;
};
FastBoundReport fast_bound_check(double a, const std::vector<double>& radii);

// Moduli |S(r e^{i theta_star})| along a radius ending on the support.
// theta_star must lie inside a generation-10 interval of the construction.
std::vector<double> radial_probe(const CantorModel& model, double theta_star,
                                 const std::vector<double>& radii, double tol = 1e-9);

}  // namespace sifdecay
