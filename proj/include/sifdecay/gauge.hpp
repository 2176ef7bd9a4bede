#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sifdecay/profile.hpp"

namespace sifdecay {

struct GaugeOptions {
  int grid_nodes = 4096;   // geometric grid backing the suffix-infimum path
  double t_floor = 1e-16;  // smallest tabulated argument
};

// The pair of gauges derived from a decay profile:
//
//   g(t) = log(1/omega(1 - t/pi)) / (3*pi)            on (0, pi]
//   h(t) = min(sqrt(t), inf over s in [t, pi] of s*g(s))
//
// When s*g(s) is nondecreasing (detected by sampling) the infimum sits at
// s = t and h(t) = min(sqrt(t), t*g(t)) exactly.  Otherwise h falls back to a
// certified under-approximation assembled from per-cell lower bounds
// s_k*g(s_{k+1}) on a geometric grid; the under-approximation is still
// nondecreasing and still satisfies h <= sqrt(t) and h <= t*g(t) exactly.
//
// power_law(alpha) bypasses omega entirely: h(t) = t^alpha, g(t) = t^(alpha-1)
// (the classical middle-thirds gauge is alpha = log 2 / log 3).
class Gauge {
public:
  explicit Gauge(DecayProfile profile, GaugeOptions opt = {});
  static Gauge power_law(double alpha);

  double g(double t) const;
  double h(double t) const;
  double h_pi() const;

  // Leftmost preimage of y under h, as a tight bracket: the returned value is
  // the upper end (h(result) >= y always); h_inverse_floor returns the lower
  // end (h(result) <= y always).  Both throw DomainError unless 0 < y <= h(pi).
  double h_inverse(double y) const;
  double h_inverse_floor(double y) const;

  bool has_profile() const { return profile_.has_value(); }
  const DecayProfile& profile() const;
  double power_alpha() const { return alpha_; }

  // True when h uses the closed form min(sqrt(t), t*g(t)).
  bool closed_form() const { return monotone_sg_ || !profile_; }

  // Adjacent-node ratio of the backing grid; bounds how far the tabulated h
  // can sit below the true infimum.
  double mesh_ratio() const { return mesh_ratio_; }

  const GaugeOptions& options() const { return opt_; }

  nlohmann::json to_json() const;
  static Gauge from_json(const nlohmann::json& j);

private:
  Gauge() = default;
  void build_tables();
  std::pair<double, double> h_inverse_bracket(double y) const;

  std::optional<DecayProfile> profile_;
  double alpha_ = 0.0;
  GaugeOptions opt_;
  double mesh_ratio_ = 1.0;
  bool monotone_sg_ = false;
  std::vector<double> grid_;        // only kept for the tabulated path
  std::vector<double> g_grid_;      // g at grid nodes
  std::vector<double> suffix_low_;  // running lower bound of s*g(s) on [grid_[k], pi]
};

}  // namespace sifdecay
