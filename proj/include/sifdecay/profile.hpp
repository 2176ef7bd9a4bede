#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

namespace sifdecay {

enum class ProfileFamily { reciprocal_log, iterated_log, power, table };

struct Breakpoint {
  double r;
  double value;
};

// A decay profile omega: [0,1) -> (0,1), nonincreasing, omega(r) -> 0 as
// r -> 1.  Families are evaluated through the gap q = 1 - r so values stay
// accurate when r is within a few ulp of 1:
//
//   reciprocal-log   omega = scale / log(e + 1/q)
//   iterated-log     omega = scale / log(e + log(e + 1/q))
//   power            omega = (scale/e) * q^exponent
//   table            monotone breakpoint interpolation + analytic tail blend
class DecayProfile {
public:
  static DecayProfile reciprocal_log(double scale);
  static DecayProfile iterated_log(double scale);
  static DecayProfile power(double scale, double exponent = 1.0);
  static DecayProfile table(std::vector<Breakpoint> breakpoints, DecayProfile tail);

  // omega(r); throws DomainError unless 0 <= r < 1.
  double operator()(double r) const;

  // omega(1 - gap) for gap in (0, 1].
  double at_gap(double gap) const;

  // Some r_delta < 1 with omega(r) < delta for every r > r_delta.  Throws
  // DomainError when no double below 1 witnesses the decay (iterated-log
  // profiles run out of exponent range very quickly).
  double decay_radius(double delta) const;

  ProfileFamily family() const { return family_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  const DecayProfile& tail() const;

  nlohmann::json to_json() const;
  static DecayProfile from_json(const nlohmann::json& j);

private:
  DecayProfile() = default;
  void validate() const;
  double table_at_gap(double gap) const;
  double table_decay_radius(double delta) const;

  ProfileFamily family_ = ProfileFamily::power;
  double scale_ = 1.0;
  double exponent_ = 1.0;  // power family only
  std::vector<Breakpoint> breakpoints_;
  double gap_last_ = 0.0;      // 1 - r of the last breakpoint
  double tail_at_seam_ = 0.0;  // tail value at gap_last
  std::shared_ptr<const DecayProfile> tail_;
};

// Least nonincreasing majorant of raw samples (suffix running maximum),
// packaged as a table profile over the given tail.
DecayProfile regularize_omega(std::vector<Breakpoint> samples, DecayProfile tail);

}  // namespace sifdecay
