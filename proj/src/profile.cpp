#include "sifdecay/profile.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"

namespace sifdecay {

namespace {

// log(e + 1/q) evaluated as log1p(e*q) - log(q): no overflow for tiny q and
// no cancellation anywhere in (0, 1].
double log_e_plus_inv(double gap) { return std::log1p(kE * gap) - std::log(gap); }

bool finite_in(double x, double lo, double hi) {
  return std::isfinite(x) && x > lo && x < hi;
}

}  // namespace

DecayProfile DecayProfile::reciprocal_log(double scale) {
  DecayProfile p;
  p.family_ = ProfileFamily::reciprocal_log;
  p.scale_ = scale;
  p.validate();
  return p;
}

DecayProfile DecayProfile::iterated_log(double scale) {
  DecayProfile p;
  p.family_ = ProfileFamily::iterated_log;
  p.scale_ = scale;
  p.validate();
  return p;
}

DecayProfile DecayProfile::power(double scale, double exponent) {
  DecayProfile p;
  p.family_ = ProfileFamily::power;
  p.scale_ = scale;
  p.exponent_ = exponent;
  p.validate();
  return p;
}

DecayProfile DecayProfile::table(std::vector<Breakpoint> breakpoints, DecayProfile tail) {
  DecayProfile p;
  p.family_ = ProfileFamily::table;
  p.breakpoints_ = std::move(breakpoints);
  p.tail_ = std::make_shared<DecayProfile>(std::move(tail));
  if (!p.breakpoints_.empty()) {
    p.gap_last_ = 1.0 - p.breakpoints_.back().r;
    p.tail_at_seam_ = p.tail_->family_ == ProfileFamily::table
                          ? 0.0  // rejected below
                          : p.tail_->at_gap(p.gap_last_);
  }
  p.validate();
  return p;
}

const DecayProfile& DecayProfile::tail() const {
  if (!tail_) throw DomainError("profile has no tail (not a table family)");
  return *tail_;
}

void DecayProfile::validate() const {
  if (!finite_in(scale_, 0.0, std::numeric_limits<double>::infinity()))
    throw InvalidProfileError("profile scale must be positive and finite");
  if (family_ == ProfileFamily::power &&
      !finite_in(exponent_, 0.0, std::numeric_limits<double>::infinity()))
    throw InvalidProfileError("power profile exponent must be positive and finite");
  if (family_ == ProfileFamily::table) {
    if (breakpoints_.empty()) throw InvalidProfileError("table profile needs breakpoints");
    if (breakpoints_.size() > 1000000)
      throw InvalidProfileError("table profile has too many breakpoints");
    double prev_r = -1.0;
    double prev_v = 2.0;
    for (const Breakpoint& b : breakpoints_) {
      if (!std::isfinite(b.r) || b.r < 0.0 || b.r >= 1.0)
        throw InvalidProfileError("table breakpoint radii must lie in [0, 1)");
      if (b.r <= prev_r)
        throw InvalidProfileError("table breakpoint radii must be strictly increasing");
      if (!finite_in(b.value, 0.0, 1.0))
        throw InvalidProfileError("table breakpoint values must lie in (0, 1)");
      if (b.value > prev_v)
        throw InvalidProfileError(
            "table breakpoint values must be nonincreasing (apply regularize_omega first)");
      prev_r = b.r;
      prev_v = b.value;
    }
    if (!tail_ || tail_->family_ == ProfileFamily::table)
      throw InvalidProfileError("table profile tail must be an analytic family");
  }
  double top = at_gap(1.0);
  if (!(top < 1.0)) throw InvalidProfileError("omega must be < 1");
  if (!(top > 0.0)) throw InvalidProfileError("omega must be positive");
}

double DecayProfile::at_gap(double gap) const {
  if (!(gap > 0.0) || !(gap <= 1.0))
    throw DomainError("omega gap argument must lie in (0, 1]");
  switch (family_) {
    case ProfileFamily::reciprocal_log:
      return scale_ / log_e_plus_inv(gap);
    case ProfileFamily::iterated_log:
      return scale_ / std::log(kE + log_e_plus_inv(gap));
    case ProfileFamily::power:
      return (scale_ / kE) * std::pow(gap, exponent_);
    case ProfileFamily::table:
      return table_at_gap(gap);
  }
  throw DomainError("corrupt profile family");
}

double DecayProfile::operator()(double r) const {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0, 1)");
  return at_gap(1.0 - r);
}

double DecayProfile::table_at_gap(double gap) const {
  if (gap <= gap_last_)
    return breakpoints_.back().value * (tail_->at_gap(gap) / tail_at_seam_);
  double r = 1.0 - gap;
  if (r <= breakpoints_.front().r) return breakpoints_.front().value;
  auto it = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), r,
      [](double x, const Breakpoint& b) { return x < b.r; });
  const Breakpoint& hi = *it;
  const Breakpoint& lo = *(it - 1);
  double w = (r - lo.r) / (hi.r - lo.r);
  return lo.value + w * (hi.value - lo.value);
}

double DecayProfile::decay_radius(double delta) const {
  if (!finite_in(delta, 0.0, 1.0))
    throw DomainError("decay_radius threshold must lie in (0, 1)");
  if (at_gap(1.0) < delta) return 0.0;
  auto gap_to_radius = [](double q) {
    if (!(q > 0.0) || 1.0 - q == 1.0)
      throw DomainError("delta is below the double-precision reach of this profile");
    return 1.0 - q;
  };
  switch (family_) {
    case ProfileFamily::reciprocal_log: {
      double x = scale_ / delta;  // need log(e + 1/q) > x
      if (x > 700.0) throw DomainError("delta is below the double-precision reach of this profile");
      return gap_to_radius(1.0 / (std::exp(x) - kE));
    }
    case ProfileFamily::iterated_log: {
      double x = scale_ / delta;
      if (x > 7.0) throw DomainError("delta is below the double-precision reach of this profile");
      double y = std::exp(x) - kE;
      if (y > 700.0) throw DomainError("delta is below the double-precision reach of this profile");
      return gap_to_radius(1.0 / (std::exp(y) - kE));
    }
    case ProfileFamily::power:
      return gap_to_radius(std::min(1.0, std::pow(delta * kE / scale_, 1.0 / exponent_)));
    case ProfileFamily::table:
      return table_decay_radius(delta);
  }
  throw DomainError("corrupt profile family");
}

double DecayProfile::table_decay_radius(double delta) const {
  const Breakpoint& last = breakpoints_.back();
  if (delta <= last.value) {
    double scaled = delta * tail_at_seam_ / last.value;
    return std::max(last.r, tail_->decay_radius(scaled));
  }
  // Threshold crossed strictly inside the breakpoint region.  Find the last
  // breakpoint still at or above delta; the caller-facing guarantee is only
  // omega(r) < delta beyond the returned radius, so landing at the right end
  // of a flat plateau is fine.
  std::size_t i = breakpoints_.size() - 1;
  while (i > 0 && breakpoints_[i - 1].value < delta) --i;
  if (i == 0) return 0.0;  // only reachable when delta == sup on a plateau
  const Breakpoint& a = breakpoints_[i - 1];
  const Breakpoint& b = breakpoints_[i];
  return a.r + (b.r - a.r) * ((a.value - delta) / (a.value - b.value));
}

nlohmann::json DecayProfile::to_json() const {
  nlohmann::json j;
  switch (family_) {
    case ProfileFamily::reciprocal_log:
      j["family"] = "reciprocal-log";
      j["scale"] = scale_;
      break;
    case ProfileFamily::iterated_log:
      j["family"] = "iterated-log";
      j["scale"] = scale_;
      break;
    case ProfileFamily::power:
      j["family"] = "power";
      j["scale"] = scale_;
      if (exponent_ != 1.0) j["exponent"] = exponent_;
      break;
    case ProfileFamily::table: {
      j["family"] = "table";
      nlohmann::json bps = nlohmann::json::array();
      for (const Breakpoint& b : breakpoints_) bps.push_back({b.r, b.value});
      j["breakpoints"] = std::move(bps);
      j["tail"] = tail_->to_json();
      break;
    }
  }
  return j;
}

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) throw SchemaError("unknown profile key: " + item.key());
  }
}

double need_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("profile requires key: ") + key);
  if (!j[key].is_number()) throw SchemaError(std::string("profile key must be a number: ") + key);
  return j[key].get<double>();
}

}  // namespace

DecayProfile DecayProfile::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("profile must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string())
    throw SchemaError("profile requires a \"family\" string");
  std::string fam = j["family"].get<std::string>();
  if (fam == "reciprocal-log") {
    check_keys(j, {"family", "scale"});
    return reciprocal_log(need_number(j, "scale"));
  }
  if (fam == "iterated-log") {
    check_keys(j, {"family", "scale"});
    return iterated_log(need_number(j, "scale"));
  }
  if (fam == "power") {
    check_keys(j, {"family", "scale", "exponent"});
    double p = j.contains("exponent") ? need_number(j, "exponent") : 1.0;
    return power(need_number(j, "scale"), p);
  }
  if (fam == "table") {
    check_keys(j, {"family", "breakpoints", "tail"});
    if (!j.contains("breakpoints") || !j["breakpoints"].is_array())
      throw SchemaError("table profile requires a \"breakpoints\" array");
    std::vector<Breakpoint> bps;
    for (const auto& e : j["breakpoints"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw SchemaError("table breakpoints must be [r, value] number pairs");
      bps.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    if (!j.contains("tail")) throw SchemaError("table profile requires a \"tail\" object");
    DecayProfile t = from_json(j["tail"]);
    if (t.family() == ProfileFamily::table)
      throw SchemaError("table tail must be an analytic family");
    return table(std::move(bps), std::move(t));
  }
  throw SchemaError("unknown profile family: " + fam);
}

DecayProfile regularize_omega(std::vector<Breakpoint> samples, DecayProfile tail) {
  if (samples.empty()) throw InvalidProfileError("regularize_omega needs samples");
  std::sort(samples.begin(), samples.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.r < b.r; });
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].r == samples[i - 1].r)
      throw InvalidProfileError("regularize_omega samples must have distinct radii");
  for (std::size_t i = samples.size() - 1; i-- > 0;)
    samples[i].value = std::max(samples[i].value, samples[i + 1].value);
  return DecayProfile::table(std::move(samples), std::move(tail));
}

}  // namespace sifdecay
