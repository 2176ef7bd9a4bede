#include "sifdecay/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"

namespace sifdecay {

Gauge::Gauge(DecayProfile profile, GaugeOptions opt) : profile_(std::move(profile)), opt_(opt) {
  if (opt_.grid_nodes < 16 || opt_.grid_nodes > 1 << 22)
    throw DomainError("gauge grid_nodes out of range");
  if (!(opt_.t_floor > 0.0 && opt_.t_floor < 1e-3))
    throw DomainError("gauge t_floor out of range");
  build_tables();
}

Gauge Gauge::power_law(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0 && std::isfinite(alpha)))
    throw DomainError("power_law exponent must lie in (0, 2]");
  Gauge gauge;
  gauge.alpha_ = alpha;
  return gauge;
}

const DecayProfile& Gauge::profile() const {
  if (!profile_) throw DomainError("power-law gauge carries no decay profile");
  return *profile_;
}

void Gauge::build_tables() {
  const int n = opt_.grid_nodes;
  grid_.resize(n);
  const double ratio = std::exp(std::log(kPi / opt_.t_floor) / (n - 1));
  mesh_ratio_ = ratio;
  double v = opt_.t_floor;
  for (int k = 0; k < n; ++k) {
    grid_[k] = v;
    v *= ratio;
  }
  grid_.back() = kPi;

  std::vector<double> gv(n);
  for (int k = 0; k < n; ++k) gv[k] = g(grid_[k]);

  monotone_sg_ = true;
  for (int k = 0; k + 1 < n; ++k) {
    if (grid_[k + 1] * gv[k + 1] < grid_[k] * gv[k] * (1.0 - 1e-13)) {
      monotone_sg_ = false;
      break;
    }
  }
  if (monotone_sg_) {
    grid_.clear();
    return;
  }
  suffix_low_.assign(n, 0.0);
  suffix_low_[n - 1] = kPi * gv[n - 1];
  for (int k = n - 2; k >= 0; --k)
    suffix_low_[k] = std::min(grid_[k] * gv[k + 1], suffix_low_[k + 1]);
  g_grid_ = std::move(gv);
}

double Gauge::g(double t) const {
  if (!(t > 0.0)) throw DomainError("gauge argument must be positive");
  if (!profile_) return std::pow(t, alpha_ - 1.0);
  double gap = t / kPi;
  if (gap > 1.0) {
    if (gap > 1.0 + 1e-12) throw DomainError("gauge argument exceeds pi");
    gap = 1.0;
  }
  return -std::log(profile_->at_gap(gap)) / kThreePi;
}

double Gauge::h(double t) const {
  if (!(t > 0.0)) throw DomainError("gauge argument must be positive");
  if (!profile_) return std::pow(t, alpha_);
  if (t > kPi) {
    if (t > kPi * (1.0 + 1e-12)) throw DomainError("gauge argument exceeds pi");
    t = kPi;
  }
  if (monotone_sg_) return std::min(std::sqrt(t), t * g(t));
  if (t >= grid_.back()) return std::min(std::sqrt(t), suffix_low_.back());
  if (t < grid_.front())
    return std::min({std::sqrt(t), t * g_grid_.front(), suffix_low_.front()});
  std::size_t k = std::upper_bound(grid_.begin(), grid_.end(), t) - grid_.begin() - 1;
  return std::min({std::sqrt(t), t * g_grid_[k + 1], suffix_low_[k + 1]});
}

double Gauge::h_pi() const { return profile_ ? h(kPi) : std::pow(kPi, alpha_); }

std::pair<double, double> Gauge::h_inverse_bracket(double y) const {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("h_inverse requires y > 0");
  double hp = h_pi();
  if (y > hp) throw DomainError("h_inverse argument exceeds h(pi)");
  if (!profile_) {
    double t = std::pow(y, 1.0 / alpha_);
    double lo = t, hi = t;
    while (std::pow(lo, alpha_) > y) lo = std::nextafter(lo, 0.0);
    while (std::pow(hi, alpha_) < y) hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
    return {lo, hi};
  }
  double lo = 0.25 * y * y;  // h(lo) <= sqrt(lo) = y/2 < y
  double hi = kPi;
  if (lo >= hi) lo = hi * 0.5;
  for (int i = 0; i < 256 && hi - lo > 1e-15 * hi; ++i) {
    double mid = std::sqrt(lo) * std::sqrt(hi);
    if (!(mid > lo && mid < hi)) break;
    if (h(mid) >= y) hi = mid;
    else lo = mid;
  }
  return {lo, hi};
}

double Gauge::h_inverse(double y) const { return h_inverse_bracket(y).second; }

double Gauge::h_inverse_floor(double y) const { return h_inverse_bracket(y).first; }

nlohmann::json Gauge::to_json() const {
  nlohmann::json j;
  if (profile_) {
    j["kind"] = "omega";
    j["profile"] = profile_->to_json();
    j["grid_nodes"] = opt_.grid_nodes;
    j["t_floor"] = opt_.t_floor;
  } else {
    j["kind"] = "power-law";
    j["alpha"] = alpha_;
  }
  return j;
}

Gauge Gauge::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("gauge must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw SchemaError("gauge requires a \"kind\" string");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "power-law") {
    for (const auto& item : j.items())
      if (item.key() != "kind" && item.key() != "alpha")
        throw SchemaError("unknown gauge key: " + item.key());
    if (!j.contains("alpha") || !j["alpha"].is_number())
      throw SchemaError("power-law gauge requires a numeric \"alpha\"");
    return power_law(j["alpha"].get<double>());
  }
  if (kind != "omega") throw SchemaError("unknown gauge kind: " + kind);
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "kind" && k != "profile" && k != "grid_nodes" && k != "t_floor")
      throw SchemaError("unknown gauge key: " + k);
  }
  if (!j.contains("profile")) throw SchemaError("omega gauge requires a \"profile\" object");
  GaugeOptions opt;
  if (j.contains("grid_nodes")) {
    if (!j["grid_nodes"].is_number_integer()) throw SchemaError("grid_nodes must be an integer");
    opt.grid_nodes = j["grid_nodes"].get<int>();
  }
  if (j.contains("t_floor")) {
    if (!j["t_floor"].is_number()) throw SchemaError("t_floor must be a number");
    opt.t_floor = j["t_floor"].get<double>();
  }
  return Gauge(DecayProfile::from_json(j["profile"]), opt);
}

}  // namespace sifdecay
