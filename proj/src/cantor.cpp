#include "sifdecay/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"

namespace sifdecay {

CantorModel::CantorModel(Gauge gauge, std::vector<double> lengths, double m0, double base_center,
                         double mass_scale, CalibrationReport calibration)
    : gauge_(std::move(gauge)),
      lengths_(std::move(lengths)),
      m0_(m0),
      base_center_(base_center),
      mass_scale_(mass_scale),
      calibration_(calibration) {}

double CantorModel::length(int generation) const {
  if (generation < 0 || generation > max_generation())
    throw DomainError("generation outside the materialized range");
  return lengths_[static_cast<std::size_t>(generation)];
}

double CantorModel::node_mass(int generation) const {
  if (generation < 0 || generation > max_generation())
    throw DomainError("generation outside the materialized range");
  return mass_scale_ * std::ldexp(m0_, -generation);
}

std::pair<double, double> CantorModel::node_arc(const NodeAddress& address) const {
  int n = address.generation;
  if (n < 0 || n > max_generation())
    throw DomainError("generation outside the materialized range");
  if (n < 64 && (address.path >> n) != 0)
    throw DomainError("node path has more bits than the generation");
  double start = base_start();
  for (int k = 1; k <= n; ++k)
    if ((address.path >> (n - k)) & 1u) start += lengths_[k - 1] - lengths_[k];
  return {start, start + lengths_[n]};
}

std::vector<double> CantorModel::generation_endpoints(int generation) const {
  if (generation < 0 || generation > max_generation())
    throw DomainError("generation outside the materialized range");
  if (generation > 22) throw DomainError("generation endpoint enumeration capped at 22");
  std::vector<double> starts{base_start()};
  for (int k = 1; k <= generation; ++k) {
    double shift = lengths_[k - 1] - lengths_[k];
    std::size_t sz = starts.size();
    starts.reserve(2 * sz);
    for (std::size_t i = 0; i < sz; ++i) starts.push_back(starts[i] + shift);
  }
  std::vector<double> out;
  out.reserve(2 * starts.size());
  double len = lengths_[generation];
  for (double s : starts) {
    out.push_back(s);
    out.push_back(s + len);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void CantorModel::mass_walk(int gen, double offset, double qlen, double tol, double& lo,
                            double& hi) const {
  double nlen = lengths_[gen];
  if (offset >= qlen && offset + nlen <= kTwoPi) return;  // disjoint
  double mass = node_mass(gen);
  if (offset + nlen <= qlen) {  // contained
    lo += mass;
    hi += mass;
    return;
  }
  if (gen == max_generation() || mass < tol) {  // unresolved straddler
    hi += mass;
    return;
  }
  mass_walk(gen + 1, offset, qlen, tol, lo, hi);
  double shifted = offset + (lengths_[gen] - lengths_[gen + 1]);
  if (shifted >= kTwoPi) shifted -= kTwoPi;
  mass_walk(gen + 1, shifted, qlen, tol, lo, hi);
}

MassBracket CantorModel::arc_mass(double start, double end, double tol) const {
  if (!(end >= start)) throw DomainError("arc_mass needs end >= start");
  double total = total_mass();
  if (tol < 0.0) tol = 1e-15 * total;
  double qlen = end - start;
  if (qlen >= kTwoPi) return {total, total, total};
  double lo = 0.0, hi = 0.0;
  mass_walk(0, reduce_nonneg(base_start() - start), qlen, tol, lo, hi);
  return {0.5 * (lo + hi), lo, hi};
}

// ---------------------------------------------------------------------------

namespace {

// Upper bound for the mass of the first x units of a generation-j island.
// Exact except below the materialized depth, where a whole leaf mass is
// charged.  The walk mirrors the construction: left child flush at the left
// end, right child flush at the right end, dead space in between.
class PrefixMass {
public:
  PrefixMass(const std::vector<double>& lengths, double unit_mass)
      : lengths_(lengths), unit_mass_(unit_mass) {}

  double upper(int j, double x) const {
    double acc = 0.0;
    int max_gen = static_cast<int>(lengths_.size()) - 1;
    while (true) {
      if (!(x > 0.0)) return acc;
      if (x >= lengths_[j]) return acc + mass(j);
      if (j == max_gen) return acc + mass(j);
      if (x <= lengths_[j + 1]) {
        ++j;
        continue;
      }
      acc += mass(j + 1);
      double right_start = lengths_[j] - lengths_[j + 1];
      if (x <= right_start) return acc;
      x -= right_start;
      ++j;
    }
  }

  double mass(int j) const { return unit_mass_ * std::ldexp(1.0, -j); }

private:
  const std::vector<double>& lengths_;
  double unit_mass_;
};

// Certified maximum of suffix(a) + prefix(L' - a) over the split a, i.e. the
// best way a window can straddle the two children of one node.  By mirror
// symmetry of the construction the suffix mass function equals the prefix
// mass function, and both are nondecreasing, so a cell [a1, a2] of splits is
// bounded by P(a2) + P(L' - a1).
double straddle_upper(const PrefixMass& pm, int child_gen, double lp, double prune_ref,
                      double slack, double* best_split) {
  struct Cell {
    double a1, a2, ub;
    bool operator<(const Cell& o) const { return ub < o.ub; }
  };
  auto cell_ub = [&](double a1, double a2) {
    return pm.upper(child_gen, a2) + pm.upper(child_gen, lp - a1);
  };
  std::priority_queue<Cell> queue;
  queue.push({0.0, lp, cell_ub(0.0, lp)});
  double best = prune_ref;
  const double res = lp * 1e-4;
  double terminated = 0.0;
  double frontier = 0.0;
  int pops = 0;
  while (!queue.empty() && pops++ < 4000) {
    Cell c = queue.top();
    if (c.ub <= best + slack) {
      frontier = c.ub;
      break;
    }
    queue.pop();
    double mid = 0.5 * (c.a1 + c.a2);
    double fmid = pm.upper(child_gen, mid) + pm.upper(child_gen, lp - mid);
    if (fmid > best) {
      best = fmid;
      if (best_split) *best_split = mid;
    }
    if (c.a2 - c.a1 <= res) {
      terminated = std::max(terminated, c.ub);
      continue;
    }
    queue.push({c.a1, mid, cell_ub(c.a1, mid)});
    queue.push({mid, c.a2, cell_ub(mid, c.a2)});
  }
  if (!queue.empty()) frontier = std::max(frontier, queue.top().ub);
  return std::max(terminated, frontier);
}

}  // namespace

ArcMassMax max_arc_mass(const CantorModel& model, double len, double slack) {
  if (!(len > 0.0)) throw DomainError("max_arc_mass needs a positive window length");
  if (!(slack >= 0.0)) throw DomainError("max_arc_mass needs a nonnegative slack");
  double total = model.total_mass();
  if (len >= model.length(0) || len >= kTwoPi)
    return {total, total, model.base_start()};

  const std::vector<double>& lengths = model.lengths();
  const int max_gen = model.max_generation();
  PrefixMass pm(lengths, total);

  // Deepest-first recursion over W(j) = max window mass within one
  // generation-j subtree.  Windows covering a whole island are exact; windows
  // inside one child are W(j+1); windows touching both children are bounded
  // by the straddle search.  Windows spilling into the dead space around a
  // child never beat W(j+1).
  int cover_gen = max_gen;  // shallowest generation fully covered by the window
  while (cover_gen > 0 && lengths[cover_gen - 1] <= len) --cover_gen;
  double w = pm.mass(cover_gen);  // crude leaf cap when even l_D > len

  std::vector<std::pair<int, double>> straddle_args;  // (child_gen, best split)
  for (int j = cover_gen - 1; j >= 0; --j) {
    double gap = std::max(0.0, lengths[j] - 2.0 * lengths[j + 1]);
    double lp = len - gap;
    if (lp > 0.0) {
      double split = -1.0;
      double s = straddle_upper(pm, j + 1, lp, w, slack, &split);
      if (s > w) {
        w = s;
        if (split >= 0.0) straddle_args.push_back({j + 1, split});
      }
    }
  }

  // Anchor the certificate with point evaluations at the natural candidates,
  // instantiated on the leftmost nodes (all subtrees are congruent).
  double bs = model.base_start();
  double best = 0.0, arg = bs;
  auto consider = [&](double x) {
    double v = model.arc_mass(x, x + len).lo;
    if (v > best) {
      best = v;
      arg = x;
    }
  };
  consider(bs);
  for (int k = cover_gen; k <= std::min(cover_gen + 3, max_gen); ++k)
    if (lengths[k] <= len) consider(bs - 0.5 * (len - lengths[k]));
  for (const auto& [child_gen, split] : straddle_args)
    consider(bs + lengths[child_gen] - split);

  return {std::max(w, best), best, arg};
}

// ---------------------------------------------------------------------------

namespace {

// Scales probed by calibration and verification: a geometric grid plus the
// structural half-widths of every materialized generation (interval lengths,
// their halves, half gaps).
std::vector<double> scale_grid(const std::vector<double>& lengths, double t_lo, int grid_points,
                               int deepest_structural) {
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(grid_points) + 4 * lengths.size() + 4);
  double ratio = std::exp(std::log(kPi / t_lo) / (grid_points - 1));
  double v = t_lo;
  for (int i = 0; i < grid_points; ++i) {
    ts.push_back(v);
    v *= ratio;
  }
  ts.back() = kPi;
  auto add = [&](double t) {
    if (t >= t_lo && t <= kPi) ts.push_back(t);
  };
  int d = std::min<int>(deepest_structural, static_cast<int>(lengths.size()) - 1);
  for (int k = 0; k <= d; ++k) {
    add(lengths[k]);
    add(0.5 * lengths[k]);
    if (k > 0) add(0.5 * (lengths[k - 1] - lengths[k]));
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

CalibrationReport calibrate_scaling(const Gauge& gauge, const std::vector<double>& lengths,
                                    double m0, int depth_hint) {
  int max_gen = static_cast<int>(lengths.size()) - 1;
  int dh = std::min(depth_hint, max_gen);
  CantorModel probe(gauge, lengths, m0, 0.0, 1.0, CalibrationReport{});

  std::vector<double> ts = scale_grid(lengths, lengths[dh], 256, dh);

  CalibrationReport report;
  report.scales_checked = static_cast<int>(ts.size());
  double M = 0.0;
  std::vector<double> ratio_at(ts.size(), 0.0);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i];
    double ht = gauge.h(t);
    ArcMassMax mm = max_arc_mass(probe, 2.0 * t, 1e-3 * ht);
    double ratio = mm.best / ht;
    ratio_at[i] = ratio;
    if (ratio > M) {
      M = ratio;
      report.argmax_t = t;
      report.argmax_theta = reduce_nonneg(mm.arg_start + t);
    }
  }

  // Endpoint-anchored critical configurations, checked directly.
  int enum_depth = std::min(dh, 10);
  for (int k = 1; k <= enum_depth; ++k) {
    std::vector<double> candidates{lengths[k], 0.5 * (lengths[k - 1] - lengths[k]),
                                   0.5 * lengths[k - 1]};
    for (double ep : probe.generation_endpoints(k)) {
      for (double t : candidates) {
        if (!(t > 0.0) || t > kPi) continue;
        double ratio = probe.arc_mass(ep - t, ep + t).hi / gauge.h(t);
        if (ratio > M) {
          M = ratio;
          report.argmax_t = t;
          report.argmax_theta = reduce_nonneg(ep);
        }
      }
    }
  }

  if (!(M > 0.0) || !std::isfinite(M))
    throw CalibrationError("mass-to-gauge ratio scan degenerated");

  // The ratio must stop growing as scales shrink, otherwise no finite scale
  // certifies the Frostman property.  Flag models whose maximum sits in the
  // deepest octave of the scan and strictly dominates the shallower ones.
  int octaves = static_cast<int>(std::floor(std::log2(kPi / lengths[dh])));
  if (octaves >= 4) {
    double deepest = 0.0, shallower = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      int oct = static_cast<int>(std::floor(std::log2(ts[i] / lengths[dh])));
      if (oct <= 0) deepest = std::max(deepest, ratio_at[i]);
      else if (oct >= 2) shallower = std::max(shallower, ratio_at[i]);
    }
    if (deepest > 1.02 * shallower && deepest == M) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "mass-to-gauge ratio still increasing at the smallest calibrated scale "
                    "t=%.6g (ratio %.6g); deepen the calibration scan",
                    lengths[dh], deepest);
      throw CalibrationError(buf);
    }
  }

  report.point_max_ratio = M;
  report.clause_mass = gauge.h_pi() / m0;
  report.clause_ratio = 1.0 / (2.0 * M);
  report.mass_scale = std::min({1.0, report.clause_mass, report.clause_ratio});
  return report;
}

CantorModel build_model(const Gauge& gauge, const BuildOptions& options) {
  if (!(options.m0 > 0.0) || !std::isfinite(options.m0))
    throw DomainError("m0 must be positive and finite");
  if (!std::isfinite(options.base_center)) throw DomainError("base_center must be finite");
  if (options.depth_hint < 1 || options.depth_hint > 64)
    throw DomainError("depth_hint must lie in [1, 64]");
  if (options.max_depth < 1 || options.max_depth > 64)
    throw DomainError("max_depth must lie in [1, 64]");
  if (!(options.min_length > 0.0)) throw DomainError("min_length must be positive");

  double hp = gauge.h_pi();
  std::vector<double> lengths;
  lengths.push_back(options.m0 >= hp ? kPi : gauge.h_inverse_floor(options.m0));
  if (lengths[0] < 1e-15) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "base interval length %.3g underflows; the gauge is too steep for m0=%.3g",
                  lengths[0], options.m0);
    throw ConstructionError(buf);
  }
  for (int n = 1; n <= options.max_depth; ++n) {
    double target = std::ldexp(options.m0, -n);
    double half = 0.5 * lengths.back();
    double next = target >= hp ? half : std::min(gauge.h_inverse_floor(target), half);
    if (next < options.min_length) break;
    lengths.push_back(next);
  }
  if (lengths.size() < 2)
    throw ConstructionError("cannot materialize any generation above the length floor");

  CalibrationReport calibration =
      calibrate_scaling(gauge, lengths, options.m0, options.depth_hint);
  return CantorModel(gauge, std::move(lengths), options.m0, options.base_center,
                     calibration.mass_scale, calibration);
}

FrostmanReport verify_frostman(const CantorModel& model, int theta_points, int scale_points) {
  if (theta_points < 16) throw DomainError("verify_frostman needs at least 16 theta points");
  if (scale_points < 16) throw DomainError("verify_frostman needs at least 16 scale points");
  const Gauge& gauge = model.gauge();
  const std::vector<double>& lengths = model.lengths();
  double t_lo = lengths.back();

  FrostmanReport report;
  report.t_lo = t_lo;
  std::vector<double> ts = scale_grid(lengths, t_lo, scale_points, model.max_generation());
  report.scale_points = static_cast<int>(ts.size());

  // Certified part: for t in [ts[i], ts[i+1]], mu(B(theta,t)) <= sup over
  // window positions of mu-windows of length 2*ts[i+1], and h(t) >= h(ts[i]).
  double max_ratio = model.total_mass() / gauge.h_pi();
  double arg_t = kPi, arg_theta = model.base_center();
  std::vector<double> h_at(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) h_at[i] = gauge.h(ts[i]);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    ArcMassMax mm = max_arc_mass(model, 2.0 * ts[i + 1], 1e-3 * h_at[i]);
    double ratio = mm.upper / h_at[i];
    if (ratio > max_ratio) {
      max_ratio = ratio;
      arg_t = ts[i];
      arg_theta = reduce_nonneg(mm.arg_start + ts[i + 1]);
    }
  }
  report.max_ratio = max_ratio;
  report.argmax_t = arg_t;
  report.argmax_theta = arg_theta;

  // Plain grid scan: equispaced angles plus generation endpoints, point
  // evaluations of mu(B(theta, t))/h(t) on the geometric scale grid.
  std::vector<double> thetas;
  thetas.reserve(static_cast<std::size_t>(theta_points) + (2u << 12));
  for (int i = 0; i < theta_points; ++i) thetas.push_back(i * (kTwoPi / theta_points));
  int ep_gen = std::min(12, model.max_generation());
  for (double ep : model.generation_endpoints(ep_gen)) thetas.push_back(ep);
  int deep_gen = std::min(25, model.max_generation());
  if (deep_gen > ep_gen) {
    std::uint64_t count = std::uint64_t{1} << deep_gen;
    std::uint64_t stride = std::max<std::uint64_t>(1, count >> 12);
    for (std::uint64_t p = 0; p < count; p += stride) {
      double off = 0.0;
      for (int k = 1; k <= deep_gen; ++k)
        if ((p >> (deep_gen - k)) & 1u)
          off += lengths[static_cast<std::size_t>(k) - 1] - lengths[static_cast<std::size_t>(k)];
      thetas.push_back(reduce_nonneg(model.base_start() + off));
      thetas.push_back(
          reduce_nonneg(model.base_start() + off + lengths[static_cast<std::size_t>(deep_gen)]));
    }
  }
  report.theta_points = static_cast<int>(thetas.size());

  // The bracket tolerance must shrink with h(t), not with the total mass:
  // at the deepest scales h is far below any fixed mass fraction and a fixed
  // tolerance would swamp the ratio.
  double grid_max = 0.0;
  for (double theta : thetas) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double tol_i = 1e-6 * h_at[i];
      double ratio = model.arc_mass(theta - ts[i], theta + ts[i], tol_i).hi / h_at[i];
      if (ratio > grid_max) grid_max = ratio;
    }
  }
  report.grid_max_ratio = grid_max;
  report.pass = report.max_ratio <= 1.0;
  return report;
}

double hausdorff_upper_bound(const CantorModel& model, int generation) {
  return std::ldexp(model.gauge().h(model.length(generation)), generation);
}

double hausdorff_lower_bound(const CantorModel& model) { return model.total_mass(); }

// ---------------------------------------------------------------------------

CantorModel CantorModel::with_mass_scale(double scale) const {
  if (!(scale > 0.0)) throw DomainError("mass scale must be positive");
  CantorModel out = *this;
  out.mass_scale_ = scale;
  return out;
}

nlohmann::json CantorModel::to_json() const {
  nlohmann::json j;
  j["format"] = "cantor-frostman-model";
  j["version"] = 1;
  j["gauge"] = gauge_.to_json();
  j["m0"] = m0_;
  j["base_center"] = base_center_;
  j["mass_scale"] = mass_scale_;
  j["depth"] = max_generation();
  j["lengths"] = lengths_;
  j["calibration"] = {{"mass_scale", calibration_.mass_scale},
                      {"point_max_ratio", calibration_.point_max_ratio},
                      {"clause_mass", calibration_.clause_mass},
                      {"clause_ratio", calibration_.clause_ratio},
                      {"scales_checked", calibration_.scales_checked},
                      {"argmax_t", calibration_.argmax_t},
                      {"argmax_theta", calibration_.argmax_theta}};
  return j;
}

CantorModel CantorModel::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("model must be a JSON object");
  for (const char* key : {"format", "version", "gauge", "m0", "base_center", "mass_scale",
                          "depth", "lengths", "calibration"})
    if (!j.contains(key)) throw SchemaError(std::string("model requires key: ") + key);
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "format" && k != "version" && k != "gauge" && k != "m0" && k != "base_center" &&
        k != "mass_scale" && k != "depth" && k != "lengths" && k != "calibration" &&
        k != "frostman")  // optional embedded report; informational only
      throw SchemaError("unknown model key: " + k);
  }
  if (!j["format"].is_string() || j["format"].get<std::string>() != "cantor-frostman-model")
    throw SchemaError("not a cantor-frostman-model document");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != 1)
    throw SchemaError("unsupported model version");
  if (!j["lengths"].is_array() || j["lengths"].empty())
    throw SchemaError("model lengths must be a nonempty array");
  if (!j["depth"].is_number_integer())
    throw SchemaError("model depth must be an integer");

  std::vector<double> lengths;
  for (const auto& e : j["lengths"]) {
    if (!e.is_number()) throw SchemaError("model lengths must be numbers");
    lengths.push_back(e.get<double>());
  }
  if (j["depth"].get<int>() != static_cast<int>(lengths.size()) - 1)
    throw SchemaError("model lengths array does not match the declared depth");
  if (!(lengths[0] > 0.0) || lengths[0] > kPi * (1.0 + 1e-12))
    throw SchemaError("model base length must lie in (0, pi]");
  for (std::size_t n = 1; n < lengths.size(); ++n)
    if (!(lengths[n] > 0.0) || lengths[n] > 0.5 * lengths[n - 1] * (1.0 + 1e-12))
      throw SchemaError("model lengths must at least halve between generations");

  double m0 = j["m0"].is_number() ? j["m0"].get<double>() : -1.0;
  if (!(m0 > 0.0)) throw SchemaError("model m0 must be a positive number");
  double mass_scale = j["mass_scale"].is_number() ? j["mass_scale"].get<double>() : -1.0;
  if (!(mass_scale > 0.0) || !std::isfinite(mass_scale))
    throw SchemaError("model mass_scale must be a positive number");
  if (!j["base_center"].is_number()) throw SchemaError("model base_center must be a number");

  const nlohmann::json& c = j["calibration"];
  if (!c.is_object()) throw SchemaError("model calibration must be an object");
  CalibrationReport cal;
  auto cal_num = [&](const char* key) {
    if (!c.contains(key) || !c[key].is_number())
      throw SchemaError(std::string("model calibration requires numeric key: ") + key);
    return c[key].get<double>();
  };
  cal.mass_scale = cal_num("mass_scale");
  cal.point_max_ratio = cal_num("point_max_ratio");
  cal.clause_mass = cal_num("clause_mass");
  cal.clause_ratio = cal_num("clause_ratio");
  cal.scales_checked = static_cast<int>(cal_num("scales_checked"));
  cal.argmax_t = cal_num("argmax_t");
  cal.argmax_theta = cal_num("argmax_theta");

  return CantorModel(Gauge::from_json(j["gauge"]), std::move(lengths), m0,
                     j["base_center"].get<double>(), mass_scale, cal);
}

}  // namespace sifdecay
