#include "sifdecay/scan.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"

namespace sifdecay {

namespace {

constexpr long kGridCap = 1L << 20;
constexpr int kSeedGenCap = 18;
constexpr int kBinGenCap = 20;
constexpr std::size_t kPoolCap = 4096;
constexpr std::size_t kCandidateCap = 48;
constexpr long kCellSeparation = 8;

// Endpoints of every generation whose arcs are at least min_len long.  Deeper
// generations contain the endpoints of shallower ones, so only the deepest
// qualifying generation is enumerated.
std::vector<double> endpoint_seeds(const CantorModel& model, double min_len) {
  const std::vector<double>& lengths = model.lengths();
  int deepest = 0;
  while (deepest + 1 <= model.max_generation() && deepest + 1 <= kSeedGenCap &&
         lengths[static_cast<std::size_t>(deepest) + 1] >= min_len)
    ++deepest;

  std::vector<double> starts{0.0};
  for (int k = 1; k <= deepest; ++k) {
    double shift = lengths[static_cast<std::size_t>(k) - 1] - lengths[static_cast<std::size_t>(k)];
    std::size_t n = starts.size();
    for (std::size_t i = 0; i < n; ++i) starts.push_back(starts[i] + shift);
  }

  double len = lengths[static_cast<std::size_t>(deepest)];
  std::vector<double> seeds;
  seeds.reserve(2 * starts.size());
  for (double o : starts) {
    seeds.push_back(reduce_angle(model.base_start() + o));
    seeds.push_back(reduce_angle(model.base_start() + o + len));
  }
  return seeds;
}

void check_scan_args(double r, double tol) {
  if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("radius must lie in [0,1)");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
}

long grid_size(double r) {
  long n = std::max<long>(1024, static_cast<long>(std::ceil(64.0 / (1.0 - r))));
  return std::min(n, kGridCap);
}

void fft_inplace(std::vector<std::complex<double>>& a, bool invert) {
  std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = (invert ? -kTwoPi : kTwoPi) / static_cast<double>(len);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> x = a[i + j];
        std::complex<double> y = a[i + j + len / 2] * w;
        a[i + j] = x + y;
        a[i + j + len / 2] = x - y;
        w *= wl;
      }
    }
  }
  if (invert)
    for (std::complex<double>& x : a) x /= static_cast<double>(n);
}

// u sampled on the nf-cell uniform grid, approximated in one sweep: leaf
// masses of the deepest affordable generation are spread linearly onto the
// two nearest cells and circularly convolved with the sampled kernel.  Cell
// width stays well under the kernel scale 1-r, so the binning error (a few
// 1e-3 relative) only matters for ranking, never for certified values.
std::vector<double> coarse_u_grid(const CantorModel& model, double r, std::size_t nf) {
  const std::vector<double>& lengths = model.lengths();
  double delta = kTwoPi / static_cast<double>(nf);
  int kgen = 0;
  while (kgen < model.max_generation() && kgen < kBinGenCap &&
         lengths[static_cast<std::size_t>(kgen)] > delta)
    ++kgen;
  double leaf_len = lengths[static_cast<std::size_t>(kgen)];
  double leaf_mass = model.node_mass(kgen);
  double theta0 = -kPi + delta;

  std::vector<double> bins(nf, 0.0);
  auto deposit = [&](double center) {
    double p = (center - theta0) / delta;
    double fl = std::floor(p);
    double w = p - fl;
    long i0 = static_cast<long>(fl) % static_cast<long>(nf);
    if (i0 < 0) i0 += static_cast<long>(nf);
    std::size_t ia = static_cast<std::size_t>(i0);
    std::size_t ib = ia + 1 == nf ? 0 : ia + 1;
    bins[ia] += leaf_mass * (1.0 - w);
    bins[ib] += leaf_mass * w;
  };

  // Gray-code walk over the 2^kgen leaves: one length-difference step each.
  double base = model.base_start() + 0.5 * leaf_len;
  deposit(base);
  unsigned long count = 1UL << kgen;
  unsigned long gprev = 0;
  double off = 0.0;
  for (unsigned long i = 1; i < count; ++i) {
    unsigned long g = i ^ (i >> 1);
    unsigned long diff = g ^ gprev;
    int b = __builtin_ctzl(diff);
    double step = lengths[static_cast<std::size_t>(b)] - lengths[static_cast<std::size_t>(b) + 1];
    off += (g & diff) ? step : -step;
    gprev = g;
    deposit(base + off);
  }

  std::vector<std::complex<double>> fa(nf), fb(nf);
  for (std::size_t m = 0; m < nf; ++m) fa[m] = bins[m];
  for (std::size_t m = 0; m < nf; ++m) {
    std::size_t d = std::min(m, nf - m);
    fb[m] = poisson_kernel(r, delta * static_cast<double>(d));
  }
  fft_inplace(fa, false);
  fft_inplace(fb, false);
  for (std::size_t m = 0; m < nf; ++m) fa[m] *= fb[m];
  fft_inplace(fa, true);

  std::vector<double> u(nf);
  for (std::size_t m = 0; m < nf; ++m) u[m] = fa[m].real();
  return u;
}

// Certified stage shared by both model kinds: full-tolerance evaluation of
// the ranked candidates, then golden-section refinement around the winner.
// The refined point is adopted only on strict improvement, so flat stretches
// of u keep the grid angle (and r = 0 keeps the smallest grid angle exactly).
template <class Model>
CircleMin finish_scan(const Model& model, double r, double tol, double cell, int window_cells,
                      const std::vector<double>& cand, long points_base) {
  long evals = 0;
  double best_u = -1.0, best_theta = 0.0, best_err = 0.0;
  for (double th : cand) {
    PointEval pe = log_modulus(model, r, th, tol, false);
    ++evals;
    if (pe.u > best_u || (pe.u == best_u && th < best_theta)) {
      best_u = pe.u;
      best_theta = th;
      best_err = pe.u_error;
    }
  }

  double res = 1e-3 * (1.0 - r);
  double a = best_theta - window_cells * cell, b = best_theta + window_cells * cell;
  const double invphi = 0.6180339887498949;
  auto eval_u = [&](double th, double* err) {
    PointEval pe = log_modulus(model, r, th, tol, false);
    ++evals;
    *err = pe.u_error;
    return pe.u;
  };
  double ec, ed;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = eval_u(c, &ec), fd = eval_u(d, &ed);
  while (b - a > res) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      ed = ec;
      c = b - invphi * (b - a);
      fc = eval_u(c, &ec);
    } else {
      a = c;
      c = d;
      fc = fd;
      ec = ed;
      d = a + invphi * (b - a);
      fd = eval_u(d, &ed);
    }
  }
  double ref_theta = fc >= fd ? c : d;
  double ref_u = fc >= fd ? fc : fd;
  double ref_err = fc >= fd ? ec : ed;
  if (ref_u > best_u + 1e-15 * (1.0 + std::fabs(best_u))) {
    best_u = ref_u;
    best_theta = ref_theta;
    best_err = ref_err;
  }

  CircleMin out;
  out.r = r;
  out.u_max = best_u;
  out.u_max_error = best_err;
  out.argmin_theta = best_theta;
  out.min_modulus_lo = std::exp(-(best_u + tol));
  out.min_modulus_hi = std::min(1.0, std::exp(-(best_u - tol)));
  out.points = points_base + evals;
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double_token(const std::string& tok) {
  try {
    std::size_t idx = 0;
    double v = std::stod(tok, &idx);
    while (idx < tok.size() && std::isspace(static_cast<unsigned char>(tok[idx]))) ++idx;
    if (idx != tok.size()) throw SchemaError("malformed number in radii spec: " + tok);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw SchemaError("malformed number in radii spec: " + tok);
  }
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

CircleMin min_on_circle(const CantorModel& model, double r, double tol) {
  check_scan_args(r, tol);
  long n = grid_size(r);
  std::size_t nf = 1024;
  while (static_cast<long>(nf) < n) nf <<= 1;
  double delta = kTwoPi / static_cast<double>(nf);

  std::vector<double> cu = coarse_u_grid(model, r, nf);

  // Ranking pool: the best cells overall plus the cell nearest each
  // construction endpoint of the generations coarser than 1-r.
  std::vector<std::uint32_t> pool(nf);
  std::iota(pool.begin(), pool.end(), 0u);
  auto better = [&cu](std::uint32_t x, std::uint32_t y) {
    return cu[x] > cu[y] || (cu[x] == cu[y] && x < y);
  };
  std::size_t keep = std::min(kPoolCap, nf);
  std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                   better);
  pool.resize(keep);
  for (double s : endpoint_seeds(model, 1.0 - r)) {
    long i = std::lround((s - (-kPi + delta)) / delta) % static_cast<long>(nf);
    if (i < 0) i += static_cast<long>(nf);
    pool.push_back(static_cast<std::uint32_t>(i));
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::sort(pool.begin(), pool.end(), better);

  // Greedy pick with a minimum cell separation, so the candidates cover
  // distinct local maxima instead of one peak's neighborhood.
  std::vector<long> picked;
  for (std::uint32_t i : pool) {
    bool clear = true;
    for (long j : picked) {
      long d = std::labs(static_cast<long>(i) - j);
      d = std::min(d, static_cast<long>(nf) - d);
      if (d < kCellSeparation) {
        clear = false;
        break;
      }
    }
    if (!clear) continue;
    picked.push_back(static_cast<long>(i));
    if (picked.size() >= kCandidateCap) break;
  }

  std::vector<double> cand;
  cand.reserve(picked.size());
  for (long i : picked)
    cand.push_back(-kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(nf));
  return finish_scan(model, r, tol, delta, 4, cand, static_cast<long>(nf));
}

CircleMin min_on_circle(const PointMassModel& model, double r, double tol) {
  check_scan_args(r, tol);
  long n = grid_size(r);

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i < n; ++i)
    grid.push_back(-kPi + kTwoPi * static_cast<double>(i + 1) / static_cast<double>(n));
  grid.push_back(reduce_angle(model.angle));
  std::sort(grid.begin(), grid.end());

  // The closed form is exact, so the coarse pass ranks directly; ascending
  // order plus strict comparisons keep ties on the smallest angle.
  struct Top {
    double u, theta;
  };
  std::vector<Top> top;
  for (double th : grid) {
    double u = log_modulus(model, r, th, tol, false).u;
    std::size_t pos = top.size();
    while (pos > 0 && u > top[pos - 1].u) --pos;
    if (pos < 16) {
      top.insert(top.begin() + static_cast<std::ptrdiff_t>(pos), {u, th});
      if (top.size() > 16) top.pop_back();
    }
  }

  std::vector<double> cand;
  cand.reserve(top.size());
  for (const Top& t : top) cand.push_back(t.theta);
  return finish_scan(model, r, tol, kTwoPi / static_cast<double>(n), 1, cand,
                     static_cast<long>(grid.size()));
}

CircleMin min_on_disk(const CantorModel& model, double r, double tol) {
  return min_on_circle(model, r, tol);
}

CircleMin min_on_disk(const PointMassModel& model, double r, double tol) {
  return min_on_circle(model, r, tol);
}

std::vector<ScanReport> certify_estimate(const CantorModel& model, const Gauge& gauge,
                                         std::vector<double> radii, double tol) {
  if (!gauge.has_profile())
    throw DomainError("gauge carries no decay profile to certify against");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  for (double r : radii)
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("scan radii must lie in [0,1)");
  std::sort(radii.begin(), radii.end());

  const DecayProfile& prof = gauge.profile();
  std::vector<ScanReport> out;
  out.reserve(radii.size());
  for (double r : radii) {
    ScanReport rep;
    rep.r = r;
    rep.omega_r = prof(r);
    double t_eps = kPi * (1.0 - r);
    rep.proof_bound = prof.at_gap(t_eps / kPi);
    try {
      CircleMin cm = min_on_circle(model, r, tol);
      rep.min_modulus_lo = cm.min_modulus_lo;
      rep.min_modulus_hi = cm.min_modulus_hi;
      rep.argmin_theta = cm.argmin_theta;
      rep.u_max = cm.u_max;
      rep.u_max_error = cm.u_max_error;
      rep.pass_estimate = cm.min_modulus_lo >= rep.omega_r;
      rep.pass_proof_chain = cm.u_max + cm.u_max_error <= -std::log(rep.omega_r) + tol;
    } catch (const PrecisionError&) {
      double nan = std::numeric_limits<double>::quiet_NaN();
      rep.min_modulus_lo = rep.min_modulus_hi = rep.argmin_theta = nan;
      rep.u_max = rep.u_max_error = nan;
      rep.pass_estimate = rep.pass_proof_chain = false;
      rep.status = "indeterminate";
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::string scan_to_csv(const std::vector<ScanReport>& reports) {
  std::string out =
      "r,min_modulus_lo,min_modulus_hi,argmin_theta,omega_r,proof_bound,"
      "pass_estimate,pass_proof_chain,status\n";
  for (const ScanReport& p : reports) {
    out += fmt17(p.r);
    out += ',';
    out += fmt17(p.min_modulus_lo);
    out += ',';
    out += fmt17(p.min_modulus_hi);
    out += ',';
    out += fmt17(p.argmin_theta);
    out += ',';
    out += fmt17(p.omega_r);
    out += ',';
    out += fmt17(p.proof_bound);
    out += ',';
    out += p.pass_estimate ? "true" : "false";
    out += ',';
    out += p.pass_proof_chain ? "true" : "false";
    out += ',';
    out += p.status;
    out += '\n';
  }
  return out;
}

nlohmann::json scan_to_json(const std::vector<ScanReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ScanReport& p : reports) {
    arr.push_back({{"r", p.r},
                   {"min_modulus_lo", p.min_modulus_lo},
                   {"min_modulus_hi", p.min_modulus_hi},
                   {"argmin_theta", p.argmin_theta},
                   {"omega_r", p.omega_r},
                   {"proof_bound", p.proof_bound},
                   {"pass_estimate", p.pass_estimate},
                   {"pass_proof_chain", p.pass_proof_chain},
                   {"status", p.status},
                   {"u_max", p.u_max},
                   {"u_max_error", p.u_max_error}});
  }
  return arr;
}

std::vector<double> parse_radii_spec(const std::string& spec) {
  std::string s = trim(spec);
  if (s.empty()) return {};

  std::vector<double> radii;
  if (s.rfind("geo:", 0) == 0) {
    std::string rest = s.substr(4);
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
      std::size_t next = rest.find(':', pos);
      parts.push_back(rest.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (parts.size() != 3) throw SchemaError("geometric radii spec needs geo:<r0>:<end gap>:<count>");
    double r0 = parse_double_token(parts[0]);
    double gend = parse_double_token(parts[1]);
    double cnt = parse_double_token(parts[2]);
    long n = static_cast<long>(cnt);
    if (!(r0 >= 0.0) || !(r0 < 1.0)) throw SchemaError("radii must lie in [0,1)");
    double g0 = 1.0 - r0;
    if (!(gend > 0.0) || gend > g0) throw SchemaError("geometric end gap must lie in (0, 1-r0]");
    if (n < 1 || static_cast<double>(n) != cnt || n > 1000000)
      throw SchemaError("geometric radii count must be a positive integer");
    for (long i = 0; i < n; ++i) {
      double t = (n == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      radii.push_back(1.0 - g0 * std::pow(gend / g0, t));
    }
    return radii;
  }

  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(',', pos);
    std::string tok = trim(s.substr(pos, next - pos));
    if (tok.empty()) throw SchemaError("empty entry in radii list");
    double r = parse_double_token(tok);
    if (!(r >= 0.0) || !(r < 1.0)) throw SchemaError("radii must lie in [0,1)");
    radii.push_back(r);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return radii;
}

FastBoundReport fast_bound_check(double a, const std::vector<double>& radii) {
  if (!(a > 0.0)) throw DomainError("point mass must be positive");
  FastBoundReport rep;
  rep.radii = radii;
  rep.values.reserve(radii.size());
  rep.infimum = std::numeric_limits<double>::quiet_NaN();
  for (double r : radii) {
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("radii must lie in [0,1)");
    double v = std::exp(-a * (1.0 + r));
    rep.values.push_back(v);
    if (!(v >= rep.infimum)) rep.infimum = v;
  }
  return rep;
}

std::vector<double> radial_probe(const CantorModel& model, double theta_star,
                                 const std::vector<double>& radii, double tol) {
  const int probe_gen = 10;
  if (model.max_generation() < probe_gen)
    throw DomainError("model is too shallow for a radial probe (needs generation 10)");

  const std::vector<double>& lengths = model.lengths();
  const double slack = 1e-12;
  double o = reduce_nonneg(theta_star - model.base_start());
  if (o > lengths[0] + slack)
    throw DomainError("theta_star is not inside a generation-10 interval of the support");
  o = std::min(o, lengths[0]);
  for (int g = 0; g < probe_gen; ++g) {
    double lw = lengths[static_cast<std::size_t>(g)];
    double lc = lengths[static_cast<std::size_t>(g) + 1];
    if (o <= lc + slack) {
      o = std::min(o, lc);
    } else if (o >= lw - lc - slack) {
      o = std::max(0.0, o - (lw - lc));
    } else {
      throw DomainError("theta_star is not inside a generation-10 interval of the support");
    }
  }

  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("radii must lie in [0,1)");
    out.push_back(std::exp(-log_modulus(model, r, theta_star, tol, false).u));
  }
  return out;
}

}  // namespace sifdecay
