#include "sifdecay/poisson.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"

namespace sifdecay {

namespace {

void check_radius(double r) {
  if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("radius must lie in [0,1)");
}

// Denominator |e^{is} - r|^2 written to stay accurate as r -> 1.
double kernel_denom(double r, double s) {
  double q = 1.0 - r;
  double sh = std::sin(0.5 * s);
  return q * q + 4.0 * r * sh * sh;
}

double p_of_distance(double r, double d) {
  double q = 1.0 - r;
  return q * (2.0 - q) / kernel_denom(r, d);
}

double q_of_offset(double r, double s) { return 2.0 * r * std::sin(s) / kernel_denom(r, s); }

struct KernelRange {
  double pmin, pmax, qmin, qmax;
  double dmin, dmax;  // circular distance range from the arc to the direction
};

// Range of the kernels over the offsets s in [s1, s1 + len].  The Poisson
// kernel only depends on the circular distance to zero, where it peaks; the
// conjugate kernel is checked at the interval ends and at its interior
// extrema +-s_star when the interval covers them.  The conjugate part is
// skipped when the caller does not need it.
KernelRange kernel_range(double r, double s1, double len, double s_star, double q_peak,
                         bool with_q) {
  double e1 = reduce_angle(s1);
  double e2 = reduce_angle(s1 + len);
  double d1 = std::fabs(e1);
  double d2 = std::fabs(e2);

  KernelRange out;
  out.dmin = (reduce_nonneg(-s1) <= len) ? 0.0 : std::min(d1, d2);
  out.dmax = (reduce_nonneg(kPi - s1) <= len) ? kPi : std::max(d1, d2);
  out.pmax = p_of_distance(r, out.dmin);
  out.pmin = p_of_distance(r, out.dmax);

  if (!with_q) {
    out.qmin = out.qmax = 0.0;
    return out;
  }
  double qa = q_of_offset(r, e1);
  double qb = q_of_offset(r, e2);
  out.qmin = std::min(qa, qb);
  out.qmax = std::max(qa, qb);
  if (reduce_nonneg(s_star - s1) <= len) out.qmax = std::max(out.qmax, q_peak);
  if (reduce_nonneg(-s_star - s1) <= len) out.qmin = std::min(out.qmin, -q_peak);
  return out;
}

// Estimate of a node's contribution with a certified error.  Two bounds are
// available and the smaller wins per kernel:
//  - range bound: the node mass times half the kernel's range over the arc;
//  - midpoint bound: the measure inside every node is mirror-symmetric about
//    the node center, so the first-order Taylor term integrates to zero and
//    |integral - m * K(theta - center)| <= m/2 * max|K''| * Var, where Var is
//    the within-node variance of the unit-mass measure.  Var obeys the exact
//    recursion Var_g = ((l_g - l_{g+1})/2)^2 + Var_{g+1} down to the
//    materialized depth, below which (l/2)^2 caps it.
// The midpoint bound is second order in the arc length, which is what keeps
// tight tolerances affordable as r -> 1.
struct NodeEst {
  double u = 0.0, v = 0.0;
  double uh = 0.0, vh = 0.0;
};

struct EvalContext {
  double r, theta, s_star, q_peak, amp;  // amp = (1-r)(1+r)
  const std::vector<double>* lengths;
  std::vector<double> mass;
  std::vector<double> var;
  int max_gen;
  bool with_q;
  long nodes = 0;
  long node_cap = 1L << 28;
};

NodeEst node_estimate(const EvalContext& ctx, int gen, double w) {
  double len = (*ctx.lengths)[static_cast<std::size_t>(gen)];
  double m = ctx.mass[static_cast<std::size_t>(gen)];
  KernelRange k =
      kernel_range(ctx.r, ctx.theta - w - len, len, ctx.s_star, ctx.q_peak, ctx.with_q);

  double ymin = kernel_denom(ctx.r, k.dmin);
  double sbar = (k.dmin <= 0.5 * kPi && k.dmax >= 0.5 * kPi)
                    ? 1.0
                    : std::max(std::sin(k.dmin), std::sin(k.dmax));
  double twors = 2.0 * ctx.r * sbar;
  double dc = reduce_angle(ctx.theta - (w + 0.5 * len));
  double var = ctx.var[static_cast<std::size_t>(gen)];

  NodeEst e;
  double uh1 = 0.5 * m * (k.pmax - k.pmin);
  double p2 = ctx.amp * (2.0 * twors * twors / (ymin * ymin * ymin) +
                         2.0 * ctx.r / (ymin * ymin));
  double uh2 = 0.5 * m * p2 * var;
  if (uh2 < uh1) {
    e.u = m * p_of_distance(ctx.r, std::fabs(dc));
    e.uh = uh2;
  } else {
    e.u = 0.5 * m * (k.pmax + k.pmin);
    e.uh = uh1;
  }

  if (ctx.with_q) {
    double vh1 = 0.5 * m * (k.qmax - k.qmin);
    double q2 = twors / ymin + 6.0 * ctx.r * twors / (ymin * ymin) +
                2.0 * twors * twors * twors / (ymin * ymin * ymin);
    double vh2 = 0.5 * m * q2 * var;
    if (vh2 < vh1) {
      e.v = m * q_of_offset(ctx.r, dc);
      e.vh = vh2;
    } else {
      e.v = 0.5 * m * (k.qmax + k.qmin);
      e.vh = vh1;
    }
  }
  return e;
}

NodeEst eval_node(EvalContext& ctx, int gen, double w, const NodeEst& e, double bu, double bv) {
  if (++ctx.nodes > ctx.node_cap)
    throw PrecisionError("node budget exhausted before reaching the requested tolerance",
                         ctx.max_gen + 1);
  bool u_done = e.uh <= bu || !(bu > 0.0);
  bool v_done = e.vh <= bv || !(bv > 0.0);
  if ((u_done && v_done) || gen == ctx.max_gen) return e;

  double len = (*ctx.lengths)[static_cast<std::size_t>(gen)];
  double child_len = (*ctx.lengths)[static_cast<std::size_t>(gen) + 1];
  double w2 = w + (len - child_len);
  NodeEst el = node_estimate(ctx, gen + 1, w);
  NodeEst er = node_estimate(ctx, gen + 1, w2);

  double su = el.uh + er.uh;
  double sv = el.vh + er.vh;
  double bul = su > 0.0 ? bu * (el.uh / su) : 0.5 * bu;
  double bvl = sv > 0.0 ? bv * (el.vh / sv) : 0.5 * bv;

  // The child that needs less goes first so its surplus flows to the other.
  NodeEst left, right;
  if (el.uh + el.vh <= er.uh + er.vh) {
    left = eval_node(ctx, gen + 1, w, el, bul, bvl);
    right = eval_node(ctx, gen + 1, w2, er, bu - left.uh, bv - left.vh);
  } else {
    right = eval_node(ctx, gen + 1, w2, er, bu - bul, bv - bvl);
    left = eval_node(ctx, gen + 1, w, el, bu - right.uh, bv - right.vh);
  }
  NodeEst a;
  a.u = left.u + right.u;
  a.v = left.v + right.v;
  a.uh = left.uh + right.uh;
  a.vh = left.vh + right.vh;
  return a;
}

}  // namespace

double poisson_kernel(double r, double s) {
  check_radius(r);
  return p_of_distance(r, s);
}

double conjugate_kernel(double r, double s) {
  check_radius(r);
  return q_of_offset(r, s);
}

PointEval log_modulus(const CantorModel& model, double r, double theta, double tol,
                      bool with_conjugate) {
  check_radius(r);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  EvalContext ctx;
  ctx.r = r;
  ctx.theta = reduce_nonneg(theta);
  ctx.s_star = std::acos(2.0 * r / (1.0 + r * r));
  double q = 1.0 - r;
  ctx.q_peak = 2.0 * r / (q * (2.0 - q));
  ctx.amp = (1.0 - r) * (1.0 + r);
  ctx.lengths = &model.lengths();
  ctx.max_gen = model.max_generation();
  ctx.with_q = with_conjugate;
  std::size_t depth = static_cast<std::size_t>(ctx.max_gen);
  ctx.mass.resize(depth + 1);
  for (int g = 0; g <= ctx.max_gen; ++g) ctx.mass[static_cast<std::size_t>(g)] = model.node_mass(g);
  const std::vector<double>& lengths = model.lengths();
  ctx.var.resize(depth + 1);
  ctx.var[depth] = 0.25 * lengths[depth] * lengths[depth];
  for (std::size_t g = depth; g-- > 0;) {
    double e = 0.5 * (lengths[g] - lengths[g + 1]);
    ctx.var[g] = e * e + ctx.var[g + 1];
  }

  NodeEst e0 = node_estimate(ctx, 0, model.base_start());
  NodeEst a = eval_node(ctx, 0, model.base_start(), e0, tol, tol);

  PointEval out;
  out.r = r;
  out.theta = theta;
  out.u = a.u;
  out.v = a.v;
  double slop = std::numeric_limits<double>::epsilon() * static_cast<double>(ctx.nodes);
  out.u_error = a.uh + slop * (1.0 + std::fabs(a.u));
  out.v_error = with_conjugate ? a.vh + slop * (1.0 + std::fabs(a.v)) : 0.0;
  out.nodes = ctx.nodes;
  if (a.uh > tol || a.vh > tol) {
    double excess = std::max(a.uh, a.vh) / tol;
    int extra = static_cast<int>(std::ceil(std::log2(excess))) + 1;
    throw PrecisionError("materialized depth " + std::to_string(ctx.max_gen) +
                             " cannot certify the requested tolerance at this point",
                         ctx.max_gen + extra);
  }
  return out;
}

PointEval log_modulus(const PointMassModel& model, double r, double theta, double tol,
                      bool with_conjugate) {
  check_radius(r);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  double s = theta - model.angle;
  PointEval out;
  out.r = r;
  out.theta = theta;
  out.u = model.mass * p_of_distance(r, reduce_angle(s));
  double eps = std::numeric_limits<double>::epsilon();
  out.u_error = 4.0 * eps * std::fabs(out.u);
  if (with_conjugate) {
    out.v = model.mass * q_of_offset(r, s);
    out.v_error = 4.0 * eps * (std::fabs(out.v) + model.mass);
  }
  out.nodes = 1;
  return out;
}

std::complex<double> value(const CantorModel& model, double r, double theta, double tol) {
  PointEval pe = log_modulus(model, r, theta, tol);
  return std::polar(std::exp(-pe.u), -pe.v);
}

std::complex<double> value(const PointMassModel& model, double r, double theta, double tol) {
  PointEval pe = log_modulus(model, r, theta, tol);
  return std::polar(std::exp(-pe.u), -pe.v);
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(double r, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = p_of_distance(r, lm), frm = p_of_distance(r, rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(r, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(r, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double kernel_integral(double r, double a, double b, double tol) {
  check_radius(r);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (a == b) return 0.0;
  double fa = p_of_distance(r, a);
  double fb = p_of_distance(r, b);
  double fm = p_of_distance(r, 0.5 * (a + b));
  double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson(r, a, b, fa, fm, fb, whole, tol, 48);
}

double circle_mean_log_modulus(const CantorModel& model, double r0, double theta0, double rho,
                               long n, double tol) {
  check_radius(r0);
  if (!(rho > 0.0) || !(r0 + rho < 1.0))
    throw DomainError("mean-value circle must stay inside the unit disk");
  if (n < 8) throw DomainError("mean-value rule needs at least 8 nodes");
  double cx = r0 * std::cos(theta0), cy = r0 * std::sin(theta0);
  double sum = 0.0;
  for (long i = 0; i < n; ++i) {
    double t = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    double x = cx + rho * std::cos(t), y = cy + rho * std::sin(t);
    sum += log_modulus(model, std::hypot(x, y), std::atan2(y, x), tol, false).u;
  }
  return sum / static_cast<double>(n);
}

SplitBound split_bound(const Gauge& gauge, double r, double eps) {
  check_radius(r);
  if (!(eps > 0.0) || eps > kPi * (1.0 + 1e-12))
    throw DomainError("split radius must lie in (0, pi]");
  double ge = gauge.g(std::min(eps, kPi));
  SplitBound out;
  out.near = 2.0 * eps * ge / (1.0 - r);
  out.far = kPi * ge;
  return out;
}

}  // namespace sifdecay
