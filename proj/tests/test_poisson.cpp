#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "sifdecay/angles.hpp"
#include "sifdecay/cantor.hpp"
#include "sifdecay/errors.hpp"
#include "sifdecay/poisson.hpp"

#include "common.hpp"
#include "oracles.hpp"

using namespace sifdecay;
using doctest::Approx;
using fixtures::classical_model;
using fixtures::power_model;
using fixtures::rlog_model;

namespace {

// quadrature bound plus the documented rounding slop
double error_budget(const PointEval& ev, double tol) {
  return tol + oracles::kEps * static_cast<double>(ev.nodes) * (1.0 + std::fabs(ev.u)) + 1e-15;
}

}  // namespace

TEST_SUITE("poisson") {

TEST_CASE("kernel closed forms") {
  CHECK(poisson_kernel(0.0, 0.7) == 1.0);
  CHECK(poisson_kernel(0.0, -2.3) == 1.0);
  CHECK(poisson_kernel(0.5, 0.0) == Approx(3.0).epsilon(1e-15));
  CHECK(poisson_kernel(0.5, kPi) == Approx(1.0 / 3.0).epsilon(1e-15));
  for (double r : {0.25, 0.5, 0.9, 0.99, 0.999})
    CHECK(poisson_kernel(r, 0.0) == Approx((1.0 + r) / (1.0 - r)).epsilon(1e-15));

  std::mt19937 rng(fixtures::kSeed);
  std::uniform_real_distribution<double> uni(0.0, kPi);
  for (int i = 0; i < 200; ++i) {
    double r = 0.97 * uni(rng) / kPi, s = uni(rng), s2 = uni(rng);
    if (s2 < s) std::swap(s, s2);
    CHECK(poisson_kernel(r, -s) == poisson_kernel(r, s));  // even
    CHECK(poisson_kernel(r, s) >= poisson_kernel(r, s2));  // decreasing on (0, pi)
    CHECK(poisson_kernel(r, s) > 0.0);
  }
  CHECK_THROWS_AS(poisson_kernel(1.0, 0.3), DomainError);
  CHECK_THROWS_AS(poisson_kernel(-0.1, 0.3), DomainError);
}

TEST_CASE("conjugate kernel closed forms") {
  CHECK(conjugate_kernel(0.5, 0.0) == 0.0);
  CHECK(conjugate_kernel(0.0, 1.1) == 0.0);
  double s = std::acos(0.8);
  CHECK(conjugate_kernel(0.5, s) == Approx(4.0 / 3.0).epsilon(1e-14));
  std::mt19937 rng(fixtures::kSeed);
  std::uniform_real_distribution<double> uni(0.0, kPi);
  for (int i = 0; i < 100; ++i) {
    double r = 0.97 * uni(rng) / kPi, t = uni(rng);
    CHECK(conjugate_kernel(r, -t) == -conjugate_kernel(r, t));  // odd
    CHECK(std::fabs(conjugate_kernel(r, t)) <= 2.0 * r / (1.0 - r * r) * (1.0 + 1e-12));
  }
}

TEST_CASE("point mass at the origin direction reproduces (1+r)/(1-r)") {
  PointMassModel atom;  // angle 0, mass 1
  for (double r : {0.25, 0.5, 0.9, 0.99}) {
    PointEval ev = log_modulus(atom, r, 0.0, 1e-12);
    CHECK(std::fabs(ev.u - (1.0 + r) / (1.0 - r)) <= 1e-10);
    CHECK(ev.v == 0.0);
  }
  PointEval half = log_modulus(atom, 0.5, 0.0);
  CHECK(half.u == Approx(3.0).epsilon(1e-12));
  std::complex<double> s05 = value(atom, 0.5, 0.0);
  CHECK(std::fabs(s05.real() - 0.049787068367863944) <= 1e-10);
  CHECK(std::fabs(s05.imag()) <= 1e-12);

  // off-axis closed forms for both integrals
  PointMassModel shifted{1.2, 0.8};
  double r = 0.7, theta = 2.0, off = theta - shifted.angle;
  double denom = 1.0 + r * r - 2.0 * r * std::cos(off);
  PointEval ev = log_modulus(shifted, r, theta, 1e-12);
  CHECK(ev.u == Approx(0.8 * (1.0 - r * r) / denom).epsilon(1e-12));
  CHECK(ev.v == Approx(0.8 * 2.0 * r * std::sin(off) / denom).epsilon(1e-12));
}

TEST_CASE("radius zero collapses to the total mass") {
  const CantorModel& m = rlog_model();
  PointEval ev = log_modulus(m, 0.0, 1.7, 1e-12);
  CHECK(ev.u == Approx(m.total_mass()).epsilon(1e-13));
  CHECK(ev.u_error <= error_budget(ev, 1e-12));
  std::complex<double> s0 = value(m, 0.0, 0.0);
  CHECK(std::fabs(s0.real() - std::exp(-m.total_mass())) <= 1e-12);
  CHECK(std::fabs(s0.imag()) <= 1e-12);
}

TEST_CASE("modulus stays inside the unit disk and matches exp(-u)") {
  const CantorModel& m = power_model();
  std::mt19937 rng(fixtures::kSeed);
  std::uniform_real_distribution<double> ur(0.0, 0.9), ut(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    double r = ur(rng), theta = ut(rng);
    PointEval ev = log_modulus(m, r, theta);
    CHECK(ev.u > 0.0);
    CHECK(ev.u_error <= error_budget(ev, 1e-9));
    CHECK(ev.nodes > 0);
    std::complex<double> s = value(m, r, theta);
    CHECK(std::abs(s) <= 1.0);
    CHECK(std::abs(s) == Approx(std::exp(-ev.u)).epsilon(1e-13));
  }
}

TEST_CASE("adaptive evaluation matches the flat generation sum") {
  const CantorModel& c = classical_model();

  // dense cross-check point from the build log of record: r = 0.9 on axis
  PointEval ref = log_modulus(c, 0.9, 0.0, 1e-9, false);
  oracles::FlatSum flat = oracles::flat_generation_sum(c, 30, 0.9, 0.0);
  double gap = oracles::flat_midpoint_gap(c, 30, 0.9);
  CHECK(std::fabs(ref.u - flat.u) <= ref.u_error + flat.eval_error + gap);
  CHECK(std::fabs(ref.u - flat.u) <= 2e-9);

  std::mt19937 rng(fixtures::kSeed);
  std::uniform_real_distribution<double> ur(0.0, 0.95), ut(-kPi, kPi);
  for (const CantorModel* mp : {&classical_model(), &rlog_model()}) {
    for (int i = 0; i < 5; ++i) {
      double r = ur(rng), theta = ut(rng);
      PointEval ev = log_modulus(*mp, r, theta, 1e-10, false);
      oracles::FlatSum fs = oracles::flat_generation_sum(*mp, 30, r, theta);
      double bound = ev.u_error + fs.eval_error + oracles::flat_midpoint_gap(*mp, 30, r);
      CHECK(std::fabs(ev.u - fs.u) <= bound);
    }
  }
}

TEST_CASE("conjugate part can be skipped without disturbing u") {
  const CantorModel& m = rlog_model();
  for (double r : {0.3, 0.8, 0.95}) {
    PointEval with = log_modulus(m, r, 0.4, 1e-9, true);
    PointEval without = log_modulus(m, r, 0.4, 1e-9, false);
    CHECK(without.v == 0.0);
    CHECK(without.v_error == 0.0);
    CHECK(with.v_error <= error_budget(with, 1e-9));
    CHECK(std::fabs(with.u - without.u) <= with.u_error + without.u_error);
  }
}

TEST_CASE("evaluation is 2*pi periodic") {
  const CantorModel& m = power_model();
  for (double theta : {0.0, 1.0, -2.5}) {
    PointEval a = log_modulus(m, 0.9, theta, 1e-10, false);
    PointEval b = log_modulus(m, 0.9, theta + kTwoPi, 1e-10, false);
    double drift = oracles::poisson_deriv_max(0.9) * m.total_mass() * 4e-15;
    CHECK(std::fabs(a.u - b.u) <= a.u_error + b.u_error + drift);
  }
}

TEST_CASE("half-period kernel integral equals pi") {
  for (double r : {0.0, 0.5, 0.9, 0.99}) {
    CHECK(std::fabs(kernel_integral(r, 0.0, kPi) - kPi) <= 1e-9);
    CHECK(std::fabs(kernel_integral(r, -kPi, kPi) - kTwoPi) <= 2e-9);
  }
  // antiderivative 2*atan(((1+r)/(1-r)) * tan(s/2)) pins subranges
  for (double s : {0.3, 1.0, 2.0}) {
    double want = 2.0 * std::atan(3.0 * std::tan(0.5 * s));
    CHECK(kernel_integral(0.5, 0.0, s) == Approx(want).epsilon(1e-10));
  }
  double split = kernel_integral(0.9, 0.0, 0.3) + kernel_integral(0.9, 0.3, kPi);
  CHECK(std::fabs(split - kPi) <= 2e-9);
  CHECK_THROWS_AS(kernel_integral(1.0, 0.0, kPi), DomainError);
  CHECK_THROWS_AS(kernel_integral(0.5, 0.0, kPi, -1.0), DomainError);
}

TEST_CASE("mean value property on interior circles") {
  const CantorModel& m = rlog_model();
  struct Probe {
    double r0, theta0;
  };
  for (Probe p : {Probe{0.3, 0.0}, Probe{0.7, 2.0}, Probe{0.5, -1.2}}) {
    double rho = 0.4 * (1.0 - p.r0);
    double mean = circle_mean_log_modulus(m, p.r0, p.theta0, rho);
    double center = log_modulus(m, p.r0, p.theta0, 1e-9, false).u;
    CHECK(std::fabs(mean - center) <= 1e-6);
  }
  CHECK_THROWS_AS(circle_mean_log_modulus(m, 0.8, 0.0, 0.25), DomainError);
  CHECK_THROWS_AS(circle_mean_log_modulus(m, 0.3, 0.0, 0.1, 4), DomainError);
}

TEST_CASE("potential scales linearly with the measure") {
  const CantorModel& m = rlog_model();
  CantorModel half = m.with_mass_scale(0.5 * m.mass_scale());
  for (double r : {0.0, 0.5, 0.9}) {
    PointEval full = log_modulus(m, r, 1.0, 1e-10, false);
    PointEval part = log_modulus(half, r, 1.0, 1e-10, false);
    CHECK(std::fabs(part.u - 0.5 * full.u) <= part.u_error + 0.5 * full.u_error + 1e-15);
  }
}

TEST_CASE("split bound dominates the potential at eps = pi(1-r)") {
  const Gauge& gauge = power_model().gauge();
  const CantorModel& m = power_model();
  for (double r : {0.5, 0.9, 0.99}) {
    double eps = kPi * (1.0 - r);
    SplitBound sb = split_bound(gauge, r, eps);
    CHECK(sb.near == Approx(2.0 * kPi * gauge.g(eps)).epsilon(4e-15));
    CHECK(sb.far == kPi * gauge.g(eps));
    CHECK(sb.total() == Approx(3.0 * kPi * gauge.g(eps)).epsilon(4e-15));
    // the whole proof chain: u <= split total = log(1/omega(r))
    for (double theta : {m.base_center(), m.base_center() + 0.5, 2.0}) {
      PointEval ev = log_modulus(m, r, theta, 1e-9, false);
      CHECK(ev.u <= sb.total() + ev.u_error);
    }
    double target = std::log(1.0 / gauge.profile()(r));
    CHECK(sb.total() == Approx(target).epsilon(8e-15));
  }
  CHECK_THROWS_AS(split_bound(gauge, 0.5, 0.0), DomainError);
  CHECK_THROWS_AS(split_bound(gauge, 0.5, 4.0), DomainError);
  CHECK_THROWS_AS(split_bound(gauge, 1.0, 0.1), DomainError);
}

TEST_CASE("shallow models refuse tolerances they cannot certify") {
  BuildOptions shallow;
  shallow.base_center = 0.5;
  shallow.max_depth = 8;
  CantorModel m = build_model(Gauge::power_law(std::log(2.0) / std::log(3.0)), shallow);
  try {
    log_modulus(m, 0.99999, 0.5, 1e-12, false);
    FAIL("expected PrecisionError");
  } catch (const PrecisionError& e) {
    CHECK(e.required_depth > 8);
  }
}

TEST_CASE("invalid arguments are rejected") {
  const CantorModel& m = power_model();
  CHECK_THROWS_AS(log_modulus(m, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(log_modulus(m, -0.2, 0.0), DomainError);
  CHECK_THROWS_AS(log_modulus(m, 0.5, 0.0, 0.0), DomainError);
  PointMassModel atom;
  CHECK_THROWS_AS(log_modulus(atom, 1.2, 0.0), DomainError);
}

}  // TEST_SUITE
