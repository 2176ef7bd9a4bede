#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"
#include "sifdecay/gauge.hpp"
#include "sifdecay/profile.hpp"

using namespace sifdecay;

namespace {

double ulps_apart(double a, double b) {
  double u = std::nextafter(std::fabs(a), std::numeric_limits<double>::infinity()) - std::fabs(a);
  return std::fabs(a - b) / u;
}

// mpmath, 30 significant digits
constexpr double kRlogGPi = 0.10245982081297735;   // log(1/omega(0)) / (3 pi)
constexpr double kRlogHPi = 0.32188702035417624;   // pi * g(pi)
constexpr double kPowerGPi = 0.10610329539459689;  // 1/(3 pi)
constexpr double kAlpha = 0.63092975357145744;     // log 2 / log 3

Gauge rlog_gauge() { return Gauge(DecayProfile::reciprocal_log(0.5)); }

}  // namespace

TEST_SUITE("gauge") {

TEST_CASE("g at the full scale reproduces the formula for each family") {
  Gauge rg = rlog_gauge();
  CHECK(rg.g(kPi) == doctest::Approx(kRlogGPi).epsilon(4e-15));
  // the derivation: g(pi) = log(1/omega(0)) / (3 pi)
  CHECK(rg.g(kPi) ==
        doctest::Approx(std::log(1.0 / DecayProfile::reciprocal_log(0.5)(0.0)) / kThreePi)
            .epsilon(4e-15));

  Gauge pg((DecayProfile::power(1.0)));
  CHECK(pg.g(kPi) == doctest::Approx(kPowerGPi).epsilon(4e-15));
}

TEST_CASE("power-family h(pi) lands on 1/3") {
  // s*g(s) = (s/(3 pi)) (1 + log(pi/s)) is increasing, so the infimum sits at
  // s = t and h(pi) = min(sqrt(pi), pi*g(pi)) = 1/3
  Gauge pg((DecayProfile::power(1.0)));
  CHECK(pg.closed_form());
  CHECK(pg.h_pi() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  Gauge rg = rlog_gauge();
  CHECK(rg.closed_form());
  CHECK(rg.h_pi() == doctest::Approx(kRlogHPi).epsilon(4e-15));
}

TEST_CASE("classical gauge inverts exactly on dyadic levels") {
  Gauge cg = Gauge::power_law(std::log(2.0) / std::log(3.0));
  CHECK(cg.power_alpha() == doctest::Approx(kAlpha).epsilon(2e-15));
  CHECK(cg.h(1.0) == 1.0);
  for (int n = 1; n <= 20; ++n) {
    double y = std::ldexp(1.0, -n);
    double t = cg.h_inverse(y);
    CHECK(t == doctest::Approx(std::pow(3.0, -n)).epsilon(1e-12));
    CHECK(cg.h(t) >= y);
    CHECK(cg.h(cg.h_inverse_floor(y)) <= y);
  }
}

TEST_CASE("h inversion round-trips as a bracket") {
  std::mt19937 rng(20260815u);
  for (const Gauge& g : {rlog_gauge(), Gauge::power_law(0.5)}) {
    std::uniform_real_distribution<double> uni(1e-12, g.h_pi());
    for (int i = 0; i < 100; ++i) {
      double y = uni(rng);
      double hi = g.h_inverse(y);
      double lo = g.h_inverse_floor(y);
      CHECK(lo <= hi);
      CHECK(g.h(hi) >= y);
      CHECK(g.h(lo) <= y);
      CHECK(hi - lo <= 2e-15 * hi);
    }
    CHECK(g.h_inverse(g.h_pi()) == doctest::Approx(kPi).epsilon(1e-12));
  }
}

TEST_CASE("g is nonincreasing and h nondecreasing") {
  std::mt19937 rng(20260815u);
  std::uniform_real_distribution<double> loguni(std::log(1e-12), std::log(kPi));
  for (const Gauge& g : {rlog_gauge(), Gauge(DecayProfile::iterated_log(0.5)),
                         Gauge(DecayProfile::power(1.0)), Gauge::power_law(0.7)}) {
    for (int i = 0; i < 500; ++i) {
      double a = std::exp(loguni(rng)), b = std::exp(loguni(rng));
      double t1 = std::min(a, b), t2 = std::max(a, b);
      CHECK(g.g(t1) >= g.g(t2));
      CHECK(g.h(t1) <= g.h(t2));
    }
  }
}

TEST_CASE("h is dominated by sqrt(t) and t*g(t) with no tolerance") {
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> loguni(std::log(1e-12), std::log(kPi));
  for (const Gauge& g : {rlog_gauge(), Gauge(DecayProfile::power(1.0))}) {
    for (int i = 0; i < 500; ++i) {
      double t = std::exp(loguni(rng));
      double h = g.h(t);
      CHECK(h <= std::sqrt(t));
      CHECK(h <= t * g.g(t));
    }
  }
}

TEST_CASE("superlinearity: h(t)/t dominates the three-term floor") {
  // h(t)/t >= min{1/sqrt(t), g(sqrt(t)), g(pi)/sqrt(t)} on (0, 1]: whichever
  // branch h takes, one of the three terms is a lower bound
  std::mt19937 rng(4u);
  std::uniform_real_distribution<double> loguni(std::log(1e-10), 0.0);
  for (const Gauge& g : {rlog_gauge(), Gauge(DecayProfile::iterated_log(0.5)),
                         Gauge(DecayProfile::power(1.0))}) {
    double gpi = g.g(kPi);
    for (int i = 0; i < 500; ++i) {
      double t = std::exp(loguni(rng));
      double rt = std::sqrt(t);
      double floor = std::min({1.0 / rt, g.g(rt), gpi / rt});
      CHECK(g.h(t) / t >= floor * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("certified-bound identity: 3 pi g(pi(1-r)) = log(1/omega(r))") {
  Gauge rg = rlog_gauge();
  const DecayProfile& w = rg.profile();
  std::mt19937 rng(20260815u);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double r = 1.0 - std::pow(uni(rng), 3.0);  // cluster toward r = 1
    if (r >= 1.0) continue;
    double lhs = kThreePi * rg.g(kPi * (1.0 - r));
    double rhs = std::log(1.0 / w(r));
    worst = std::max(worst, ulps_apart(rhs, lhs));
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("gauge JSON round-trips preserve g and h exactly") {
  for (const Gauge& g : {rlog_gauge(), Gauge::power_law(0.5)}) {
    Gauge back = Gauge::from_json(g.to_json());
    CHECK(back.closed_form() == g.closed_form());
    for (double t : {1e-9, 1e-4, 0.1, 1.0, 3.0}) {
      CHECK(back.g(t) == g.g(t));
      CHECK(back.h(t) == g.h(t));
    }
  }
  CHECK_THROWS_AS(Gauge::from_json({{"kind", "nope"}}), SchemaError);
  CHECK_THROWS_AS(Gauge::from_json({{"kind", "power-law"}}), SchemaError);
  CHECK_THROWS_AS(Gauge::from_json({{"kind", "power-law"}, {"alpha", 0.5}, {"x", 1}}),
                  SchemaError);
}

TEST_CASE("domain errors outside (0, pi] and the inversion range") {
  Gauge g = rlog_gauge();
  CHECK_THROWS_AS(g.g(0.0), DomainError);
  CHECK_THROWS_AS(g.g(-1.0), DomainError);
  CHECK_THROWS_AS(g.g(4.0), DomainError);
  CHECK_THROWS_AS(g.h(0.0), DomainError);
  CHECK_THROWS_AS(g.h(4.0), DomainError);
  CHECK_THROWS_AS(g.h_inverse(0.0), DomainError);
  CHECK_THROWS_AS(g.h_inverse(g.h_pi() * 1.01), DomainError);
  CHECK_THROWS_AS(Gauge::power_law(0.0), DomainError);
  CHECK_THROWS_AS(Gauge::power_law(2.5), DomainError);
}

}  // TEST_SUITE
