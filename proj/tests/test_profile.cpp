#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sifdecay/angles.hpp"
#include "sifdecay/errors.hpp"
#include "sifdecay/profile.hpp"

using namespace sifdecay;

namespace {

double ulps_apart(double a, double b) {
  double u = std::nextafter(std::fabs(a), std::numeric_limits<double>::infinity()) - std::fabs(a);
  return std::fabs(a - b) / u;
}

// Reference values computed with mpmath at 30 significant digits from the
// defining formulas.
constexpr double kRlogW0 = 0.38073142980733000;
constexpr double kRlogW05 = 0.32228025627337862;
constexpr double kRlogW09 = 0.19661503834671125;
constexpr double kRlogW099 = 0.10794496270423772;
constexpr double kRlogW0999 = 0.072353980147739962;
constexpr double kRlogW09999 = 0.054285208316184018;
constexpr double kIlogW0 = 0.35864164386472413;
constexpr double kInvE = 0.36787944117144233;

}  // namespace

TEST_SUITE("profile") {

TEST_CASE("reciprocal-log profile matches high-precision formula values") {
  DecayProfile w = DecayProfile::reciprocal_log(0.5);
  CHECK(w(0.0) == doctest::Approx(kRlogW0).epsilon(2e-15));
  CHECK(w(0.5) == doctest::Approx(kRlogW05).epsilon(2e-15));
  CHECK(w(0.9) == doctest::Approx(kRlogW09).epsilon(2e-15));
  CHECK(w(0.99) == doctest::Approx(kRlogW099).epsilon(2e-15));
  CHECK(w(0.999) == doctest::Approx(kRlogW0999).epsilon(2e-15));
  CHECK(w(0.9999) == doctest::Approx(kRlogW09999).epsilon(2e-15));
}

TEST_CASE("iterated-log and power profiles match their formulas") {
  DecayProfile il = DecayProfile::iterated_log(0.5);
  CHECK(il(0.0) == doctest::Approx(kIlogW0).epsilon(2e-15));

  DecayProfile pw = DecayProfile::power(1.0);
  CHECK(pw(0.0) == doctest::Approx(kInvE).epsilon(2e-15));
  CHECK(pw(0.75) == doctest::Approx(0.25 * kInvE).epsilon(2e-15));

  DecayProfile pw2 = DecayProfile::power(1.0, 2.0);
  CHECK(pw2(0.9) == doctest::Approx(0.01 * kInvE).epsilon(4e-15));
}

TEST_CASE("omega evaluates through the gap so extreme radii stay accurate") {
  DecayProfile w = DecayProfile::reciprocal_log(0.5);
  double r = 1.0 - 1e-12;
  CHECK(w(r) == w.at_gap(1.0 - r));
  CHECK(w(r) > 0.0);
  CHECK(w(r) < w(0.999));
  // 0.5 / log(e + 1/gap) at the gap the subtraction actually leaves
  CHECK(w(r) == doctest::Approx(0.5 / std::log(kE + 1.0 / (1.0 - r))).epsilon(2e-15));
}

TEST_CASE("profiles are nonincreasing with range inside (0,1)") {
  std::mt19937 rng(20260815u);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<DecayProfile> families = {DecayProfile::reciprocal_log(0.5),
                                        DecayProfile::iterated_log(0.5),
                                        DecayProfile::power(1.0, 0.7)};
  for (const DecayProfile& w : families) {
    for (int i = 0; i < 1000; ++i) {
      double a = uni(rng), b = uni(rng);
      double r1 = std::min(a, b), r2 = std::max(a, b);
      double w1 = w(r1), w2 = w(r2);
      CHECK(w1 >= w2);
      CHECK(w1 > 0.0);
      CHECK(w1 < 1.0);
    }
  }
}

TEST_CASE("decay_radius witnesses the decay to zero") {
  DecayProfile w = DecayProfile::reciprocal_log(0.5);
  for (double delta : {0.3, 0.1, 0.07}) {
    double rd = w.decay_radius(delta);
    CHECK(rd < 1.0);
    CHECK(w(rd + 0.5 * (1.0 - rd)) < delta);
    CHECK(w(1.0 - 1e-9 * (1.0 - rd)) < delta);
  }
  // iterated-log decays so slowly that small thresholds leave double range
  DecayProfile il = DecayProfile::iterated_log(0.5);
  CHECK_THROWS_AS(il.decay_radius(1e-3), DomainError);
}

TEST_CASE("regularize_omega keeps an already decreasing sample list") {
  DecayProfile out = regularize_omega({{0.0, 0.3}, {0.5, 0.2}}, DecayProfile::power(0.5));
  REQUIRE(out.family() == ProfileFamily::table);
  REQUIRE(out.breakpoints().size() == 2);
  CHECK(out.breakpoints()[0].value == 0.3);
  CHECK(out.breakpoints()[1].value == 0.2);
  CHECK(out(0.0) == 0.3);
  CHECK(out(0.5) == 0.2);
}

TEST_CASE("regularize_omega takes the least nonincreasing majorant") {
  DecayProfile out = regularize_omega({{0.0, 0.3}, {0.5, 0.35}, {0.9, 0.1}},
                                      DecayProfile::power(0.25));
  REQUIRE(out.breakpoints().size() == 3);
  CHECK(out.breakpoints()[0].value == 0.35);
  CHECK(out.breakpoints()[1].value == 0.35);
  CHECK(out.breakpoints()[2].value == 0.1);
  // majorant: output >= input at every sample radius
  CHECK(out(0.0) >= 0.3);
  CHECK(out(0.5) >= 0.35);
  CHECK(out(0.9) >= 0.1);
}

TEST_CASE("regularize_omega rejects values outside (0,1)") {
  CHECK_THROWS_WITH_AS(regularize_omega({{0.0, 1.0}}, DecayProfile::power(0.5)),
                       "table breakpoint values must lie in (0, 1)", InvalidProfileError);
  CHECK_THROWS_AS(regularize_omega({{0.0, 0.0}}, DecayProfile::power(0.5)),
                  InvalidProfileError);
  CHECK_THROWS_AS(regularize_omega({}, DecayProfile::power(0.5)), InvalidProfileError);
  CHECK_THROWS_AS(regularize_omega({{0.2, 0.4}, {0.2, 0.3}}, DecayProfile::power(0.5)),
                  InvalidProfileError);
}

TEST_CASE("table profiles interpolate breakpoints and blend into the tail") {
  DecayProfile tail = DecayProfile::power(0.5);
  DecayProfile out = regularize_omega({{0.0, 0.3}, {0.5, 0.2}}, tail);
  CHECK(out(0.25) == doctest::Approx(0.25).epsilon(1e-15));

  // beyond the last breakpoint the tail takes over, scaled to be continuous
  double seam = out(0.5);
  double just_past = out(0.5 + 1e-9);
  CHECK(just_past <= seam);
  CHECK(just_past == doctest::Approx(seam).epsilon(1e-6));

  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> uni(0.5, 1.0);
  for (int i = 0; i < 200; ++i) {
    double a = uni(rng), b = uni(rng);
    double r1 = std::min(a, b), r2 = std::max(a, b);
    CHECK(out(r1) >= out(r2));
  }
}

TEST_CASE("profile JSON round-trips preserve evaluation exactly") {
  std::vector<DecayProfile> families = {
      DecayProfile::reciprocal_log(0.5), DecayProfile::iterated_log(0.5),
      DecayProfile::power(1.0, 0.7),
      regularize_omega({{0.0, 0.3}, {0.5, 0.2}}, DecayProfile::power(0.5))};
  std::mt19937 rng(3u);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const DecayProfile& w : families) {
    DecayProfile back = DecayProfile::from_json(w.to_json());
    CHECK(back.family() == w.family());
    for (int i = 0; i < 50; ++i) {
      double r = uni(rng);
      CHECK(back(r) == w(r));
    }
  }
}

TEST_CASE("profile JSON schema errors are reported as such") {
  CHECK_THROWS_AS(DecayProfile::from_json(nlohmann::json::array()), SchemaError);
  CHECK_THROWS_AS(DecayProfile::from_json({{"scale", 0.5}}), SchemaError);
  CHECK_THROWS_AS(DecayProfile::from_json({{"family", "nope"}, {"scale", 0.5}}), SchemaError);
  CHECK_THROWS_AS(
      DecayProfile::from_json({{"family", "reciprocal-log"}, {"scale", 0.5}, {"bogus", 1}}),
      SchemaError);
  CHECK_THROWS_AS(DecayProfile::from_json({{"family", "reciprocal-log"}}), SchemaError);
}

TEST_CASE("domain and parameter errors") {
  DecayProfile w = DecayProfile::reciprocal_log(0.5);
  CHECK_THROWS_AS(w(1.0), DomainError);
  CHECK_THROWS_AS(w(-0.1), DomainError);
  CHECK_THROWS_AS(w(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(w.at_gap(0.0), DomainError);
  CHECK_THROWS_AS(w.at_gap(1.5), DomainError);

  CHECK_THROWS_AS(DecayProfile::reciprocal_log(0.0), InvalidProfileError);
  CHECK_THROWS_AS(DecayProfile::reciprocal_log(-1.0), InvalidProfileError);
  CHECK_THROWS_AS(DecayProfile::power(1.0, 0.0), InvalidProfileError);
  // omega(0) = scale/log(e+1) reaches 1 once scale >= log(e+1)
  CHECK_THROWS_WITH_AS(DecayProfile::reciprocal_log(1.32), "omega must be < 1",
                       InvalidProfileError);
  CHECK_THROWS_AS(DecayProfile::power(2.8), InvalidProfileError);
}

TEST_CASE("reference values agree with ulp-level reproducibility") {
  // the formula evaluation itself must be stable: two evaluation paths of
  // the same radius may differ by libm rounding only
  DecayProfile w = DecayProfile::reciprocal_log(0.5);
  for (double r : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    CHECK(ulps_apart(w(r), w.at_gap(1.0 - r)) == 0.0);
  }
}

}  // TEST_SUITE
