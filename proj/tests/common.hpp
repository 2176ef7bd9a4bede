#pragma once

#include <cmath>
#include <random>

#include "sifdecay/cantor.hpp"
#include "sifdecay/gauge.hpp"
#include "sifdecay/profile.hpp"

// Shared model fixtures.  Calibration costs seconds, so each test binary
// builds the models it touches exactly once.
namespace sifdecay::fixtures {

constexpr unsigned kSeed = 20260815u;

// Reciprocal-log profile omega(r) = 0.5/log(e + 1/(1-r)), the slow-decay
// family the whole pipeline is certified against.
inline const CantorModel& rlog_model() {
  static const CantorModel model = build_model(Gauge(DecayProfile::reciprocal_log(0.5)));
  return model;
}

// Middle-thirds set on base arc [0, 1] with the classical gauge
// h(t) = t^(log 2/log 3): lengths are exactly 3^-n, so closed-form oracles
// apply.  min_length is lowered to keep generation 40 materialized.
inline const CantorModel& classical_model() {
  static const CantorModel model = [] {
    BuildOptions opt;
    opt.base_center = 0.5;
    opt.max_depth = 48;
    opt.min_length = 1e-20;
    return build_model(Gauge::power_law(std::log(2.0) / std::log(3.0)), opt);
  }();
  return model;
}

// Power profile omega(r) = (1-r)/e.
inline const CantorModel& power_model() {
  static const CantorModel model = build_model(Gauge(DecayProfile::power(1.0)));
  return model;
}

}  // namespace sifdecay::fixtures
