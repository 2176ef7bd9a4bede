#pragma once

#include <complex>

#include "sifdecay/cantor.hpp"
#include "sifdecay/gauge.hpp"

namespace sifdecay {

// Poisson kernel for the unit disk at radius r, as a function of the angular
// offset s between the boundary point and the evaluation direction.
double poisson_kernel(double r, double s);

// Conjugate Poisson kernel at the same point.
double conjugate_kernel(double r, double s);

// Atom of mass `mass` at angle `angle`; the potential and its conjugate have
// closed forms, which makes this the cheap cross-check for the adaptive
// evaluator.
struct PointMassModel {
  double angle = 0.0;
  double mass = 1.0;
};

struct PointEval {
  double r = 0.0;
  double theta = 0.0;
  double u = 0.0;        // -log|S| at the point
  double v = 0.0;        // -arg S, same integral against the conjugate kernel
  double u_error = 0.0;  // certified absolute bound on the u estimate
  double v_error = 0.0;
  long nodes = 0;        // tree nodes visited
};

// Certified evaluation of u(z) = integral of the Poisson kernel against the
// model's measure, z = r e^{i theta}.  The tree is descended adaptively: a
// node is accepted once the kernel's oscillation over its arc, weighted by
// the node mass, fits into the error budget.  The budget is split between
// children in proportion to their own oscillation, and whatever the first
// child leaves unused flows to the second, so the overall bound stays sharp.
// Throws PrecisionError if the materialized depth cannot reach the requested
// tolerance; required_depth suggests a depth that would.
//
// The conjugate kernel swings between +-2r/(1-r^2) near the evaluation
// direction, so resolving v costs far more than resolving u as r -> 1.
// Callers that only need the modulus pass with_conjugate = false, which
// returns v = v_error = 0 and skips that work entirely.
PointEval log_modulus(const CantorModel& model, double r, double theta, double tol = 1e-9,
                      bool with_conjugate = true);
PointEval log_modulus(const PointMassModel& model, double r, double theta, double tol = 1e-9,
                      bool with_conjugate = true);

// Value of the singular inner function itself, via polar composition of the
// two integrals above.
std::complex<double> value(const CantorModel& model, double r, double theta, double tol = 1e-9);
std::complex<double> value(const PointMassModel& model, double r, double theta, double tol = 1e-9);

// Adaptive-Simpson integral of the Poisson kernel over offsets [a, b]; the
// half-period integral equals pi for every r, which the verification suite
// checks numerically.
double kernel_integral(double r, double a, double b, double tol = 1e-11);

// Average of u over the circle of radius rho around r0 e^{i theta0}
// (periodic trapezoid, which converges spectrally for harmonic data); equals
// u at the center by the mean value property.
double circle_mean_log_modulus(const CantorModel& model, double r0, double theta0, double rho,
                               long n = 256, double tol = 1e-9);

// The two-regime estimate behind the certification chain: mass within eps of
// the evaluation direction is controlled through the gauge and the kernel's
// peak, mass farther away through the kernel's tail.  Their sum dominates
// u(r, theta) for every theta once eps = pi * (1 - r).
struct SplitBound {
  double near = 0.0;
  double far = 0.0;
  double total() const { return near + far; }
};
SplitBound split_bound(const Gauge& gauge, double r, double eps);

}  // namespace sifdecay
