#pragma once

#include "sympb/curve_geometry.hpp"

namespace sympb {

// Oriented chord from gamma(t0) to gamma(t1); parameters are lifted reals with t1 = t0 + gap.
struct PhaseChord {
  double t0 = 0.0;
  double t1 = 0.0;
  double gap = 0.0;

  static PhaseChord from_gap(double t0, double gap) { return {t0, t0 + gap, gap}; }
};

// The unique t* in (t, t + L) with gamma'(t*) parallel to gamma'(t), as a lifted real.
double tangent_antipode(const AffineCurve& curve, double t);

bool in_phase_space(const AffineCurve& curve, const PhaseChord& chord);

// One step of the outer-length (symplectic) billiard map: the next point t2 solves
// det(gamma(t2) - gamma(t0), gamma'(t1)) = 0 on (t1, t1*).
PhaseChord step(const AffineCurve& curve, const PhaseChord& chord);

// |det(gamma(t2) - gamma(t0), gamma'(t1))| for a triple.
double bounce_residual(const AffineCurve& curve, double t0, double t1, double t2);

// Generating function S(t, t') = det(gamma(t), gamma(t')) and its partial derivatives.
double generating_function(const AffineCurve& curve, double t, double tp);
double generating_function_d1(const AffineCurve& curve, double t, double tp);
double generating_function_d2(const AffineCurve& curve, double t, double tp);

// Max over the triple of |d/dt1 [S(t0,t1) + S(t1,t2)]| after a step from (t0, t1).
double check_variational(const AffineCurve& curve, const PhaseChord& chord);

// Outgoing-minus-incoming gap for a tangency point t_mid and incoming gap eps: solves the
// bounce condition in the local frame (gamma'(t_mid), gamma''(t_mid)) from the Taylor
// expansion of k around t_mid, free of the cancellation that hits positional root finding.
struct GlancingIncrement {
  double d = 0.0;          // eps_out - eps
  double leading = 0.0;    // k'(t_mid) eps^4 / 30
  bool converged = false;  // Taylor series convergent at this eps
};
GlancingIncrement glancing_increment(const AffineCurve& curve, double t_mid, double eps);

struct LazutkinDefect {
  double eps = 0.0;
  double eps_out = 0.0;
  double predicted = 0.0;  // eps + k'(t + eps) eps^4 / 30
  double defect = 0.0;     // eps_out - predicted
};
// Starts from the chord (t, t + eps); k' is taken at the middle point t + eps.
LazutkinDefect lazutkin_defect(const AffineCurve& curve, double t, double eps);

}  // namespace sympb
