#pragma once

namespace cavity {

// Wall trajectory. Units: hbar^2/m = 1, so hbar only enters through phases
// and the dilation term.
struct WallSchedule {
  enum class Kind { fixed, linear, sqrt_law };

  Kind kind = Kind::fixed;
  double L0 = 1.0;
  double Ldot0 = 0.0;
  // L(t)^2 = a t^2 + b t + c; for linear a = Ldot0^2, b = 2 L0 Ldot0, c = L0^2
  double a = 0.0, b = 0.0, c = 1.0;
  double hbar = 1.0;

  static WallSchedule fixed(double L0, double hbar = 1.0);
  static WallSchedule linear(double L0, double Ldot0, double hbar = 1.0);
  static WallSchedule sqrt_law(double a, double b, double c, double hbar = 1.0);
  // sqrt-law family with prescribed invariant B^2 = b^2 - 4ac and initial data.
  static WallSchedule sqrt_law_from_initial(double L0, double Ldot0, double B2, double hbar = 1.0);

  // b^2 - 4ac; L^3 Lddot = -B2/4 along the whole trajectory
  double B2() const;
};

struct LengthState {
  double L;
  double Ldot;
  double Lddot;
};

LengthState eval_length(const WallSchedule& s, double t);

// First time t > 0 at which L reaches zero, or +inf.
double zero_crossing_time(const WallSchedule& s);

// tau(t) = integral_0^t dt'/L(t')^2, closed form with a quadrature fallback.
double scaled_time(const WallSchedule& s, double t);
double scaled_time_quadrature(const WallSchedule& s, double t0, double t1, double abs_tol = 1e-12);

}  // namespace cavity
