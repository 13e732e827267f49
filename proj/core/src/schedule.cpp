#include "cavity/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cavity/errors.hpp"
#include "cavity/quadrature.hpp"

namespace cavity {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("wall schedule: ") + what + " is not finite");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

WallSchedule WallSchedule::fixed(double L0, double hbar) { return linear(L0, 0.0, hbar); }

WallSchedule WallSchedule::linear(double L0, double Ldot0, double hbar) {
  require_finite(L0, "L0");
  require_finite(Ldot0, "Ldot0");
  if (L0 <= 0.0) throw DomainError("wall schedule: L0 must be positive, got " + fmt(L0));
  if (!(hbar > 0.0)) throw DomainError("wall schedule: hbar must be positive");
  WallSchedule s;
  s.kind = Ldot0 == 0.0 ? Kind::fixed : Kind::linear;
  s.L0 = L0;
  s.Ldot0 = Ldot0;
  s.a = Ldot0 * Ldot0;
  s.b = 2.0 * L0 * Ldot0;
  s.c = L0 * L0;
  s.hbar = hbar;
  return s;
}

WallSchedule WallSchedule::sqrt_law(double a, double b, double c, double hbar) {
  require_finite(a, "a");
  require_finite(b, "b");
  require_finite(c, "c");
  if (c <= 0.0) throw DomainError("wall schedule: c = L0^2 must be positive, got " + fmt(c));
  if (!(hbar > 0.0)) throw DomainError("wall schedule: hbar must be positive");
  WallSchedule s;
  s.kind = Kind::sqrt_law;
  s.a = a;
  s.b = b;
  s.c = c;
  s.L0 = std::sqrt(c);
  s.Ldot0 = b / (2.0 * s.L0);
  s.hbar = hbar;
  return s;
}

WallSchedule WallSchedule::sqrt_law_from_initial(double L0, double Ldot0, double B2, double hbar) {
  if (L0 <= 0.0) throw DomainError("wall schedule: L0 must be positive, got " + fmt(L0));
  const double c = L0 * L0, b = 2.0 * L0 * Ldot0;
  return sqrt_law((b * b - B2) / (4.0 * c), b, c, hbar);
}

double WallSchedule::B2() const {
  const double bb = b * b, ac4 = 4.0 * a * c;
  // rounding residue of a degenerate law is not a field
  if (std::abs(bb - ac4) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(bb, std::abs(ac4))) return 0.0;
  return bb - ac4;
}

double zero_crossing_time(const WallSchedule& s) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // smallest positive root of a t^2 + b t + c (c > 0)
  if (s.a == 0.0) return s.b < 0.0 ? -s.c / s.b : inf;
  const double disc = s.b * s.b - 4.0 * s.a * s.c;
  if (disc < 0.0) return inf;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (s.b + std::copysign(sq, s.b));
  double r1 = q / s.a, r2 = s.c / q;
  if (q == 0.0) r1 = r2 = 0.0;
  double best = inf;
  for (double r : {r1, r2})
    if (r > 0.0 && r < best) best = r;
  return best;
}

LengthState eval_length(const WallSchedule& s, double t) {
  if (!std::isfinite(t)) throw DomainError("eval_length: t is not finite");
  if (s.kind != WallSchedule::Kind::sqrt_law) {
    const double L = s.L0 + s.Ldot0 * t;
    if (L <= 0.0)
      throw DomainError("eval_length: L(t) <= 0 at t = " + fmt(t) + ", wall reaches zero at t = " +
                        fmt(-s.L0 / s.Ldot0));
    return {L, s.Ldot0, 0.0};
  }
  const double Q = (s.a * t + s.b) * t + s.c;
  if (Q <= 0.0)
    throw DomainError("eval_length: L(t) <= 0 at t = " + fmt(t) + ", wall reaches zero at t = " +
                      fmt(zero_crossing_time(s)));
  const double L = std::sqrt(Q);
  const double Ldot = (2.0 * s.a * t + s.b) / (2.0 * L);
  return {L, Ldot, (s.a - Ldot * Ldot) / L};
}

double scaled_time_quadrature(const WallSchedule& s, double t0, double t1, double abs_tol) {
  auto f = [&s](double t) {
    const double L = eval_length(s, t).L;
    return 1.0 / (L * L);
  };
  return integrate(f, t0, t1, abs_tol).value;
}

double scaled_time(const WallSchedule& s, double t) {
  if (!std::isfinite(t)) throw DomainError("scaled_time: t is not finite");
  const double tz = zero_crossing_time(s);
  if (t < 0.0 ? false : t >= tz)
    throw DomainError("scaled_time: L(t) vanishes inside [0, t]; zero crossing at t = " + fmt(tz));
  eval_length(s, t);  // validates t < 0 side as well
  if (s.kind != WallSchedule::Kind::sqrt_law) return t / (s.L0 * (s.L0 + s.Ldot0 * t));

  // integral of dt/(a t^2 + b t + c) = (2/sqrt(D)) atan(sqrt(D) r), r = t/(2c + b t), D = 4ac - b^2
  const double den = 2.0 * s.c + s.b * t;
  if (den <= 0.0) return scaled_time_quadrature(s, 0.0, t);
  const double r = t / den;
  const double D = 4.0 * s.a * s.c - s.b * s.b;
  const double x = D * r * r;
  if (std::abs(x) < 1e-4) {
    // atan(z)/z and atanh(z)/z as series in x = z^2 (sign of D handled by x)
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < 12; ++k) {
      sum += term / (2 * k + 1);
      term *= -x;
    }
    return 2.0 * r * sum;
  }
  if (D > 0.0) {
    const double sq = std::sqrt(D);
    return 2.0 / sq * std::atan(sq * r);
  }
  const double sq = std::sqrt(-D);
  return 2.0 / sq * std::atanh(sq * r);
}

}  // namespace cavity
