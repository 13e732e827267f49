#include "cavity/kummer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cavity/errors.hpp"

namespace cavity {

using std::numbers::pi;

cplx kummer_m(cplx a, cplx b, cplx z) {
  if (b.imag() == 0.0 && b.real() <= 0.0 && std::floor(b.real()) == b.real())
    throw DomainError("kummer_m: b must not be a non-positive integer");
  if (std::abs(z) > 10.0) throw DomainError("kummer_m: |z| must not exceed 10");
  cplx term = 1.0, sum = 1.0;
  int quiet = 0;
  for (int k = 0; k < 10000; ++k) {
    term *= (a + double(k)) / ((b + double(k)) * double(k + 1)) * z;
    sum += term;
    if (term == 0.0) return sum;
    // stop once the terms are shrinking and negligible twice in a row
    const bool shrinking = std::abs((a + double(k + 1)) * z) < std::abs((b + double(k + 1)) * double(k + 2));
    if (shrinking && std::abs(term) <= 1e-16 * std::abs(sum)) {
      if (++quiet == 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw NumericError("kummer_m: series did not converge within 10^4 terms");
}

namespace {

struct Ode {
  double twoK;
  double w2;  // (hbar B)^2 / 4
  cplx lambda;
  cplx a;
  double y0;
  double k;  // sqrt(2K) when w2 == 0

  Ode(double K, double hb2) : twoK(2.0 * K), w2(0.25 * hb2) {
    const double scale = std::sqrt(twoK + std::abs(w2) + 1.0);
    y0 = std::min(0.5, 1.0 / scale);
    k = std::sqrt(std::max(twoK, 0.0));
    if (hb2 > 0.0) {
      lambda = cplx(0.0, 0.5 * std::sqrt(hb2));
    } else if (hb2 < 0.0) {
      lambda = cplx(-0.5 * std::sqrt(-hb2), 0.0);
    }
    if (hb2 != 0.0) a = 0.75 - K / (2.0 * lambda);
  }

  double step_limit() const { return 1.2 / std::sqrt(twoK + std::abs(w2) + 1e-300); }

  // regular solution with u(0) = 0, u'(0) = 1 for y <= y0
  void seed(double y, double& u, double& du) const {
    if (w2 == 0.0) {
      if (k == 0.0) {
        u = y;
        du = 1.0;
      } else {
        u = std::sin(k * y) / k;
        du = std::cos(k * y);
      }
      return;
    }
    const cplx z = lambda * y * y;
    const cplx e = std::exp(-0.5 * z);
    const cplx M = kummer_m(a, 1.5, z);
    const cplx Mp = a / 1.5 * kummer_m(a + 1.0, 2.5, z);
    u = (y * e * M).real();
    du = (e * (M * (1.0 - z) + 2.0 * z * Mp)).real();
  }

  // Taylor expansion of u'' = -(twoK + w2 y^2) u about y, advanced by h
  void advance(double y, double h, double& u, double& du) const {
    double a[128];
    a[0] = u;
    a[1] = du;
    const double c0 = twoK + w2 * y * y, c1 = 2.0 * w2 * y, c2 = w2;
    double su = a[0] + a[1] * h, sd = a[1];
    double hk = h;  // h^(k+1)
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 2 < 128; ++k) {
      double s = c0 * a[k];
      if (k >= 1) s += c1 * a[k - 1];
      if (k >= 2) s += c2 * a[k - 2];
      a[k + 2] = -s / ((k + 1.0) * (k + 2.0));
      const double dterm = (k + 2.0) * a[k + 2] * hk;
      hk *= h;
      const double uterm = a[k + 2] * hk;
      su += uterm;
      sd += dterm;
      // two consecutive terms: near a node one parity of the series vanishes
      const double size = std::abs(uterm) + std::abs(dterm * h);
      const double tol = 1e-18 * (std::abs(su) + std::abs(sd * h));
      if (k >= 4 && size <= tol && prev <= tol) break;
      prev = size;
    }
    u = su;
    du = sd;
  }

  // u(1) (and u'(1)) by continuation from the seed
  double shoot(double* du_end = nullptr) const {
    double u, du;
    seed(y0, u, du);
    const int steps = std::max(1, static_cast<int>(std::ceil((1.0 - y0) / step_limit())));
    const double h = (1.0 - y0) / steps;
    for (int s = 0; s < steps; ++s) advance(y0 + s * h, h, u, du);
    if (du_end) *du_end = du;
    return u;
  }
};

double boundary_value(double K, double hb2) { return Ode(K, hb2).shoot(); }

double refine_root(double lo, double hi, double flo, double fhi, double hb2) {
  // bisection to a tight bracket, then guarded secant
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    const double fm = boundary_value(mid, hb2);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double x = lo - flo * (hi - lo) / (fhi - flo);
  for (int it = 0; it < 60; ++it) {
    const double fx = boundary_value(x, hb2);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    const double next = lo - flo * (hi - lo) / (fhi - flo);
    if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 4e-16 * hi) return next;
    x = next;
  }
  return x;
}

}  // namespace

double eigencondition(double K, double hbarB) {
  return std::cos(0.25 * hbarB) * boundary_value(K, hbarB * hbarB);
}

std::vector<double> find_roots_b2(double hb2, int nMax) {
  if (nMax < 1) throw DomainError("find_roots: nMax must be >= 1");
  if (!std::isfinite(hb2)) throw DomainError("find_roots: (hbar B)^2 must be finite");
  std::vector<double> K(nMax);
  for (int n = 1; n <= nMax; ++n) {
    const double guess = n * n * pi * pi / 2.0;
    const double lo = std::max(0.7 * guess, (n - 0.5) * (n - 0.5) * pi * pi / 2.0);
    const double hi = std::min(1.3 * guess, (n + 0.5) * (n + 0.5) * pi * pi / 2.0);
    constexpr int scan = 24;
    double best = -1.0, bl = 0.0, bh = 0.0, fl = 0.0, fh = 0.0;
    double x0 = lo, f0 = boundary_value(lo, hb2);
    for (int i = 1; i <= scan; ++i) {
      const double x1 = lo + (hi - lo) * i / scan;
      const double f1 = boundary_value(x1, hb2);
      if ((f0 < 0.0) != (f1 < 0.0) || f0 == 0.0) {
        const double dist = std::abs(0.5 * (x0 + x1) - guess);
        if (best < 0.0 || dist < best) {
          best = dist;
          bl = x0;
          bh = x1;
          fl = f0;
          fh = f1;
        }
      }
      x0 = x1;
      f0 = f1;
    }
    if (best < 0.0)
      throw RootSearchError("find_roots: no bracket for K_" + std::to_string(n) + " within +-30% of " +
                            fmt_num(guess) + " at (hbar B)^2 = " + fmt_num(hb2));
    K[n - 1] = fl == 0.0 ? bl : refine_root(bl, bh, fl, fh, hb2);
    if (n > 1 && !(K[n - 1] > K[n - 2]))
      throw RootSearchError("find_roots: roots not strictly increasing at n = " + std::to_string(n));
  }
  return K;
}

std::vector<double> find_roots(double hbarB, int nMax) {
  if (!(hbarB > 0.0)) throw DomainError("find_roots: hbarB must be positive");
  return find_roots_b2(hbarB * hbarB, nMax);
}

KummerBasis::KummerBasis(double hbar_b2, int nMax) : hb2_(hbar_b2), nMax_(nMax) {
  K_ = find_roots_b2(hbar_b2, nMax);
  const double kmax = std::sqrt(2.0 * K_.back() + std::abs(omega2()) + 1.0);
  panels_ = std::max(8, static_cast<int>(std::ceil(kmax / 1.2)));
  grid_ = composite_gauss_legendre(0.0, 1.0, panels_, 24);

  tracks_.resize(nMax);
  A_.assign(nMax, 1.0);
  const std::size_t nodes = grid_.nodes.size();
  U_.resize(nodes * nMax);
  dU_.resize(nodes * nMax);
  for (int n = 1; n <= nMax; ++n) {
    const Ode ode(K_[n - 1], hb2_);
    Track& tr = tracks_[n - 1];
    tr.y0 = ode.y0;
    double u, du;
    ode.seed(ode.y0, u, du);
    tr.ys.push_back(ode.y0);
    tr.u.push_back(u);
    tr.du.push_back(du);
    const int first = static_cast<int>(std::floor(ode.y0 * panels_)) + 1;
    double y = ode.y0;
    for (int j = first; j <= panels_; ++j) {
      const double yn = double(j) / panels_;
      ode.advance(y, yn - y, u, du);
      y = yn;
      tr.ys.push_back(y);
      tr.u.push_back(u);
      tr.du.push_back(du);
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
      eval(n, grid_.nodes[k], u, du);
      U_[(n - 1) * nodes + k] = u;
      dU_[(n - 1) * nodes + k] = du;
      norm += grid_.weights[k] * u * u;
    }
    A_[n - 1] = 1.0 / std::sqrt(norm);
    for (std::size_t k = 0; k < nodes; ++k) {
      U_[(n - 1) * nodes + k] *= A_[n - 1];
      dU_[(n - 1) * nodes + k] *= A_[n - 1];
    }
  }
}

void KummerBasis::eval(int n, double y, double& u, double& du) const {
  const Track& tr = tracks_.at(n - 1);
  const Ode ode(K_[n - 1], hb2_);
  if (y <= tr.y0) {
    ode.seed(y, u, du);
  } else {
    auto it = std::upper_bound(tr.ys.begin(), tr.ys.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - tr.ys.begin()) - 1;
    u = tr.u[i];
    du = tr.du[i];
    if (y > tr.ys[i]) ode.advance(tr.ys[i], y - tr.ys[i], u, du);
  }
  u *= A_[n - 1];
  du *= A_[n - 1];
}

double KummerBasis::operator()(int n, double y) const {
  if (n < 1 || n > nMax_) throw DomainError("KummerBasis: index out of range");
  if (y < 0.0 || y > 1.0) throw DomainError("KummerBasis: y must lie in [0, 1]");
  double u, du;
  eval(n, y, u, du);
  return u;
}

double KummerBasis::derivative(int n, double y) const {
  if (n < 1 || n > nMax_) throw DomainError("KummerBasis: index out of range");
  if (y < 0.0 || y > 1.0) throw DomainError("KummerBasis: y must lie in [0, 1]");
  double u, du;
  eval(n, y, u, du);
  return du;
}

}  // namespace cavity
