#pragma once

#include <vector>

#include "cavity/quadrature.hpp"
#include "cavity/types.hpp"

namespace cavity {

// Confluent hypergeometric M(a, b, z) by its Taylor series. Requires b not a
// non-positive integer and |z| <= 10.
cplx kummer_m(cplx a, cplx b, cplx z);

// Re M(3/4 + iK/(hbar B), 3/2, i hbar B / 2), the eigencondition,
// evaluated stably as cos(hbar B / 4) u_K(1).
double eigencondition(double K, double hbarB);

// Eigenfunctions of u'' + (2K + (hbar B)^2 y^2 / 4) u = 0 on [0, 1] with
// u(0) = u(1) = 0. For (hbar B)^2 > 0 the regular solution is
// y exp(-i hbar B y^2/4) M(3/4 + iK/(hbar B), 3/2, i hbar B y^2 / 2), which is real.
// Negative (hbar B)^2 uses the analytic continuation with a real exponent.
class KummerBasis {
 public:
  // hbar_b2 = (hbar B)^2, any sign
  KummerBasis(double hbar_b2, int nMax);
  static KummerBasis from_hbarB(double hbarB, int nMax) { return KummerBasis(hbarB * hbarB, nMax); }

  int n_max() const { return nMax_; }
  double hbar_b2() const { return hb2_; }
  double omega2() const { return 0.25 * hb2_; }
  double root(int n) const { return K_.at(n - 1); }
  const std::vector<double>& roots() const { return K_; }
  double norm_constant(int n) const { return A_.at(n - 1); }

  double operator()(int n, double y) const;
  double derivative(int n, double y) const;

  // composite Gauss-Legendre grid on [0, 1] with cached basis samples
  const QuadratureRule& grid() const { return grid_; }
  double value_at_node(int n, std::size_t k) const { return U_[(n - 1) * grid_.nodes.size() + k]; }
  double derivative_at_node(int n, std::size_t k) const { return dU_[(n - 1) * grid_.nodes.size() + k]; }

 private:
  struct Track {
    double y0;
    std::vector<double> ys, u, du;  // checkpoints y0 and panel boundaries above it
  };
  void eval(int n, double y, double& u, double& du) const;

  double hb2_;
  int nMax_;
  int panels_;
  std::vector<double> K_, A_;
  std::vector<Track> tracks_;
  QuadratureRule grid_;
  std::vector<double> U_, dU_;
};

// Ascending roots K_1..K_nMax, each bracketed within +-30% of n^2 pi^2 / 2
// (intersected with the interlacing window) and polished to 1e-12 relative.
std::vector<double> find_roots(double hbarB, int nMax);
std::vector<double> find_roots_b2(double hbar_b2, int nMax);

inline double basis_function(int n, double y, const KummerBasis& basis) { return basis(n, y); }

}  // namespace cavity
