#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spinpcd/su2_model.hpp"

namespace spinpcd {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest Hilbert-space dimension the dense oracles accept.
inline constexpr int kMaxOracleDimension = 64;

/// Exact reduced fraction with a positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double to_double() const { return double(num) / double(den); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
};

/// Standard angular-momentum matrices in the |s, m> basis ordered
/// m = s, s-1, ..., -s, plus H = -B . S.
template <typename Scalar = double>
struct SpinMatrixSet {
  HalfInteger s;
  CMatrix<Scalar> sx, sy, sz, hamiltonian;

  int dimension() const { return s.dimension(); }

  CMatrix<Scalar> dot(const Vec3<Scalar>& v) const { return v.x() * sx + v.y() * sy + v.z() * sz; }
};

template <typename Scalar = double>
SpinMatrixSet<Scalar> spin_matrices(HalfInteger s, const Vec3<double>& field = Vec3<double>::Zero()) {
  using C = std::complex<Scalar>;
  const int d = s.dimension();
  if (d > kMaxOracleDimension) throw std::invalid_argument("spin_matrices: dimension exceeds oracle limit");
  const Scalar sv = Scalar(s.value());
  CMatrix<Scalar> raise = CMatrix<Scalar>::Zero(d, d);
  CMatrix<Scalar> sz = CMatrix<Scalar>::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const Scalar m = sv - Scalar(i);
    sz(i, i) = C(m);
    // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits at index i-1.
    if (i > 0) raise(i - 1, i) = C(std::sqrt(sv * (sv + 1) - m * (m + 1)));
  }
  const CMatrix<Scalar> lower = raise.adjoint();
  SpinMatrixSet<Scalar> out;
  out.s = s;
  out.sx = (raise + lower) * C(0.5);
  out.sy = (raise - lower) * C(0, -0.5);
  out.sz = sz;
  out.hamiltonian = -out.dot(field.cast<Scalar>());
  return out;
}

/// M^k by repeated squaring.
template <typename Derived>
typename Derived::PlainObject matrix_power(const Eigen::MatrixBase<Derived>& m, unsigned k) {
  using Plain = typename Derived::PlainObject;
  Plain result = Plain::Identity(m.rows(), m.cols());
  Plain base = m;
  while (k != 0) {
    if (k & 1u) result = (result * base).eval();
    k >>= 1;
    if (k != 0) base = (base * base).eval();
  }
  return result;
}

/// Tr[(1 - (beta H + i lambda . S)/L)^L] / Tr[(1 - beta H/L)^L], the finite-L
/// Trotter characteristic function with H = -B . S.
template <typename Scalar = double>
std::complex<Scalar> trotter_chi(HalfInteger s, double beta, const Vec3<double>& field,
                                 const Vec3<double>& lambda, unsigned L) {
  using C = std::complex<Scalar>;
  if (L < 1) throw std::invalid_argument("trotter_chi: L must be >= 1");
  const auto ops = spin_matrices<Scalar>(s, field);
  const int d = ops.dimension();
  const CMatrix<Scalar> id = CMatrix<Scalar>::Identity(d, d);
  const Scalar inv_l = Scalar(1) / Scalar(L);
  const CMatrix<Scalar> thermal = id - ops.hamiltonian * C(Scalar(beta) * inv_l);
  const CMatrix<Scalar> probed = thermal - ops.dot(lambda.cast<Scalar>()) * C(0, inv_l);
  return matrix_power(probed, L).trace() / matrix_power(thermal, L).trace();
}

/// Tr(A e^{-beta H}) / Tr(e^{-beta H}) for Hermitian H.
template <typename Scalar = double>
Scalar thermal_expectation(const CMatrix<Scalar>& op, const CMatrix<Scalar>& hamiltonian, double beta) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> eig(hamiltonian);
  const auto& energies = eig.eigenvalues();
  const Scalar e0 = energies.minCoeff();
  Scalar num = 0, den = 0;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    const auto v = eig.eigenvectors().col(i);
    const Scalar boltzmann = std::exp(-Scalar(beta) * (energies(i) - e0));
    num += boltzmann * (v.adjoint() * op * v)(0, 0).real();
    den += boltzmann;
  }
  return num / den;
}

/// <S_z> for a free spin in the field B z-hat: Tr(S_z e^{beta B S_z}) / Tr(e^{beta B S_z}).
double thermal_sz(HalfInteger s, double beta, double bz);

/// Integral of S^{2k} against the exact radial Wigner distribution.
Rational wigner_radial_moment(HalfInteger s, unsigned k);

/// Radial density 4 pi S^2 W_L(S) of the Gaussian-smeared Wigner function
/// (variance (s+1)/(3L) per component). Zero at S = 0.
double smeared_wigner_radial(double S, HalfInteger s, unsigned L);

/// Location of the maximum of smeared_wigner_radial on [lo, hi].
double smeared_radial_peak(HalfInteger s, unsigned L, double lo, double hi);

/// Sign changes of smeared_wigner_radial on [lo, hi], located by bisection
/// on a grid of `steps` intervals.
std::vector<double> smeared_radial_zeros(HalfInteger s, unsigned L, double lo, double hi, unsigned steps = 4000);

/// 4 pi S^2 (3L / 2pi)^{3/2} exp(-3 L S^2 / 2): Gaussian (central-limit) form
/// of the s = 0 centroid distribution.
double maxwell_radial(double S, unsigned L);

/// Exact density of |n-bar| for L >= 2 i.i.d. uniform unit vectors
/// (random flight with unit steps). Support is [0, 1].
double iid_centroid_radial(double S, unsigned L);

/// Cumulative distribution of |n-bar| for L >= 1 i.i.d. uniform unit vectors.
double iid_centroid_radial_cdf(double S, unsigned L);

enum class ZeroLadder { exact, heuristic };

/// cos(theta) positions of the positive-gradient zeros of the radial Wigner
/// distribution, largest first. Requires 2s >= 1.
std::vector<double> zero_locations(HalfInteger s, ZeroLadder kind);

struct LadderComparison {
  std::size_t exact_count = 0;
  std::size_t heuristic_count = 0;
  /// max_i |exact_i - heuristic_i| over the common prefix.
  double max_gap = 0.0;
  double exact_spacing = 0.0;
  double heuristic_spacing = 0.0;
};

LadderComparison compare_zero_ladders(HalfInteger s);

}  // namespace spinpcd
