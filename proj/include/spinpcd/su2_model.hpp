#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "spinpcd/geometry.hpp"

namespace spinpcd {

/// Spin quantum number s, stored exactly as 2s.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) {
    if (twice < 0) throw std::invalid_argument("HalfInteger: 2s must be non-negative");
    HalfInteger h;
    h.twice_ = twice;
    return h;
  }

  /// Accepts "3/2", "1.5", "2". Anything that is not a non-negative multiple
  /// of 1/2 is rejected.
  static HalfInteger parse(const std::string& text);

  constexpr int twice() const noexcept { return twice_; }
  constexpr double value() const noexcept { return 0.5 * twice_; }
  constexpr int dimension() const noexcept { return twice_ + 1; }
  constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

  std::string to_string() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

  constexpr auto operator<=>(const HalfInteger&) const = default;

 private:
  int twice_ = 0;
};

/// Free spin in a Zeeman field, H = -B . S, at inverse temperature beta.
struct ModelConfig {
  HalfInteger s;
  double beta = 0.0;
  Vec3<double> field = Vec3<double>::Zero();

  void validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("ModelConfig: beta must be finite and >= 0");
    if (!field.allFinite()) throw std::invalid_argument("ModelConfig: field must be finite");
  }
};

/// exp(-S_L) for a closed path.
struct LoopAmplitude {
  std::complex<double> value{1.0, 0.0};

  double magnitude() const { return std::abs(value); }
  /// Principal value in (-pi, pi]; zero amplitude reports phase 0.
  double berry_phase() const;
  /// Re S_L = -ln|value| (infinite for a vanishing amplitude).
  double real_action() const { return -std::log(magnitude()); }
};

// ---------------------------------------------------------------------------
// Diagonal representatives (P-symbols) and matrix elements (Q-symbols)

/// How the s = 0 spin symbol is formed. For s = 0 the spin operator vanishes,
/// so its P-symbol may be taken as 0 (`operator_exact`), while the sampling
/// kernel of the path-centroid distribution keeps (s+1) n = n (`lieb`).
enum class SymbolConvention { lieb, operator_exact };

template <typename Scalar>
Vec3<Scalar> diagonal_symbol_spin(const UnitVec3<Scalar>& n, HalfInteger s,
                                  SymbolConvention convention = SymbolConvention::operator_exact) {
  if (s.twice() == 0 && convention == SymbolConvention::operator_exact) return Vec3<Scalar>::Zero();
  return Scalar(s.value() + 1.0) * n.vec();
}

template <typename Scalar>
Vec3<Scalar> matrix_element_spin(const UnitVec3<Scalar>& n, HalfInteger s) {
  return Scalar(s.value()) * n.vec();
}

/// P-symbol of (u . S)^2 for a unit axis u: (s+1)(s+3/2)(u.n)^2 - (s+1)/2.
template <typename Scalar>
Scalar diagonal_symbol_quadratic(const UnitVec3<Scalar>& n, HalfInteger s, const Vec3<Scalar>& axis) {
  const Scalar sp1 = Scalar(s.value() + 1.0);
  const Scalar c = axis.dot(n.vec());
  return sp1 * Scalar(s.value() + 1.5) * c * c - sp1 / Scalar(2);
}

/// P-symbol of S_z^2.
template <typename Scalar>
Scalar diagonal_symbol_sz2(const UnitVec3<Scalar>& n, HalfInteger s) {
  return diagonal_symbol_quadratic(n, s, Vec3<Scalar>::UnitZ().eval());
}

/// P-symbol of H = -B . S, i.e. -(s+1) B . n.
template <typename Scalar>
Scalar hamiltonian_symbol(const UnitVec3<Scalar>& n, const ModelConfig& cfg,
                          SymbolConvention convention = SymbolConvention::lieb) {
  return -cfg.field.cast<Scalar>().dot(diagonal_symbol_spin(n, cfg.s, convention));
}

// ---------------------------------------------------------------------------
// Path weights

/// z^k by repeated squaring; no branch cut.
template <typename Scalar>
std::complex<Scalar> integer_power(std::complex<Scalar> z, unsigned k) {
  std::complex<Scalar> result(1);
  while (k != 0) {
    if (k & 1u) result *= z;
    k >>= 1;
    if (k != 0) z *= z;
  }
  return result;
}

enum class WeightMode {
  exponentiated,  // overlap^{2s} exp(-beta mean P_H)
  product,        // overlap^{2s} prod (1 - (beta P_H + i lambda.P) / L)
};

/// Bare loop amplitude <n_1|n_2>...<n_L|n_1> for spin s.
template <typename Scalar>
std::complex<Scalar> loop_overlap(std::span<const UnitVec3<Scalar>> path, HalfInteger s) {
  if (s.twice() == 0) return std::complex<Scalar>(1);
  return integer_power(loop_overlap_half(path), static_cast<unsigned>(s.twice()));
}

template <typename Scalar>
LoopAmplitude loop_amplitude(std::span<const UnitVec3<Scalar>> path, HalfInteger s) {
  const auto c = loop_overlap(path, s);
  return LoopAmplitude{std::complex<double>(double(c.real()), double(c.imag()))};
}

/// Product of the per-vertex Trotter factors prod_l (1 - (beta P_H(n_l) + i lambda . P(n_l)) / L).
template <typename Scalar>
std::complex<Scalar> trotter_factor(std::span<const UnitVec3<Scalar>> path, const ModelConfig& cfg,
                                    const Vec3<Scalar>& probe) {
  using C = std::complex<Scalar>;
  const Scalar L = Scalar(path.size());
  const Scalar beta = Scalar(cfg.beta);
  C product(1);
  for (const auto& n : path) {
    const Scalar ph = hamiltonian_symbol(n, cfg);
    const Scalar lp = probe.dot(diagonal_symbol_spin(n, cfg.s, SymbolConvention::lieb));
    product *= C(Scalar(1) - beta * ph / L, -lp / L);
  }
  return product;
}

template <typename Scalar>
std::complex<Scalar> path_weight(std::span<const UnitVec3<Scalar>> path, const ModelConfig& cfg,
                                 WeightMode mode = WeightMode::exponentiated,
                                 std::optional<Vec3<Scalar>> probe = std::nullopt) {
  const auto bare = loop_overlap(path, cfg.s);
  if (mode == WeightMode::product)
    return bare * trotter_factor(path, cfg, probe.value_or(Vec3<Scalar>::Zero()));
  if (cfg.beta == 0.0) return bare;
  Scalar mean_ph = 0;
  for (const auto& n : path) mean_ph += hamiltonian_symbol(n, cfg);
  mean_ph /= Scalar(path.size());
  return bare * std::exp(-Scalar(cfg.beta) * mean_ph);
}

template <typename Scalar>
std::complex<Scalar> path_weight(const PolygonPath<Scalar>& path, const ModelConfig& cfg,
                                 WeightMode mode = WeightMode::exponentiated,
                                 std::optional<Vec3<Scalar>> probe = std::nullopt) {
  return path_weight(path.vertices(), cfg, mode, probe);
}

// ---------------------------------------------------------------------------
// Centroid observables

/// Path centroid of the spin P-symbol, (s+1) n-bar, using the sampling-kernel
/// convention (s = 0 gives n-bar).
template <typename Scalar>
Vec3<Scalar> spin_centroid(std::span<const UnitVec3<Scalar>> path, HalfInteger s) {
  return Scalar(s.value() + 1.0) * centroid(path);
}

/// (1/L) sum_l (P_{mu mu} - P_mu^2) for mu = x, y, z. Its weighted average
/// is the cumulant matrix diagonal, -(s+1)/3 for a free spin.
template <typename Scalar>
Vec3<Scalar> cumulant_integrand(std::span<const UnitVec3<Scalar>> path, HalfInteger s) {
  Vec3<Scalar> acc = Vec3<Scalar>::Zero();
  const Scalar sp1 = Scalar(s.value() + 1.0);
  for (const auto& n : path) {
    for (int mu = 0; mu < 3; ++mu) {
      const Scalar p = sp1 * n.vec()(mu);
      acc(mu) += diagonal_symbol_quadratic(n, s, Vec3<Scalar>::Unit(mu).eval()) - p * p;
    }
  }
  return acc / Scalar(path.size());
}

}  // namespace spinpcd
