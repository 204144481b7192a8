#include "spinpcd/exact_ref.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace spinpcd {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: integer overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: integer overflow");
  return r;
}

std::int64_t checked_pow(std::int64_t base, unsigned e) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return g > 1 ? Rational{num / g, den / g} : Rational{num, den};
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den, b.den);
  const std::int64_t lhs = checked_mul(a.num, b.den / g);
  const std::int64_t rhs = checked_mul(b.num, a.den / g);
  return Rational::make(checked_add(lhs, rhs), checked_mul(a.den / g, b.den));
}

Rational operator*(const Rational& a, const Rational& b) {
  const Rational x = Rational::make(a.num, b.den);
  const Rational y = Rational::make(b.num, a.den);
  return Rational::make(checked_mul(x.num, y.num), checked_mul(x.den, y.den));
}

// ---------------------------------------------------------------------------

double thermal_sz(HalfInteger s, double beta, double bz) {
  const auto ops = spin_matrices<double>(s, Vec3<double>(0.0, 0.0, bz));
  return thermal_expectation<double>(ops.sz, ops.hamiltonian, beta);
}

Rational wigner_radial_moment(HalfInteger s, unsigned k) {
  if (k == 0) return Rational{1, 1};
  // (2(2k+1)/(2s+1)) sum_m m^{2k}, m = s, s-1, ... > 0. Work in units of
  // m' = 2m so every term is an integer, then divide by 4^k.
  std::int64_t sum = 0;
  for (int twice_m = s.twice(); twice_m > 0; twice_m -= 2)
    sum = checked_add(sum, checked_pow(twice_m, 2 * k));
  const Rational moment_sum = Rational::make(sum, checked_pow(4, k));
  return Rational::make(2 * (2 * std::int64_t(k) + 1), s.dimension()) * moment_sum;
}

double smeared_wigner_radial(double S, HalfInteger s, unsigned L) {
  if (L < 1) throw std::invalid_argument("smeared_wigner_radial: L must be >= 1");
  if (S < 0.0) throw std::invalid_argument("smeared_wigner_radial: S must be >= 0");
  const double sp1 = s.value() + 1.0;
  const double a = 3.0 * double(L) / (2.0 * sp1);
  const double prefactor = 4.0 * std::numbers::pi / double(s.dimension()) * std::pow(a / std::numbers::pi, 1.5);
  // 4 pi S^2 (1 - m/S) = 4 pi S (S - m) keeps the S -> 0 limit finite.
  double sum = 0.0;
  for (int i = 0; i <= s.twice(); ++i) {
    const double m = 0.5 * double(s.twice() - 2 * i);
    sum += S * (S - m) * std::exp(-a * (S - m) * (S - m));
  }
  return prefactor * sum;
}

double smeared_radial_peak(HalfInteger s, unsigned L, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("smeared_radial_peak: need lo < hi");
  constexpr int kGrid = 2000;
  const double h = (hi - lo) / kGrid;
  int best = 0;
  double best_val = smeared_wigner_radial(lo, s, L);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = smeared_wigner_radial(lo + h * i, s, L);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement inside the bracketing grid cells.
  double a = lo + h * std::max(0, best - 1);
  double b = lo + h * std::min(kGrid, best + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (smeared_wigner_radial(c, s, L) > smeared_wigner_radial(d, s, L))
      b = d;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

std::vector<double> smeared_radial_zeros(HalfInteger s, unsigned L, double lo, double hi, unsigned steps) {
  if (!(lo < hi) || steps < 1) throw std::invalid_argument("smeared_radial_zeros: bad grid");
  std::vector<double> zeros;
  auto f = [&](double x) { return smeared_wigner_radial(x, s, L); };
  const double h = (hi - lo) / steps;
  double x0 = lo, f0 = f(lo);
  for (unsigned i = 1; i <= steps; ++i) {
    const double x1 = lo + h * i, f1 = f(x1);
    if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      double a = x0, b = x1, fa = f0;
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      zeros.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return zeros;
}

double maxwell_radial(double S, unsigned L) {
  const double a = 1.5 * double(L);
  return 4.0 * std::numbers::pi * S * S * std::pow(a / std::numbers::pi, 1.5) * std::exp(-a * S * S);
}

namespace {

// 2^{L-1} (L-2)! in long double.
long double flight_norm(unsigned L) {
  long double v = std::ldexp(1.0L, int(L) - 1);
  for (unsigned i = 2; i + 2 <= L; ++i) v *= (long double)i;
  return v;
}

long double binomial(unsigned n, unsigned k) {
  long double r = 1.0L;
  for (unsigned i = 1; i <= k; ++i) r = r * (long double)(n - k + i) / (long double)i;
  return r;
}

}  // namespace

double iid_centroid_radial(double S, unsigned L) {
  if (L < 2) throw std::invalid_argument("iid_centroid_radial: density needs L >= 2");
  if (!(S > 0.0) || !(S < 1.0)) return 0.0;
  // Rayleigh-Treloar random-flight density of R = L S, times dR/dS = L.
  const long double R = (long double)L * S;
  long double sum = 0.0L;
  for (unsigned j = 0; (long double)L - R - 2.0L * j > 0.0L; ++j) {
    const long double term = binomial(L, j) * std::pow((long double)L - R - 2.0L * j, (long double)(L - 2));
    sum += (j % 2 == 0) ? term : -term;
  }
  return double((long double)L * R * sum / flight_norm(L));
}

double iid_centroid_radial_cdf(double S, unsigned L) {
  if (L < 1) throw std::invalid_argument("iid_centroid_radial_cdf: L must be >= 1");
  if (!(S > 0.0)) return 0.0;
  if (!(S < 1.0)) return 1.0;
  if (L == 1) return 0.0;
  // Integrate R (c - R)^n from 0 to min(x, c) termwise, c = L - 2j, n = L - 2.
  const long double x = (long double)L * S;
  const long double n = (long double)(L - 2);
  auto primitive = [n](long double c, long double u) {  // u = c - R
    return c * std::pow(u, n + 1) / (n + 1) - std::pow(u, n + 2) / (n + 2);
  };
  long double sum = 0.0L;
  for (unsigned j = 0; 2 * j < L; ++j) {
    const long double c = (long double)L - 2.0L * j;
    const long double upper = std::min(x, c);
    const long double term = binomial(L, j) * (primitive(c, c) - primitive(c, c - upper));
    sum += (j % 2 == 0) ? term : -term;
  }
  return std::clamp(double(sum / flight_norm(L)), 0.0, 1.0);
}

std::vector<double> zero_locations(HalfInteger s, ZeroLadder kind) {
  if (s.twice() < 1) throw std::invalid_argument("zero_locations: requires s >= 1/2");
  std::vector<double> out;
  const int twice = s.twice();
  if (kind == ZeroLadder::exact) {
    // m / (s+1) for m = s, s-1, ... > 0, i.e. (2m) / (2s+2).
    for (int twice_m = twice; twice_m > 0; twice_m -= 2) out.push_back(double(twice_m) / double(twice + 2));
  } else {
    // (4s - 1 - 4j) / (4s) while positive, i.e. (2 twice - 1 - 4j) / (2 twice).
    for (int num = 2 * twice - 1; num > 0; num -= 4) out.push_back(double(num) / double(2 * twice));
  }
  return out;
}

LadderComparison compare_zero_ladders(HalfInteger s) {
  const auto exact = zero_locations(s, ZeroLadder::exact);
  const auto heuristic = zero_locations(s, ZeroLadder::heuristic);
  LadderComparison c;
  c.exact_count = exact.size();
  c.heuristic_count = heuristic.size();
  const std::size_t n = std::min(exact.size(), heuristic.size());
  for (std::size_t i = 0; i < n; ++i) c.max_gap = std::max(c.max_gap, std::abs(exact[i] - heuristic[i]));
  if (exact.size() > 1) c.exact_spacing = exact[0] - exact[1];
  if (heuristic.size() > 1) c.heuristic_spacing = heuristic[0] - heuristic[1];
  return c;
}

}  // namespace spinpcd
