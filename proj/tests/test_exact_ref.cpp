#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinpcd/exact_ref.hpp"

using namespace spinpcd;

namespace {

HalfInteger spin(int twice) { return HalfInteger::from_twice(twice); }

double trapezoid(auto f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double acc = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) acc += f(lo + h * i);
  return acc * h;
}

using C = std::complex<double>;

}  // namespace

TEST_CASE("spin matrices satisfy the algebra") {
  for (int twice = 0; twice <= 12; ++twice) {
    const auto ops = spin_matrices<double>(spin(twice));
    const double s = 0.5 * twice;
    const C i(0.0, 1.0);
    CHECK((ops.sx * ops.sy - ops.sy * ops.sx - i * ops.sz).norm() < 1e-12);
    CHECK((ops.sy * ops.sz - ops.sz * ops.sy - i * ops.sx).norm() < 1e-12);
    CHECK((ops.sz * ops.sx - ops.sx * ops.sz - i * ops.sy).norm() < 1e-12);
    CHECK(std::abs((ops.sz * ops.sz).trace().real() - s * (s + 1) * (2 * s + 1) / 3) < 1e-12);
    const CMatrix<double> casimir = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    CHECK((casimir - s * (s + 1) * CMatrix<double>::Identity(twice + 1, twice + 1)).norm() < 1e-11);
  }
  CHECK_THROWS_AS(spin_matrices<double>(spin(64)), std::invalid_argument);
}

TEST_CASE("matrix power by squaring") {
  CMatrix<double> m(2, 2);
  m << C(0.5, 0.1), C(0.2, 0), C(-0.3, 0.4), C(1.0, -0.2);
  CMatrix<double> direct = CMatrix<double>::Identity(2, 2);
  for (int k = 0; k < 13; ++k) direct = direct * m;
  CHECK((matrix_power(m, 13) - direct).norm() < 1e-13);
  CHECK((matrix_power(m, 0) - CMatrix<double>::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("trotter chi examples") {
  const Vec3<double> bz = Vec3<double>::UnitZ();
  CHECK(trotter_chi(spin(3), 1.0, bz, Vec3<double>::Zero(), 5) == C(1.0));
  CHECK(std::abs(trotter_chi(spin(1), 0.0, bz, Vec3<double>(0, 0, 1.7), 1) - 1.0) < 1e-15);
  for (double t : {0.5, 1.0, 2.0, 3.0})
    CHECK(std::abs(trotter_chi(spin(1), 0.0, bz, Vec3<double>(0, 0, t), 200000) - std::cos(t / 2)) < 1e-4);
  for (int twice = 1; twice <= 4; ++twice) {
    const double d = twice + 1;
    const double expect = std::sin(d * 0.5) / (d * std::sin(0.5));
    const Vec3<double> lam = Vec3<double>(1, 2, -2) / 3.0;
    CHECK(std::abs(trotter_chi(spin(twice), 0.0, bz, lam, 200000) - expect) < 1e-4);
  }
}

TEST_CASE("trotter chi symmetries") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int twice = 1; twice <= 3; ++twice) {
    for (unsigned L : {1u, 2u, 5u, 8u}) {
      const Vec3<double> lam(g(rng), g(rng), g(rng));
      const Vec3<double> field(g(rng), g(rng), g(rng));
      const C plus = trotter_chi(spin(twice), 0.7, field, lam, L);
      const C minus = trotter_chi(spin(twice), 0.7, field, Vec3<double>(-lam), L);
      CHECK(std::abs(std::conj(plus) - minus) < 1e-12);
      const C iso = trotter_chi(spin(twice), 0.0, field, lam, L);
      const Vec3<double> other = lam.norm() * Vec3<double>(g(rng), g(rng), g(rng)).normalized();
      CHECK(std::abs(trotter_chi(spin(twice), 0.0, field, other, L) - iso) < 1e-10);
    }
  }
}

TEST_CASE("thermal Sz") {
  CHECK(thermal_sz(spin(3), 0.0, 1.0) == doctest::Approx(0.0));
  CHECK(thermal_sz(spin(1), 1.0, 1.0) == doctest::Approx(0.5 * std::tanh(0.5)).epsilon(1e-14));
  CHECK(thermal_sz(spin(1), 1.0, 1.0) == doctest::Approx(0.231059).epsilon(1e-6));
  CHECK(thermal_sz(spin(4), 200.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  // Brillouin function for s = 1.
  const double x = 0.8;
  CHECK(thermal_sz(spin(2), x, 1.0) == doctest::Approx(2 * std::sinh(x) / (1 + 2 * std::cosh(x))).epsilon(1e-13));
}

TEST_CASE("radial Wigner moments") {
  for (int twice = 0; twice <= 12; ++twice) CHECK(wigner_radial_moment(spin(twice), 0) == Rational{1, 1});
  CHECK(wigner_radial_moment(spin(1), 1) == Rational{3, 4});
  CHECK(wigner_radial_moment(spin(3), 1) == Rational{15, 4});
  for (int twice = 0; twice <= 12; ++twice) {
    const auto ops = spin_matrices<double>(spin(twice));
    const CMatrix<double> s2 = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    const double oracle = s2.trace().real() / (twice + 1);
    CHECK(wigner_radial_moment(spin(twice), 1).to_double() == doctest::Approx(oracle).epsilon(1e-14));
  }
  // s = 1/2: (2 * 5 / 2) * (1/2)^4.
  CHECK(wigner_radial_moment(spin(1), 2) == Rational{5, 16});
}

TEST_CASE("rational arithmetic") {
  CHECK(Rational::make(6, -4) == Rational{-3, 2});
  CHECK(Rational::make(1, 3) + Rational::make(1, 6) == Rational{1, 2});
  CHECK(Rational::make(2, 3) * Rational::make(9, 4) == Rational{3, 2});
  CHECK_THROWS_AS(Rational::make(1, 0), std::invalid_argument);
}

TEST_CASE("smeared radial formula") {
  CHECK(smeared_wigner_radial(0.0, spin(1), 5) == 0.0);
  for (unsigned L : {1u, 2u, 5u, 15u})
    for (double S : {0.01, 0.3, 0.9}) CHECK(smeared_wigner_radial(S, spin(0), L) == doctest::Approx(maxwell_radial(S, L)));
  for (int twice = 0; twice <= 3; ++twice) {
    const double s = 0.5 * twice;
    for (unsigned L : {5u, 10u, 15u}) {
      auto f = [&](double S) { return smeared_wigner_radial(S, spin(twice), L); };
      auto f2 = [&](double S) { return S * S * smeared_wigner_radial(S, spin(twice), L); };
      CHECK(std::abs(trapezoid(f, 0.0, s + 4.0, 20000) - 1.0) < 1e-6);
      CHECK(trapezoid(f2, 0.0, s + 4.0, 20000) == doctest::Approx(s * (s + 1) + (s + 1) / L).epsilon(1e-6));
    }
  }
  // Correction scales as (s+1)/L: compare L = 20 and L = 40.
  for (int twice : {1, 2, 3}) {
    const double s = 0.5 * twice;
    auto m2 = [&](unsigned L) {
      return trapezoid([&](double S) { return S * S * smeared_wigner_radial(S, spin(twice), L); }, 0.0, s + 3.0, 20000);
    };
    const double diff = m2(20) - m2(40);
    CHECK(std::abs(diff - ((s + 1) / 20 - (s + 1) / 40)) < 0.1 * (s + 1) / 40);
  }
  CHECK(std::abs(smeared_wigner_radial(0.5, spin(2), 400)) < 1e-12);
  CHECK_THROWS_AS(smeared_wigner_radial(-0.1, spin(1), 5), std::invalid_argument);
}

TEST_CASE("smeared radial zeros") {
  const auto z15 = smeared_radial_zeros(spin(1), 15, 0.05, 2.0);
  REQUIRE(z15.size() == 1);
  CHECK(std::abs(z15[0] - 0.5) < 0.03);
  const auto z1 = smeared_radial_zeros(spin(2), 15, 0.05, 3.0);
  REQUIRE(!z1.empty());
  CHECK(std::abs(z1.back() - 1.0) < 1e-3);
  const double peak = smeared_radial_peak(spin(1), 9, 0.3, 2.0);
  CHECK(smeared_wigner_radial(peak, spin(1), 9) >= smeared_wigner_radial(peak + 1e-3, spin(1), 9));
  CHECK(smeared_wigner_radial(peak, spin(1), 9) >= smeared_wigner_radial(peak - 1e-3, spin(1), 9));
}

TEST_CASE("random flight law") {
  // The L = 2 density jumps to zero at S = 1; stop just short of the edge.
  const double top = 1.0 - 1e-12;
  for (unsigned L : {2u, 3u, 5u, 15u}) {
    CHECK(trapezoid([&](double S) { return iid_centroid_radial(S, L); }, 0.0, top, 20000) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(iid_centroid_radial_cdf(0.0, L) == 0.0);
    CHECK(iid_centroid_radial_cdf(1.0, L) == doctest::Approx(1.0));
    const double a = 0.31, b = 0.47;
    const double mass = trapezoid([&](double S) { return iid_centroid_radial(S, L); }, a, b, 4000);
    CHECK(iid_centroid_radial_cdf(b, L) - iid_centroid_radial_cdf(a, L) == doctest::Approx(mass).epsilon(1e-6));
    // E|n-bar|^2 = 1/L.
    CHECK(trapezoid([&](double S) { return S * S * iid_centroid_radial(S, L); }, 0.0, top, 20000) ==
          doctest::Approx(1.0 / L).epsilon(1e-6));
  }
  // L = 2: |n1 + n2| / 2 has density 2S on [0, 1].
  CHECK(iid_centroid_radial(0.3, 2) == doctest::Approx(0.6));
  const double h = 1e-5;
  CHECK((iid_centroid_radial_cdf(0.6 + h, 3) - iid_centroid_radial_cdf(0.6 - h, 3)) / (2 * h) ==
        doctest::Approx(iid_centroid_radial(0.6, 3)).epsilon(1e-6));
}

TEST_CASE("zero ladders") {
  CHECK(zero_locations(spin(2), ZeroLadder::exact) == std::vector<double>{0.5});
  CHECK(zero_locations(spin(2), ZeroLadder::heuristic) == std::vector<double>{0.75});
  const auto half = zero_locations(spin(1), ZeroLadder::exact);
  REQUIRE(half.size() == 1);
  CHECK(half[0] == doctest::Approx(1.0 / 3.0));
  const auto e3 = zero_locations(spin(6), ZeroLadder::exact);
  REQUIRE(e3.size() == 3);
  CHECK(e3[0] == doctest::Approx(0.75));
  CHECK(e3[2] == doctest::Approx(0.25));
  CHECK_THROWS_AS(zero_locations(spin(0), ZeroLadder::exact), std::invalid_argument);
  for (int twice : {4, 8, 16}) {
    const auto cmp = compare_zero_ladders(spin(twice));
    CHECK(cmp.exact_count == cmp.heuristic_count);
    CHECK(cmp.max_gap <= 2.0 / twice);
  }
}
