#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinpcd/su2_model.hpp"

using namespace spinpcd;

namespace {

const UnitVec3d kX{Vec3<double>::UnitX()};
const UnitVec3d kY{Vec3<double>::UnitY()};
const UnitVec3d kZ{Vec3<double>::UnitZ()};

HalfInteger spin(int twice) { return HalfInteger::from_twice(twice); }

std::vector<UnitVec3d> random_path(std::mt19937_64& rng, std::size_t L) {
  std::vector<UnitVec3d> v;
  for (std::size_t i = 0; i < L; ++i) v.push_back(sample_uniform<double>(rng));
  return v;
}

}  // namespace

TEST_CASE("spin parsing") {
  CHECK(HalfInteger::parse("3/2").twice() == 3);
  CHECK(HalfInteger::parse("1.5").twice() == 3);
  CHECK(HalfInteger::parse("2").twice() == 4);
  CHECK(HalfInteger::parse("0").twice() == 0);
  CHECK(HalfInteger::parse("4/2").twice() == 4);
  CHECK(HalfInteger::parse("1/2").to_string() == "1/2");
  CHECK(HalfInteger::parse("1.0").to_string() == "1");
  CHECK_THROWS_AS(HalfInteger::parse("1/3"), std::invalid_argument);
  CHECK_THROWS_AS(HalfInteger::parse("0.75"), std::invalid_argument);
  CHECK_THROWS_AS(HalfInteger::parse("-1/2"), std::invalid_argument);
  CHECK_THROWS_AS(HalfInteger::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(HalfInteger::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(HalfInteger::from_twice(-1), std::invalid_argument);
}

TEST_CASE("P-symbol of the spin vector") {
  CHECK((diagonal_symbol_spin(kZ, spin(1)) - Vec3<double>(0, 0, 1.5)).norm() == 0.0);
  CHECK((diagonal_symbol_spin(kX, spin(2)) - Vec3<double>(2, 0, 0)).norm() == 0.0);
  CHECK(diagonal_symbol_spin(kX, spin(0)).norm() == 0.0);
  CHECK((diagonal_symbol_spin(kX, spin(0), SymbolConvention::lieb) - kX.vec()).norm() == 0.0);
  CHECK((matrix_element_spin(kZ, spin(3)) - Vec3<double>(0, 0, 1.5)).norm() == 0.0);
}

TEST_CASE("P-symbol of Sz^2") {
  CHECK(diagonal_symbol_sz2(kZ, spin(1)) == doctest::Approx(9.0 / 4.0));
  CHECK(diagonal_symbol_sz2(kX, spin(1)) == doctest::Approx(-3.0 / 4.0));
  // Averaging over the sphere gives Tr(Sz^2)/(2s+1) = s(s+1)/3.
  std::mt19937_64 rng(2);
  for (int twice : {1, 2, 3}) {
    double acc = 0.0;
    const int N = 200000;
    for (int i = 0; i < N; ++i) acc += diagonal_symbol_sz2(sample_uniform<double>(rng), spin(twice));
    const double s = 0.5 * twice;
    CHECK(std::abs(acc / N - s * (s + 1) / 3) < 0.02);
  }
}

TEST_CASE("Hamiltonian symbol") {
  ModelConfig cfg{spin(1), 1.0, Vec3<double>::Zero()};
  CHECK(hamiltonian_symbol(kZ, cfg) == 0.0);
  cfg.field = Vec3<double>::UnitZ();
  CHECK(hamiltonian_symbol(kZ, cfg) == doctest::Approx(-1.5));
  CHECK(hamiltonian_symbol(kX, cfg) == 0.0);
}

TEST_CASE("integer power agrees with pow") {
  const std::complex<double> z(0.3, -0.8);
  CHECK(integer_power(z, 0) == std::complex<double>(1.0));
  for (unsigned k = 1; k < 12; ++k) CHECK(std::abs(integer_power(z, k) - std::pow(z, double(k))) < 1e-14);
}

TEST_CASE("path weight examples") {
  std::mt19937_64 rng(9);
  const ModelConfig zero{spin(0), 0.0, Vec3<double>::Zero()};
  for (int t = 0; t < 100; ++t) {
    const auto p = random_path(rng, 6);
    CHECK(path_weight(std::span<const UnitVec3d>(p), zero) == std::complex<double>(1.0));
  }
  for (int twice : {1, 2, 3, 5}) {
    const ModelConfig cfg{spin(twice), 0.0, Vec3<double>::Zero()};
    for (int t = 0; t < 100; ++t) {
      const auto p = random_path(rng, 2);
      const auto w = path_weight(std::span<const UnitVec3d>(p), cfg);
      CHECK(w.imag() == 0.0);
      CHECK(w.real() == doctest::Approx(std::pow((1.0 + p[0].vec().dot(p[1].vec())) / 2.0, twice)));
    }
  }
  const std::vector<UnitVec3d> octant{kX, kY, kZ};
  const auto amp = loop_amplitude(std::span<const UnitVec3d>(octant), spin(1));
  CHECK(std::abs(amp.value - std::complex<double>(0.25, 0.25)) < 1e-15);
  CHECK(amp.berry_phase() == doctest::Approx(std::numbers::pi / 4));
  // Spin 1 doubles the phase and squares the magnitude.
  const auto amp1 = loop_amplitude(std::span<const UnitVec3d>(octant), spin(2));
  CHECK(amp1.berry_phase() == doctest::Approx(std::numbers::pi / 2));
  CHECK(amp1.magnitude() == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("spin-s weight is the 2s-th power of the spin-1/2 loop") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_path(rng, 7);
    const auto c = loop_overlap_half(std::span<const UnitVec3d>(p));
    for (int twice : {1, 2, 3, 4}) {
      const auto w = loop_overlap(std::span<const UnitVec3d>(p), spin(twice));
      CHECK(std::abs(w - std::pow(c, double(twice))) < 1e-13);
    }
  }
}

TEST_CASE("L = 3 real part follows the centroid") {
  std::mt19937_64 rng(13);
  const ModelConfig cfg{spin(1), 0.0, Vec3<double>::Zero()};
  for (int t = 0; t < 5000; ++t) {
    const auto p = random_path(rng, 3);
    const std::span<const UnitVec3d> view(p);
    const double nbar2 = centroid(view).squaredNorm();
    CHECK(std::abs(path_weight(view, cfg).real() - (9.0 * nbar2 - 1.0) / 8.0) < 1e-12);
  }
}

TEST_CASE("product weight approaches the exponentiated weight") {
  std::mt19937_64 rng(21);
  const ModelConfig cfg{spin(1), 1.0, Vec3<double>(0.2, -0.1, 1.0)};
  // Repeat a small vertex multiset so the mean field term stays fixed while L grows.
  const auto base = random_path(rng, 4);
  for (unsigned L : {100u, 1000u}) {
    std::vector<UnitVec3d> p;
    for (unsigned i = 0; i < L; ++i) p.push_back(base[i % base.size()]);
    const std::span<const UnitVec3d> view(p);
    const auto e = path_weight(view, cfg, WeightMode::exponentiated);
    const auto q = path_weight(view, cfg, WeightMode::product);
    const double rel = std::abs(q - e) / std::abs(e);
    CHECK(rel < 5.0 / L);
    CHECK(rel > 0.0);
  }
}

TEST_CASE("Berry phase uses the principal branch") {
  CHECK(LoopAmplitude{{-1.0, 0.0}}.berry_phase() == doctest::Approx(std::numbers::pi));
  CHECK(LoopAmplitude{{-1.0, -0.0}}.berry_phase() == doctest::Approx(std::numbers::pi));
  CHECK(LoopAmplitude{{0.0, 0.0}}.berry_phase() == 0.0);
  CHECK(LoopAmplitude{{1.0, -0.0}}.berry_phase() == 0.0);
}

TEST_CASE("cumulant integrand averages to -(s+1)/3") {
  std::mt19937_64 rng(8);
  const int N = 100000;
  for (int twice : {1, 2}) {
    Vec3<double> acc = Vec3<double>::Zero();
    for (int i = 0; i < N; ++i) {
      const auto p = random_path(rng, 1);
      acc += cumulant_integrand(std::span<const UnitVec3d>(p), spin(twice));
    }
    acc /= N;
    const double expect = -(0.5 * twice + 1.0) / 3.0;
    for (int k = 0; k < 3; ++k) CHECK(std::abs(acc(k) - expect) < 0.02);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS((ModelConfig{spin(1), -1.0, Vec3<double>::Zero()}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelConfig{spin(1), NAN, Vec3<double>::Zero()}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelConfig{spin(1), 1.0, Vec3<double>(INFINITY, 0, 0)}.validate()), std::invalid_argument);
}
