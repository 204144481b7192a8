#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinpcd/geometry.hpp"

using namespace spinpcd;

namespace {

const UnitVec3d kX{Vec3<double>::UnitX()};
const UnitVec3d kY{Vec3<double>::UnitY()};
const UnitVec3d kZ{Vec3<double>::UnitZ()};

PolygonPath<double> random_path(std::mt19937_64& rng, std::size_t L) {
  std::vector<UnitVec3d> v;
  for (std::size_t i = 0; i < L; ++i) v.push_back(sample_uniform<double>(rng));
  return PolygonPath<double>(std::move(v));
}

}  // namespace

TEST_CASE("unit vectors reject non-unit input") {
  CHECK_THROWS_AS(UnitVec3d(Vec3<double>(1.0, 1.0, 0.0)), std::invalid_argument);
  CHECK_NOTHROW(UnitVec3d(Vec3<double>(0.6, 0.8, 0.0)));
  const auto n = UnitVec3d::normalized(Vec3<double>(3.0, 0.0, 4.0));
  CHECK(n.x() == doctest::Approx(0.6));
  CHECK(n.z() == doctest::Approx(0.8));
  const auto a = UnitVec3d::from_angles(std::numbers::pi / 2, 0.0);
  CHECK(a.x() == doctest::Approx(1.0));
  CHECK(std::abs(a.z()) < 1e-15);
}

TEST_CASE("sampler is reproducible and unit-norm") {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto u = sample_uniform<double>(a);
    const auto v = sample_uniform<double>(b);
    CHECK(u == v);
    CHECK(std::abs(u.vec().squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("sampler moments match the uniform measure") {
  std::mt19937_64 rng(7);
  const int N = 1000000;
  Vec3<double> mean = Vec3<double>::Zero();
  double z2 = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto n = sample_uniform<double>(rng);
    mean += n.vec();
    z2 += n.z() * n.z();
  }
  mean /= N;
  z2 /= N;
  const double sigma = 1.0 / std::sqrt(3.0 * N);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(mean(k)) < 5 * sigma);
  // Var(z^2) = 1/5 - 1/9.
  CHECK(std::abs(z2 - 1.0 / 3.0) < 5 * std::sqrt(4.0 / 45.0 / N));
}

TEST_CASE("centroid examples") {
  const auto n = UnitVec3d::normalized(Vec3<double>(1.0, -2.0, 0.5));
  CHECK((centroid(PolygonPath<double>({n, n, n, n})) - n.vec()).norm() < 1e-15);
  CHECK(centroid(PolygonPath<double>({n, -n})).norm() < 1e-15);
  const Vec3<double> c = centroid(PolygonPath<double>({kX, kY, kZ}));
  CHECK((c - Vec3<double>::Constant(1.0 / 3.0)).norm() < 1e-15);
  CHECK(c.norm() == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("loop overlap examples") {
  CHECK(loop_overlap_half(PolygonPath<double>({kY})) == std::complex<double>(1.0));
  const auto c = loop_overlap_half(PolygonPath<double>({kX, kY, kZ}));
  CHECK(std::abs(c - std::complex<double>(0.25, 0.25)) < 1e-15);
  const auto n = UnitVec3d::normalized(Vec3<double>(0.3, 0.1, -0.7));
  CHECK(std::abs(loop_overlap_half(PolygonPath<double>({kX, n, -n, kZ}))) < 1e-15);
}

TEST_CASE("loop overlap matches the triangle identity") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    const auto p = random_path(rng, 3);
    const Vec3<double> a = p[0].vec(), b = p[1].vec(), c = p[2].vec();
    const std::complex<double> expect(1.0 + a.dot(b) + b.dot(c) + c.dot(a), a.dot(b.cross(c)));
    CHECK(std::abs(loop_overlap_half(p) - expect / 4.0) < 1e-14);
  }
}

TEST_CASE("loop overlap is gauge, rotation and cyclic invariant") {
  std::mt19937_64 rng(3);
  const SpinorBranch north[] = {SpinorBranch::north, SpinorBranch::north, SpinorBranch::north, SpinorBranch::north,
                                SpinorBranch::north};
  const SpinorBranch mixed[] = {SpinorBranch::south, SpinorBranch::north, SpinorBranch::south, SpinorBranch::south,
                                SpinorBranch::north};
  for (int t = 0; t < 200; ++t) {
    const auto p = random_path(rng, 5);
    const auto c = loop_overlap_half(p);
    CHECK(std::abs(loop_overlap_half(p.vertices(), north) - c) < 1e-13);
    CHECK(std::abs(loop_overlap_half(p.vertices(), mixed) - c) < 1e-13);
    const auto axis = sample_uniform<double>(rng);
    const Mat3<double> R = rotation_matrix(axis, 2.0 * std::numbers::pi * uniform01(rng));
    CHECK(std::abs(loop_overlap_half(rotated(p, R)) - c) < 1e-13);
    CHECK(std::abs(loop_overlap_half(rotate_order(p, 2)) - c) < 1e-13);
    CHECK(std::abs(loop_overlap_half(reversed(p)) - std::conj(c)) < 1e-13);
  }
}

TEST_CASE("spinor near the south pole stays finite") {
  const UnitVec3d south{Vec3<double>(0.0, 0.0, -1.0)};
  const auto psi = spinor(south);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-15);
  const auto c = loop_overlap_half(PolygonPath<double>({south, kX, kY}));
  const Vec3<double> a = south.vec(), b = kX.vec(), d = kY.vec();
  const std::complex<double> expect(1.0 + a.dot(b) + b.dot(d) + d.dot(a), a.dot(b.cross(d)));
  CHECK(std::abs(c - expect / 4.0) < 1e-15);
}

TEST_CASE("two-vertex loops are real and non-negative") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    const auto p = random_path(rng, 2);
    const auto c = loop_overlap_half(p);
    CHECK(c.imag() == 0.0);
    CHECK(c.real() == doctest::Approx((1.0 + p[0].vec().dot(p[1].vec())) / 2.0));
  }
}

TEST_CASE("polygon path requires a vertex") {
  CHECK_THROWS_AS(PolygonPath<double>(std::vector<UnitVec3d>{}), std::invalid_argument);
}
