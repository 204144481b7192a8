#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace spinpcd {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

/// A point on the Bloch sphere. Construction checks |v| = 1 to 1e-12;
/// use normalized() to project an arbitrary nonzero vector.
template <typename Scalar>
class UnitVec3 {
 public:
  static constexpr Scalar kNormTolerance = Scalar(1e-12);

  UnitVec3() : v_(0, 0, 1) {}

  explicit UnitVec3(const Vec3<Scalar>& v) : v_(v) {
    if (!(std::abs(v.squaredNorm() - Scalar(1)) <= kNormTolerance))
      throw std::invalid_argument("UnitVec3: vector is not unit-norm");
  }

  UnitVec3(Scalar x, Scalar y, Scalar z) : UnitVec3(Vec3<Scalar>(x, y, z)) {}

  static UnitVec3 normalized(const Vec3<Scalar>& v) {
    const Scalar n = v.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n))
      throw std::invalid_argument("UnitVec3: cannot normalize zero or non-finite vector");
    UnitVec3 u;
    u.v_ = v / n;
    return u;
  }

  static UnitVec3 from_angles(Scalar theta, Scalar phi) {
    const Scalar st = std::sin(theta);
    return normalized(Vec3<Scalar>(st * std::cos(phi), st * std::sin(phi), std::cos(theta)));
  }

  const Vec3<Scalar>& vec() const noexcept { return v_; }
  Scalar x() const noexcept { return v_.x(); }
  Scalar y() const noexcept { return v_.y(); }
  Scalar z() const noexcept { return v_.z(); }

  UnitVec3 operator-() const {
    UnitVec3 u;
    u.v_ = -v_;
    return u;
  }

  bool operator==(const UnitVec3& o) const { return v_ == o.v_; }

 private:
  Vec3<Scalar> v_;
};

using UnitVec3d = UnitVec3<double>;

/// Closed loop of L >= 1 vertices; vertex L links back to vertex 1.
template <typename Scalar>
class PolygonPath {
 public:
  explicit PolygonPath(std::vector<UnitVec3<Scalar>> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("PolygonPath: needs at least one vertex");
  }

  PolygonPath(std::initializer_list<UnitVec3<Scalar>> vertices)
      : PolygonPath(std::vector<UnitVec3<Scalar>>(vertices)) {}

  std::size_t size() const noexcept { return vertices_.size(); }
  const UnitVec3<Scalar>& operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const UnitVec3<Scalar>> vertices() const noexcept { return vertices_; }
  operator std::span<const UnitVec3<Scalar>>() const noexcept { return vertices_; }

 private:
  std::vector<UnitVec3<Scalar>> vertices_;
};

using PolygonPathd = PolygonPath<double>;

// ---------------------------------------------------------------------------
// Sampling

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
template <typename Engine>
double uniform01(Engine& rng) {
  static_assert(Engine::max() - Engine::min() == UINT64_MAX, "needs a full 64-bit engine");
  return static_cast<double>((rng() - Engine::min()) >> 11) * 0x1.0p-53;
}

/// Area-uniform point on S^2: z uniform on [-1, 1], azimuth uniform on [0, 2pi).
template <typename Scalar = double, typename Engine>
UnitVec3<Scalar> sample_uniform(Engine& rng) {
  const Scalar z = Scalar(2) * Scalar(uniform01(rng)) - Scalar(1);
  const Scalar phi = Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(uniform01(rng));
  const Scalar r = std::sqrt(std::max(Scalar(0), (Scalar(1) - z) * (Scalar(1) + z)));
  return UnitVec3<Scalar>::normalized(Vec3<Scalar>(r * std::cos(phi), r * std::sin(phi), z));
}

// ---------------------------------------------------------------------------
// Centroid

template <typename Scalar>
Vec3<Scalar> centroid(std::span<const UnitVec3<Scalar>> path) {
  Vec3<Scalar> sum = Vec3<Scalar>::Zero();
  for (const auto& n : path) sum += n.vec();
  return sum / Scalar(path.size());
}

template <typename Scalar>
Vec3<Scalar> centroid(const PolygonPath<Scalar>& path) {
  return centroid(path.vertices());
}

// ---------------------------------------------------------------------------
// Spin-1/2 coherent states

template <typename Scalar>
using Spinor = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

enum class SpinorBranch : std::uint8_t {
  automatic,  // north unless 1 + z < 1e-8
  north,      // regular everywhere except the south pole
  south,      // regular everywhere except the north pole
};

/// Two-component spinor |n> with n . sigma |n> = |n>. The two branches differ
/// by a phase e^{i phi}, which cancels in any closed loop.
template <typename Scalar>
Spinor<Scalar> spinor(const UnitVec3<Scalar>& n, SpinorBranch branch = SpinorBranch::automatic) {
  using C = std::complex<Scalar>;
  const Scalar x = n.x(), y = n.y(), z = n.z();
  if (branch == SpinorBranch::automatic)
    branch = (Scalar(1) + z < Scalar(1e-8)) ? SpinorBranch::south : SpinorBranch::north;
  Spinor<Scalar> psi;
  if (branch == SpinorBranch::north) {
    const Scalar up = std::sqrt((Scalar(1) + z) / Scalar(2));
    psi << C(up), C(x, y) / std::sqrt(Scalar(2) * (Scalar(1) + z));
  } else {
    const Scalar down = std::sqrt((Scalar(1) - z) / Scalar(2));
    psi << C(x, -y) / std::sqrt(Scalar(2) * (Scalar(1) - z)), C(down);
  }
  return psi;
}

/// <a|b> for two spinors.
template <typename Scalar>
std::complex<Scalar> overlap(const Spinor<Scalar>& a, const Spinor<Scalar>& b) {
  return std::conj(a(0)) * b(0) + std::conj(a(1)) * b(1);
}

/// Closed-loop product <n_1|n_2><n_2|n_3>...<n_L|n_1> of spin-1/2 overlaps.
/// |result| = prod sqrt((1 + n_l . n_{l+1}) / 2); arg(result) is half the
/// enclosed solid angle.
template <typename Scalar>
std::complex<Scalar> loop_overlap_half(std::span<const UnitVec3<Scalar>> path,
                                       std::span<const SpinorBranch> branches = {}) {
  const std::size_t L = path.size();
  if (L == 0) throw std::invalid_argument("loop_overlap_half: empty path");
  if (!branches.empty() && branches.size() != L)
    throw std::invalid_argument("loop_overlap_half: branch list length mismatch");
  auto branch_at = [&](std::size_t i) {
    return branches.empty() ? SpinorBranch::automatic : branches[i];
  };
  const Spinor<Scalar> first = spinor(path[0], branch_at(0));
  Spinor<Scalar> prev = first;
  std::complex<Scalar> product(1);
  for (std::size_t l = 1; l < L; ++l) {
    Spinor<Scalar> cur = spinor(path[l], branch_at(l));
    product *= overlap(prev, cur);
    prev = cur;
  }
  return product * overlap(prev, first);
}

template <typename Scalar>
std::complex<Scalar> loop_overlap_half(const PolygonPath<Scalar>& path) {
  return loop_overlap_half(path.vertices());
}

// ---------------------------------------------------------------------------
// Rotations (test and diagnostic helpers)

/// Rodrigues rotation by `angle` about the unit axis `axis`.
template <typename Scalar>
Mat3<Scalar> rotation_matrix(const UnitVec3<Scalar>& axis, Scalar angle) {
  const Vec3<Scalar>& k = axis.vec();
  Mat3<Scalar> K;
  K << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Mat3<Scalar>::Identity() + std::sin(angle) * K + (Scalar(1) - std::cos(angle)) * K * K;
}

template <typename Scalar>
PolygonPath<Scalar> rotated(const PolygonPath<Scalar>& path, const Mat3<Scalar>& R) {
  std::vector<UnitVec3<Scalar>> out;
  out.reserve(path.size());
  for (const auto& n : path.vertices()) out.push_back(UnitVec3<Scalar>::normalized(R * n.vec()));
  return PolygonPath<Scalar>(std::move(out));
}

template <typename Scalar>
PolygonPath<Scalar> reversed(const PolygonPath<Scalar>& path) {
  auto v = path.vertices();
  return PolygonPath<Scalar>(std::vector<UnitVec3<Scalar>>(v.rbegin(), v.rend()));
}

/// Cyclic shift: vertex k becomes the first vertex.
template <typename Scalar>
PolygonPath<Scalar> rotate_order(const PolygonPath<Scalar>& path, std::size_t k) {
  auto v = path.vertices();
  std::vector<UnitVec3<Scalar>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[(i + k) % v.size()]);
  return PolygonPath<Scalar>(std::move(out));
}

}  // namespace spinpcd
