#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinpcd/estimators.hpp"
#include "spinpcd/geometry.hpp"
#include "spinpcd/su2_model.hpp"

namespace spinpcd {

enum class Observable {
  radial_spin,  // S = (s+1) |n-bar|
  z_component,  // x = (s+1) n-bar_z
};

std::string to_string(Observable obs);
Observable parse_observable(const std::string& text);

/// 120 uniform bins on [0, s + 1.5] (radial) or [-(s + 1.5), s + 1.5] (z).
BinSpec default_bins(HalfInteger s, Observable obs, std::size_t bins = 120);

struct RunConfig {
  ModelConfig model;
  unsigned vertices = 1;
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Batch-means blocks. Each block draws from its own stream, so results do
  /// not depend on the worker count.
  std::size_t batches = 100;
  Observable observable = Observable::radial_spin;
  BinSpec bins = default_bins(HalfInteger{}, Observable::radial_spin);
  std::vector<Vec3<double>> probes;

  void validate() const;
  std::size_t effective_batches() const;
};

struct RunDiagnostics {
  WeightTotals totals;
  Estimate average_sign;
  /// Per-sample mean of Im(w); zero up to noise.
  Estimate imag_mean;
  std::uint64_t underflow_count = 0;
  std::uint64_t overflow_count = 0;
  double wall_seconds = 0.0;
};

/// Sign-problem failure that still carries the run diagnostics.
class RunFailure : public SignProblemError {
 public:
  RunFailure(const RunDiagnostics& diagnostics)
      : SignProblemError(diagnostics.totals), diagnostics_(diagnostics) {}
  const RunDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  RunDiagnostics diagnostics_;
};

struct PcdResult {
  NormalizedHistogram histogram;
  MomentSummary moments;
  RunDiagnostics diagnostics;
};

/// Path-centroid distribution by direct sampling: L i.i.d. uniform vertices
/// per path, exponentiated weight, Re(w) added to the observable's bin.
PcdResult run_pcd(const RunConfig& config);

struct ChiEstimate {
  Vec3<double> lambda = Vec3<double>::Zero();
  std::complex<double> value;
  double error_re = 0.0;
  double error_im = 0.0;

  /// Standard deviation of the complex estimate, sqrt(err_re^2 + err_im^2).
  double error() const;
};

struct ChiResult {
  std::vector<ChiEstimate> estimates;
  RunDiagnostics diagnostics;
};

/// Product-form ratio estimator of the finite-L characteristic function,
/// E[w0 prod_l (1 - (beta P_H + i lambda.P)/L)] / E[w0 prod_l (1 - beta P_H/L)].
/// Its expectation is exactly trotter_chi at every L.
ChiResult estimate_chi(const RunConfig& config, std::span<const Vec3<double>> probes);
ChiEstimate estimate_chi(const RunConfig& config, const Vec3<double>& lambda);

struct PhasePoint {
  double observable = 0.0;
  /// arg of the path weight, in (-pi, pi].
  double phase = 0.0;
};

PhasePoint phase_point(std::span<const UnitVec3d> path, const ModelConfig& model, Observable obs);

/// (observable, Berry phase) pairs for `max_points` random paths.
std::vector<PhasePoint> phase_scatter(const RunConfig& config, std::size_t max_points);

/// Seed for an independent stream, mixed from (seed, stream index).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace spinpcd
