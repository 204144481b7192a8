#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spinpcd/su2_model.hpp"

namespace spinpcd {

/// A point estimate with its one-sigma standard error.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Running sums over sampled weights w.
struct WeightTotals {
  double sum_re = 0.0;
  double sum_abs = 0.0;
  double sum_im = 0.0;
  std::uint64_t count = 0;

  /// Sum Re(w) / Sum |w|; 0 when nothing was accumulated.
  double average_sign() const { return sum_abs > 0.0 ? sum_re / sum_abs : 0.0; }

  WeightTotals& operator+=(const WeightTotals& o) {
    sum_re += o.sum_re;
    sum_abs += o.sum_abs;
    sum_im += o.sum_im;
    count += o.count;
    return *this;
  }
};

/// Relative size below which Sum Re(w) is treated as total cancellation.
inline constexpr double kCancellationThreshold = 1e-12;

/// Raised when the sign-weighted normalization Sum Re(w) is non-positive or
/// insignificant compared with Sum |w|.
class SignProblemError : public std::runtime_error {
 public:
  explicit SignProblemError(const WeightTotals& totals);
  const WeightTotals& totals() const noexcept { return totals_; }

 private:
  WeightTotals totals_;
};

/// Throws SignProblemError unless `denominator` is a usable normalization.
void require_normalizable(double denominator, double magnitude_sum, const WeightTotals& totals);

/// Ratio estimate sum(numer) / sum(denom) over batches, with the batch-means
/// (delta-method) standard error. Batches whose denominator and numerator
/// are both exactly zero are treated as empty.
Estimate ratio_estimate(const Eigen::Ref<const Eigen::VectorXd>& numer,
                        const Eigen::Ref<const Eigen::VectorXd>& denom);

// ---------------------------------------------------------------------------
// Histograms

struct BinSpec {
  std::size_t bins = 1;
  double lo = 0.0;
  double hi = 1.0;

  void validate() const;
  double width() const { return (hi - lo) / double(bins); }
  double edge(std::size_t i) const { return lo + (hi - lo) * double(i) / double(bins); }
  double center(std::size_t i) const { return 0.5 * (edge(i) + edge(i + 1)); }
};

struct NormalizedHistogram {
  BinSpec spec;
  std::vector<double> density;
  std::vector<double> error;
  /// Weight fractions of samples below lo / at or above hi.
  double underflow_fraction = 0.0;
  double overflow_fraction = 0.0;
  std::uint64_t underflow_count = 0;
  std::uint64_t overflow_count = 0;
  WeightTotals totals;

  /// Sum of density * bin width over the in-range bins.
  double integral() const;
};

/// Sign-weighted histogram: adds Re(w) to the observable's bin, keeps
/// per-batch sums for error bars, and tallies out-of-range samples without
/// dropping them from the normalization.
class SignedHistogram {
 public:
  explicit SignedHistogram(BinSpec spec, std::size_t batches = 1);

  void accumulate(double x, std::complex<double> weight, std::size_t batch = 0);
  void merge(const SignedHistogram& other);
  NormalizedHistogram normalize() const;

  const BinSpec& spec() const noexcept { return spec_; }
  std::size_t batches() const noexcept { return static_cast<std::size_t>(bin_sums_.rows()); }
  WeightTotals totals() const;
  std::uint64_t underflow_count() const noexcept { return underflow_count_; }
  std::uint64_t overflow_count() const noexcept { return overflow_count_; }

 private:
  BinSpec spec_;
  // batches x (bins + 2); the last two columns hold under- and overflow.
  Eigen::MatrixXd bin_sums_;
  // batches x 3: Sum Re(w), Sum |w|, Sum Im(w).
  Eigen::MatrixXd weight_sums_;
  Eigen::VectorXd counts_;
  std::uint64_t underflow_count_ = 0;
  std::uint64_t overflow_count_ = 0;
};

using RadialHistogram = SignedHistogram;
using LineHistogram = SignedHistogram;

// ---------------------------------------------------------------------------
// Moments

struct MomentSummary {
  /// Normalized raw moments <x^k>, k = 0..4; order 0 is exactly 1.
  std::array<Estimate, 5> raw;
  /// Weighted average of (1/L) sum_l (P_mu mu - P_mu^2), mu = x, y, z.
  std::array<Estimate, 3> cumulant;
  /// Mean of Im(w) per sample; should vanish by time-reversal symmetry.
  Estimate imag_mean;
  /// Sum Re(w) / Sum |w| with batch error.
  Estimate average_sign;
};

class MomentTable {
 public:
  static constexpr int kMaxOrder = 4;

  explicit MomentTable(std::size_t batches = 1);

  void accumulate(double x, std::complex<double> weight, const Vec3<double>& cumulant_integrand,
                  std::size_t batch = 0);
  void merge(const MomentTable& other);
  MomentSummary normalize() const;

  std::size_t batches() const noexcept { return static_cast<std::size_t>(sums_.rows()); }
  WeightTotals totals() const;

 private:
  // Columns: Re w * x^k (k = 0..4), Re w * cumulant (3), |w|, Im w, count.
  Eigen::MatrixXd sums_;
};

/// Diagonal cumulant entry C_zz from a beta = 0 run; requires 2s >= 1.
Estimate estimate_cumulant_C(const MomentSummary& moments, HalfInteger s, double beta);

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `sample` and the uniform distribution on [lo, hi].
double ks_uniform_statistic(std::span<const double> sample, double lo, double hi);

}  // namespace spinpcd
