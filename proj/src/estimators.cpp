#include "spinpcd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spinpcd {

namespace {

std::string describe(const WeightTotals& t) {
  std::ostringstream os;
  os.precision(6);
  os << "sign problem: sum Re(w) = " << t.sum_re << " over " << t.count
     << " samples (sum |w| = " << t.sum_abs << ", average sign " << t.average_sign() << ")";
  return os.str();
}

enum Column : Eigen::Index {
  kRe = 0,
  kAbs = 1,
  kIm = 2,
};

}  // namespace

SignProblemError::SignProblemError(const WeightTotals& totals)
    : std::runtime_error(describe(totals)), totals_(totals) {}

void require_normalizable(double denominator, double magnitude_sum, const WeightTotals& totals) {
  if (!(denominator > 0.0) || !(denominator >= kCancellationThreshold * magnitude_sum))
    throw SignProblemError(totals);
}

Estimate ratio_estimate(const Eigen::Ref<const Eigen::VectorXd>& numer,
                        const Eigen::Ref<const Eigen::VectorXd>& denom) {
  if (numer.size() != denom.size()) throw std::invalid_argument("ratio_estimate: size mismatch");
  const double a = numer.sum();
  const double d = denom.sum();
  const double r = a / d;
  double ss = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index k = 0; k < numer.size(); ++k) {
    if (numer(k) == 0.0 && denom(k) == 0.0) continue;
    const double e = numer(k) - r * denom(k);
    ss += e * e;
    ++used;
  }
  if (used < 2) return {r, std::numeric_limits<double>::quiet_NaN()};
  const double var = ss * double(used) / double(used - 1);
  return {r, std::sqrt(var) / std::abs(d)};
}

// ---------------------------------------------------------------------------

void BinSpec::validate() const {
  if (bins < 1) throw std::invalid_argument("BinSpec: need at least one bin");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("BinSpec: range must be finite with lo < hi");
}

double NormalizedHistogram::integral() const {
  double sum = 0.0;
  const double w = spec.width();
  for (double d : density) sum += d * w;
  return sum;
}

SignedHistogram::SignedHistogram(BinSpec spec, std::size_t batches) : spec_(spec) {
  spec_.validate();
  if (batches < 1) throw std::invalid_argument("SignedHistogram: need at least one batch");
  const auto K = static_cast<Eigen::Index>(batches);
  bin_sums_ = Eigen::MatrixXd::Zero(K, static_cast<Eigen::Index>(spec_.bins) + 2);
  weight_sums_ = Eigen::MatrixXd::Zero(K, 3);
  counts_ = Eigen::VectorXd::Zero(K);
}

void SignedHistogram::accumulate(double x, std::complex<double> weight, std::size_t batch) {
  const auto k = static_cast<Eigen::Index>(batch);
  if (k >= bin_sums_.rows()) throw std::out_of_range("SignedHistogram: batch index out of range");
  const auto nb = static_cast<Eigen::Index>(spec_.bins);
  Eigen::Index col;
  if (!(x >= spec_.lo)) {
    col = nb;
    ++underflow_count_;
  } else if (!(x < spec_.hi)) {
    col = nb + 1;
    ++overflow_count_;
  } else {
    // Values that sit on an edge up to rounding go to the bin above it.
    double u = (x - spec_.lo) / spec_.width();
    const double edge = std::round(u);
    if (std::abs(u - edge) <= 1e-9 * std::max(1.0, edge)) u = edge;
    col = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), nb - 1);
  }
  bin_sums_(k, col) += weight.real();
  weight_sums_(k, kRe) += weight.real();
  weight_sums_(k, kAbs) += std::abs(weight);
  weight_sums_(k, kIm) += weight.imag();
  counts_(k) += 1.0;
}

void SignedHistogram::merge(const SignedHistogram& other) {
  if (other.spec_.bins != spec_.bins || other.spec_.lo != spec_.lo || other.spec_.hi != spec_.hi ||
      other.batches() != batches())
    throw std::invalid_argument("SignedHistogram::merge: incompatible layout");
  bin_sums_ += other.bin_sums_;
  weight_sums_ += other.weight_sums_;
  counts_ += other.counts_;
  underflow_count_ += other.underflow_count_;
  overflow_count_ += other.overflow_count_;
}

WeightTotals SignedHistogram::totals() const {
  WeightTotals t;
  for (Eigen::Index k = 0; k < weight_sums_.rows(); ++k) {
    t.sum_re += weight_sums_(k, kRe);
    t.sum_abs += weight_sums_(k, kAbs);
    t.sum_im += weight_sums_(k, kIm);
  }
  t.count = static_cast<std::uint64_t>(counts_.sum());
  return t;
}

NormalizedHistogram SignedHistogram::normalize() const {
  const WeightTotals t = totals();
  require_normalizable(t.sum_re, t.sum_abs, t);

  NormalizedHistogram out;
  out.spec = spec_;
  out.totals = t;
  out.underflow_count = underflow_count_;
  out.overflow_count = overflow_count_;
  out.density.resize(spec_.bins);
  out.error.resize(spec_.bins);
  const double w = spec_.width();
  const auto denom = weight_sums_.col(kRe);
  for (std::size_t b = 0; b < spec_.bins; ++b) {
    const Estimate e = ratio_estimate(bin_sums_.col(static_cast<Eigen::Index>(b)), denom);
    out.density[b] = e.value / w;
    out.error[b] = e.error / w;
  }
  const auto nb = static_cast<Eigen::Index>(spec_.bins);
  out.underflow_fraction = bin_sums_.col(nb).sum() / t.sum_re;
  out.overflow_fraction = bin_sums_.col(nb + 1).sum() / t.sum_re;
  return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr Eigen::Index kMomentCols = MomentTable::kMaxOrder + 1;
constexpr Eigen::Index kCumulantCol = kMomentCols;
constexpr Eigen::Index kAbsCol = kCumulantCol + 3;
constexpr Eigen::Index kImCol = kAbsCol + 1;
constexpr Eigen::Index kCountCol = kImCol + 1;
constexpr Eigen::Index kTotalCols = kCountCol + 1;
}  // namespace

MomentTable::MomentTable(std::size_t batches) {
  if (batches < 1) throw std::invalid_argument("MomentTable: need at least one batch");
  sums_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(batches), kTotalCols);
}

void MomentTable::accumulate(double x, std::complex<double> weight, const Vec3<double>& cumulant_integrand,
                             std::size_t batch) {
  const auto k = static_cast<Eigen::Index>(batch);
  if (k >= sums_.rows()) throw std::out_of_range("MomentTable: batch index out of range");
  const double re = weight.real();
  double p = re;
  for (Eigen::Index order = 0; order < kMomentCols; ++order) {
    sums_(k, order) += p;
    p *= x;
  }
  for (Eigen::Index mu = 0; mu < 3; ++mu) sums_(k, kCumulantCol + mu) += re * cumulant_integrand(mu);
  sums_(k, kAbsCol) += std::abs(weight);
  sums_(k, kImCol) += weight.imag();
  sums_(k, kCountCol) += 1.0;
}

void MomentTable::merge(const MomentTable& other) {
  if (other.sums_.rows() != sums_.rows()) throw std::invalid_argument("MomentTable::merge: batch mismatch");
  sums_ += other.sums_;
}

WeightTotals MomentTable::totals() const {
  WeightTotals t;
  t.sum_re = sums_.col(0).sum();
  t.sum_abs = sums_.col(kAbsCol).sum();
  t.sum_im = sums_.col(kImCol).sum();
  t.count = static_cast<std::uint64_t>(sums_.col(kCountCol).sum());
  return t;
}

MomentSummary MomentTable::normalize() const {
  const WeightTotals t = totals();
  require_normalizable(t.sum_re, t.sum_abs, t);
  MomentSummary out;
  const auto denom = sums_.col(0);
  out.raw[0] = {1.0, 0.0};
  for (Eigen::Index order = 1; order < kMomentCols; ++order)
    out.raw[static_cast<std::size_t>(order)] = ratio_estimate(sums_.col(order), denom);
  for (Eigen::Index mu = 0; mu < 3; ++mu)
    out.cumulant[static_cast<std::size_t>(mu)] = ratio_estimate(sums_.col(kCumulantCol + mu), denom);
  out.imag_mean = ratio_estimate(sums_.col(kImCol), sums_.col(kCountCol));
  out.average_sign = ratio_estimate(denom, sums_.col(kAbsCol));
  return out;
}

Estimate estimate_cumulant_C(const MomentSummary& moments, HalfInteger s, double beta) {
  if (s.twice() < 1) throw std::invalid_argument("estimate_cumulant_C: requires s >= 1/2");
  if (beta != 0.0) throw std::invalid_argument("estimate_cumulant_C: requires a beta = 0 run");
  return moments.cumulant[2];
}

double ks_uniform_statistic(std::span<const double> sample, double lo, double hi) {
  if (sample.empty()) return 0.0;
  if (!(lo < hi)) throw std::invalid_argument("ks_uniform_statistic: need lo < hi");
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  const double n = double(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = std::clamp((v[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
  }
  return d;
}

}  // namespace spinpcd
