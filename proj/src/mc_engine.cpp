#include "spinpcd/mc_engine.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <thread>

namespace spinpcd {

std::string to_string(Observable obs) {
  return obs == Observable::radial_spin ? "radial" : "z";
}

Observable parse_observable(const std::string& text) {
  if (text == "radial" || text == "radial-spin") return Observable::radial_spin;
  if (text == "z" || text == "z-component") return Observable::z_component;
  throw std::invalid_argument("unknown observable '" + text + "' (expected radial or z)");
}

BinSpec default_bins(HalfInteger s, Observable obs, std::size_t bins) {
  const double top = s.value() + 1.5;
  return obs == Observable::radial_spin ? BinSpec{bins, 0.0, top} : BinSpec{bins, -top, top};
}

void RunConfig::validate() const {
  model.validate();
  if (vertices < 1) throw std::invalid_argument("RunConfig: vertices must be >= 1");
  if (samples < 1) throw std::invalid_argument("RunConfig: samples must be >= 1");
  if (workers < 1) throw std::invalid_argument("RunConfig: workers must be >= 1");
  if (batches < 1) throw std::invalid_argument("RunConfig: batches must be >= 1");
  bins.validate();
  for (const auto& p : probes)
    if (!p.allFinite()) throw std::invalid_argument("RunConfig: probe vectors must be finite");
}

std::size_t RunConfig::effective_batches() const {
  return static_cast<std::size_t>(std::min<std::uint64_t>(batches, samples));
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a combination of both words.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

double ChiEstimate::error() const { return std::hypot(error_re, error_im); }

namespace {

using Clock = std::chrono::steady_clock;

/// Runs `body(batch, rng, count, acc)` for every batch, spreading batches over
/// workers round-robin. Each worker owns an accumulator made by `make`; they
/// are merged in worker order. Batches touch disjoint accumulator rows, so
/// the merged sums are independent of the worker count.
template <typename Acc, typename Make, typename Body>
Acc run_batches(const RunConfig& cfg, Make make, Body body) {
  const std::size_t K = cfg.effective_batches();
  const unsigned W = static_cast<unsigned>(std::min<std::size_t>(cfg.workers, K));
  std::vector<Acc> partial;
  partial.reserve(W);
  for (unsigned w = 0; w < W; ++w) partial.push_back(make());

  auto work = [&](unsigned w) {
    for (std::size_t k = w; k < K; k += W) {
      const std::uint64_t begin = cfg.samples * k / K;
      const std::uint64_t end = cfg.samples * (k + 1) / K;
      std::mt19937_64 rng(stream_seed(cfg.seed, k));
      body(k, rng, end - begin, partial[w]);
    }
  };
  if (W == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(W);
    for (unsigned w = 0; w < W; ++w) pool.emplace_back(work, w);
  }
  for (unsigned w = 1; w < W; ++w) partial[0].merge(partial[w]);
  return std::move(partial[0]);
}

void draw_path(std::mt19937_64& rng, std::vector<UnitVec3d>& path) {
  for (auto& n : path) n = sample_uniform<double>(rng);
}

double observable_value(std::span<const UnitVec3d> path, HalfInteger s, Observable obs) {
  const Vec3<double> c = spin_centroid(path, s);
  return obs == Observable::radial_spin ? c.norm() : c.z();
}

struct PcdAccumulators {
  SignedHistogram histogram;
  MomentTable moments;

  void merge(const PcdAccumulators& o) {
    histogram.merge(o.histogram);
    moments.merge(o.moments);
  }
};

}  // namespace

PcdResult run_pcd(const RunConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const std::size_t K = config.effective_batches();
  const HalfInteger s = config.model.s;

  auto acc = run_batches<PcdAccumulators>(
      config, [&] { return PcdAccumulators{SignedHistogram(config.bins, K), MomentTable(K)}; },
      [&](std::size_t k, std::mt19937_64& rng, std::uint64_t n, PcdAccumulators& a) {
        std::vector<UnitVec3d> path(config.vertices);
        for (std::uint64_t i = 0; i < n; ++i) {
          draw_path(rng, path);
          const std::span<const UnitVec3d> view(path);
          const std::complex<double> w = path_weight(view, config.model, WeightMode::exponentiated);
          const double x = observable_value(view, s, config.observable);
          a.histogram.accumulate(x, w, k);
          a.moments.accumulate(x, w, cumulant_integrand(view, s), k);
        }
      });

  RunDiagnostics diag;
  diag.totals = acc.histogram.totals();
  diag.underflow_count = acc.histogram.underflow_count();
  diag.overflow_count = acc.histogram.overflow_count();
  diag.average_sign = {diag.totals.average_sign(), 0.0};
  diag.imag_mean = {diag.totals.count ? diag.totals.sum_im / double(diag.totals.count) : 0.0, 0.0};

  PcdResult result;
  try {
    result.moments = acc.moments.normalize();
    result.histogram = acc.histogram.normalize();
  } catch (const SignProblemError&) {
    diag.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    throw RunFailure(diag);
  }
  diag.average_sign = result.moments.average_sign;
  diag.imag_mean = result.moments.imag_mean;
  diag.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  result.diagnostics = diag;
  return result;
}

namespace {

// Per-batch sums for the chi estimator: columns [Re num_p, Im num_p]...,
// denominator, |denominator|, count.
struct ChiAccumulator {
  Eigen::MatrixXd sums;
  void merge(const ChiAccumulator& o) { sums += o.sums; }
};

}  // namespace

ChiResult estimate_chi(const RunConfig& config, std::span<const Vec3<double>> probes) {
  config.validate();
  const auto t0 = Clock::now();
  const std::size_t K = config.effective_batches();
  const Eigen::Index P = static_cast<Eigen::Index>(probes.size());
  const Eigen::Index den_col = 2 * P, abs_col = 2 * P + 1, count_col = 2 * P + 2;
  const ModelConfig& model = config.model;
  const double L = double(config.vertices);
  const double beta = model.beta;

  auto acc = run_batches<ChiAccumulator>(
      config, [&] { return ChiAccumulator{Eigen::MatrixXd::Zero(Eigen::Index(K), 2 * P + 3)}; },
      [&](std::size_t k, std::mt19937_64& rng, std::uint64_t n, ChiAccumulator& a) {
        std::vector<UnitVec3d> path(config.vertices);
        std::vector<std::complex<double>> factors(probes.size());
        const auto row = Eigen::Index(k);
        for (std::uint64_t i = 0; i < n; ++i) {
          draw_path(rng, path);
          const std::span<const UnitVec3d> view(path);
          // Time reversal maps w0 to its conjugate and leaves the vertex
          // factors unchanged, so Im(w0) averages to zero and is dropped.
          const double re0 = loop_overlap(view, model.s).real();
          double thermal = 1.0;
          std::fill(factors.begin(), factors.end(), std::complex<double>(1.0));
          for (const auto& v : view) {
            const double ph = hamiltonian_symbol(v, model);
            const double diag_factor = 1.0 - beta * ph / L;
            thermal *= diag_factor;
            const Vec3<double> p = diagonal_symbol_spin(v, model.s, SymbolConvention::lieb);
            for (Eigen::Index j = 0; j < P; ++j)
              factors[std::size_t(j)] *= std::complex<double>(diag_factor, -probes[std::size_t(j)].dot(p) / L);
          }
          const double den = re0 * thermal;
          for (Eigen::Index j = 0; j < P; ++j) {
            const std::complex<double> num = re0 * factors[std::size_t(j)];
            a.sums(row, 2 * j) += num.real();
            a.sums(row, 2 * j + 1) += num.imag();
          }
          a.sums(row, den_col) += den;
          a.sums(row, abs_col) += std::abs(den);
          a.sums(row, count_col) += 1.0;
        }
      });

  ChiResult result;
  RunDiagnostics& diag = result.diagnostics;
  diag.totals.sum_re = acc.sums.col(den_col).sum();
  diag.totals.sum_abs = acc.sums.col(abs_col).sum();
  diag.totals.count = static_cast<std::uint64_t>(acc.sums.col(count_col).sum());
  diag.average_sign = ratio_estimate(acc.sums.col(den_col), acc.sums.col(abs_col));
  diag.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  try {
    require_normalizable(diag.totals.sum_re, diag.totals.sum_abs, diag.totals);
  } catch (const SignProblemError&) {
    throw RunFailure(diag);
  }
  const auto den = acc.sums.col(den_col);
  for (Eigen::Index j = 0; j < P; ++j) {
    const Estimate re = ratio_estimate(acc.sums.col(2 * j), den);
    const Estimate im = ratio_estimate(acc.sums.col(2 * j + 1), den);
    result.estimates.push_back({probes[std::size_t(j)], {re.value, im.value}, re.error, im.error});
  }
  return result;
}

ChiEstimate estimate_chi(const RunConfig& config, const Vec3<double>& lambda) {
  const Vec3<double> probes[] = {lambda};
  return estimate_chi(config, std::span<const Vec3<double>>(probes)).estimates.front();
}

PhasePoint phase_point(std::span<const UnitVec3d> path, const ModelConfig& model, Observable obs) {
  const LoopAmplitude amp{path_weight(path, model, WeightMode::exponentiated)};
  return {observable_value(path, model.s, obs), amp.berry_phase()};
}

std::vector<PhasePoint> phase_scatter(const RunConfig& config, std::size_t max_points) {
  config.validate();
  if (max_points < 1) throw std::invalid_argument("phase_scatter: max_points must be >= 1");
  std::mt19937_64 rng(stream_seed(config.seed, 0));
  std::vector<UnitVec3d> path(config.vertices);
  std::vector<PhasePoint> out;
  out.reserve(max_points);
  for (std::size_t i = 0; i < max_points; ++i) {
    draw_path(rng, path);
    out.push_back(phase_point(path, config.model, config.observable));
  }
  return out;
}

}  // namespace spinpcd
