#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "output.hpp"
#include "spinpcd/exact_ref.hpp"
#include "spinpcd/mc_engine.hpp"

namespace spinpcd::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("invalid ") + what + " '" + text + "'");
  }
}

HalfInteger parse_spin(const std::string& text) {
  try {
    return HalfInteger::parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

/// "Bz" or "x,y,z".
Vec3<double> parse_vec3(const std::string& text, const char* what, bool scalar_is_z) {
  const auto parts = split(text, ',');
  if (parts.size() == 1 && scalar_is_z) return {0.0, 0.0, parse_double(parts[0], what)};
  if (parts.size() != 3) throw UsageError(std::string("invalid ") + what + " '" + text + "'");
  return {parse_double(parts[0], what), parse_double(parts[1], what), parse_double(parts[2], what)};
}

std::string vec3_text(const Vec3<double>& v) {
  return format_number(v.x()) + "," + format_number(v.y()) + "," + format_number(v.z());
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
  return s;
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Writes the record to `path` (or `fallback` for "" / "-").
void emit(const OutputRecord& record, const std::string& path, bool json, std::ostream& fallback) {
  auto write = [&](std::ostream& os) { json ? write_json(record, os) : write_csv(record, os); };
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(f);
}

void common_header(OutputRecord& rec, const std::string& command, const std::vector<std::string>& canonical) {
  rec.meta("spinpcd", kVersion);
  rec.meta("command", command);
  rec.meta("args", join(canonical));
}

void diagnostics_header(OutputRecord& rec, const RunDiagnostics& d) {
  rec.meta("average_sign", format_number(d.average_sign.value));
  rec.meta("average_sign_error", format_number(d.average_sign.error));
  rec.meta("sum_re", format_number(d.totals.sum_re));
  rec.meta("sum_abs", format_number(d.totals.sum_abs));
  rec.meta("sum_im", format_number(d.totals.sum_im));
  rec.meta("sample_count", std::to_string(d.totals.count));
  rec.meta("imag_mean", format_number(d.imag_mean.value));
  rec.meta("imag_mean_error", format_number(d.imag_mean.error));
  rec.meta("underflow_count", std::to_string(d.underflow_count));
  rec.meta("overflow_count", std::to_string(d.overflow_count));
}

// ---------------------------------------------------------------------------
// pcd

struct PcdOptions {
  std::string spin;
  unsigned vertices = 0;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  double beta = 0.0;
  std::string field = "0";
  std::string observable = "radial";
  std::size_t bins = 120;
  std::string smax;  // default s + 1.5
  unsigned workers = default_workers();
  std::size_t batches = 100;
  std::string out;
  bool json = false;
  bool grid = false;
  std::string grid_spins = "0,1/2,1,3/2";
  std::string grid_vertices = "2,3,5,10,15";
};

int run_pcd_panel(const PcdOptions& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.model.s = parse_spin(o.spin);
  cfg.model.beta = o.beta;
  cfg.model.field = parse_vec3(o.field, "field", true);
  cfg.vertices = o.vertices;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.batches = o.batches;
  try {
    cfg.observable = parse_observable(o.observable);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const double smax = o.smax.empty() ? cfg.model.s.value() + 1.5 : parse_double(o.smax, "smax");
  cfg.bins = cfg.observable == Observable::radial_spin ? BinSpec{o.bins, 0.0, smax} : BinSpec{o.bins, -smax, smax};
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const std::vector<std::string> canonical = {
      "pcd",          "--spin",    cfg.model.s.to_string(),
      "--vertices",   std::to_string(cfg.vertices),
      "--samples",    std::to_string(cfg.samples),
      "--seed",       std::to_string(cfg.seed),
      "--beta",       format_number(cfg.model.beta),
      "--field",      vec3_text(cfg.model.field),
      "--observable", to_string(cfg.observable),
      "--bins",       std::to_string(cfg.bins.bins),
      "--smax",       format_number(smax),
      "--batches",    std::to_string(cfg.batches),
      "--workers",    std::to_string(cfg.workers)};

  OutputRecord rec;
  common_header(rec, "pcd", canonical);
  rec.meta("spin", cfg.model.s.to_string());
  rec.meta("vertices", std::to_string(cfg.vertices));
  rec.meta("samples", std::to_string(cfg.samples));
  rec.meta("seed", std::to_string(cfg.seed));
  rec.meta("beta", format_number(cfg.model.beta));
  rec.meta("field", vec3_text(cfg.model.field));
  rec.meta("observable", to_string(cfg.observable));
  rec.meta("bins", std::to_string(cfg.bins.bins));
  rec.meta("range", format_number(cfg.bins.lo) + ":" + format_number(cfg.bins.hi));
  rec.meta("batches", std::to_string(cfg.effective_batches()));
  rec.meta("workers", std::to_string(cfg.workers));
  rec.columns = {"S_lo", "S_hi", "density", "stderr"};

  try {
    const PcdResult res = run_pcd(cfg);
    rec.meta("status", "ok");
    diagnostics_header(rec, res.diagnostics);
    rec.meta("underflow_fraction", format_number(res.histogram.underflow_fraction));
    rec.meta("overflow_fraction", format_number(res.histogram.overflow_fraction));
    for (std::size_t k = 1; k < res.moments.raw.size(); ++k) {
      rec.meta("moment_" + std::to_string(k), format_number(res.moments.raw[k].value));
      rec.meta("moment_" + std::to_string(k) + "_error", format_number(res.moments.raw[k].error));
    }
    static constexpr const char* kAxes[] = {"xx", "yy", "zz"};
    for (std::size_t mu = 0; mu < 3; ++mu) {
      rec.meta(std::string("cumulant_") + kAxes[mu], format_number(res.moments.cumulant[mu].value));
      rec.meta(std::string("cumulant_") + kAxes[mu] + "_error", format_number(res.moments.cumulant[mu].error));
    }
    rec.meta("wall_seconds", format_number(res.diagnostics.wall_seconds));
    const auto& h = res.histogram;
    for (std::size_t b = 0; b < h.spec.bins; ++b)
      rec.rows.push_back({h.spec.edge(b), h.spec.edge(b + 1), h.density[b], h.error[b]});
    emit(rec, o.out, o.json, out);
    return kExitOk;
  } catch (const RunFailure& f) {
    rec.meta("status", "sign-problem");
    diagnostics_header(rec, f.diagnostics());
    rec.meta("wall_seconds", format_number(f.diagnostics().wall_seconds));
    emit(rec, o.out, o.json, out);
    err << "spinpcd pcd: " << f.what() << '\n';
    return kExitSignProblem;
  }
}

int run_pcd_grid(const PcdOptions& o, std::ostream& out, std::ostream& err) {
  if (o.out.empty() || o.out == "-") throw UsageError("--grid needs --out <directory>");
  std::filesystem::create_directories(o.out);
  int status = kExitOk;
  for (const auto& spin_text : split(o.grid_spins, ',')) {
    const HalfInteger s = parse_spin(spin_text);
    for (const auto& l_text : split(o.grid_vertices, ',')) {
      PcdOptions panel = o;
      panel.grid = false;
      panel.spin = spin_text;
      panel.vertices = static_cast<unsigned>(parse_double(l_text, "vertex count"));
      panel.smax.clear();
      std::string tag = s.to_string();
      std::replace(tag.begin(), tag.end(), '/', '-');
      const std::string name = "pcd_s" + tag + "_L" + l_text + (o.json ? ".json" : ".csv");
      panel.out = (std::filesystem::path(o.out) / name).string();
      const int rc = run_pcd_panel(panel, out, err);
      if (rc != kExitOk) status = rc;
      err << "wrote " << panel.out << '\n';
    }
  }
  return status;
}

// ---------------------------------------------------------------------------
// exact

struct ExactOptions {
  std::string spin;
  unsigned vertices = 0;
  std::string srange;  // default 0:s+1.5
  unsigned points = 601;
  std::string out;
  std::string zeros_out;
  bool json = false;
};

int run_exact(const ExactOptions& o, std::ostream& out) {
  const HalfInteger s = parse_spin(o.spin);
  if (o.vertices < 1) throw UsageError("--vertices must be >= 1");
  if (o.points < 2) throw UsageError("--points must be >= 2");
  double lo = 0.0, hi = s.value() + 1.5;
  if (!o.srange.empty()) {
    const auto parts = split(o.srange, ':');
    if (parts.size() != 2) throw UsageError("--srange expects lo:hi");
    lo = parse_double(parts[0], "srange");
    hi = parse_double(parts[1], "srange");
  }
  if (!(lo >= 0.0) || !(lo < hi)) throw UsageError("--srange needs 0 <= lo < hi");

  const std::vector<std::string> canonical = {
      "exact",    "--spin",   s.to_string(),  "--vertices", std::to_string(o.vertices),
      "--srange", format_number(lo) + ":" + format_number(hi), "--points", std::to_string(o.points)};

  OutputRecord curve;
  common_header(curve, "exact", canonical);
  curve.meta("spin", s.to_string());
  curve.meta("vertices", std::to_string(o.vertices));
  curve.meta("variance", format_number((s.value() + 1.0) / (3.0 * o.vertices)));
  curve.columns = {"S", "density"};
  double trapezoid = 0.0;
  std::vector<double> sign_changes;
  double prev_x = 0.0, prev_f = 0.0;
  for (unsigned i = 0; i < o.points; ++i) {
    // Endpoint-exact grid: lo + (hi - lo) i / (points - 1).
    const double x = (i + 1 == o.points) ? hi : lo + (hi - lo) * double(i) / double(o.points - 1);
    const double f = smeared_wigner_radial(x, s, o.vertices);
    curve.rows.push_back({x, f});
    if (i > 0) {
      trapezoid += 0.5 * (f + prev_f) * (x - prev_x);
      if ((prev_f < 0.0 && f > 0.0) || (prev_f > 0.0 && f < 0.0))
        sign_changes.push_back(prev_x - prev_f * (x - prev_x) / (f - prev_f));
    }
    prev_x = x;
    prev_f = f;
  }
  curve.meta("trapezoid_integral", format_number(trapezoid));
  std::string changes;
  for (double z : sign_changes) changes += (changes.empty() ? "" : ",") + format_number(z);
  curve.meta("sign_changes", changes.empty() ? "none" : changes);

  OutputRecord zeros;
  common_header(zeros, "exact", canonical);
  zeros.meta("spin", s.to_string());
  zeros.columns = {"kind", "index", "cos_theta", "S"};
  if (s.twice() >= 1) {
    for (auto kind : {ZeroLadder::exact, ZeroLadder::heuristic}) {
      const auto ladder = zero_locations(s, kind);
      for (std::size_t i = 0; i < ladder.size(); ++i)
        zeros.rows.push_back({std::string(kind == ZeroLadder::exact ? "exact" : "heuristic"),
                              static_cast<long long>(i), ladder[i], (s.value() + 1.0) * ladder[i]});
    }
  }

  std::string zeros_path = o.zeros_out;
  if (zeros_path.empty() && !o.out.empty() && o.out != "-") zeros_path = o.out + ".zeros" + (o.json ? ".json" : ".csv");
  emit(curve, o.out, o.json, out);
  if (!zeros_path.empty()) emit(zeros, zeros_path, o.json, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// chi

struct ChiOptions {
  std::string spin;
  unsigned vertices = 0;
  double beta = 0.0;
  std::string field = "0";
  std::vector<std::string> lambdas;
  std::string lambda_grid;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = default_workers();
  std::size_t batches = 100;
  std::string out;
  bool json = false;
};

/// "axis:start:stop:count", axis in {x, y, z}.
std::vector<Vec3<double>> parse_lambda_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 || parts[0].size() != 1 || std::string("xyz").find(parts[0][0]) == std::string::npos)
    throw UsageError("--lambda-grid expects axis:start:stop:count, e.g. z:0:3:7");
  const int axis = int(std::string("xyz").find(parts[0][0]));
  const double a = parse_double(parts[1], "lambda-grid start");
  const double b = parse_double(parts[2], "lambda-grid stop");
  const double n = parse_double(parts[3], "lambda-grid count");
  if (n < 1 || n != std::round(n)) throw UsageError("--lambda-grid count must be a positive integer");
  std::vector<Vec3<double>> out;
  for (int i = 0; i < int(n); ++i) {
    Vec3<double> v = Vec3<double>::Zero();
    v(axis) = n == 1 ? a : a + (b - a) * double(i) / (n - 1);
    out.push_back(v);
  }
  return out;
}

int run_chi(const ChiOptions& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.model.s = parse_spin(o.spin);
  cfg.model.beta = o.beta;
  cfg.model.field = parse_vec3(o.field, "field", true);
  cfg.vertices = o.vertices;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.batches = o.batches;
  for (const auto& l : o.lambdas) cfg.probes.push_back(parse_vec3(l, "lambda", false));
  if (!o.lambda_grid.empty())
    for (const auto& v : parse_lambda_grid(o.lambda_grid)) cfg.probes.push_back(v);
  if (cfg.probes.empty()) cfg.probes = parse_lambda_grid("z:0:3:7");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.model.s.dimension() > kMaxOracleDimension) throw UsageError("spin too large for the matrix oracle");

  std::vector<std::string> canonical = {
      "chi",       "--spin",    cfg.model.s.to_string(),  "--vertices", std::to_string(cfg.vertices),
      "--beta",    format_number(cfg.model.beta),          "--field",    vec3_text(cfg.model.field),
      "--samples", std::to_string(cfg.samples),            "--seed",     std::to_string(cfg.seed),
      "--batches", std::to_string(cfg.batches),            "--workers",  std::to_string(cfg.workers)};
  for (const auto& p : cfg.probes) {
    canonical.push_back("--lambda");
    canonical.push_back(vec3_text(p));
  }

  OutputRecord rec;
  common_header(rec, "chi", canonical);
  rec.meta("spin", cfg.model.s.to_string());
  rec.meta("vertices", std::to_string(cfg.vertices));
  rec.meta("beta", format_number(cfg.model.beta));
  rec.meta("field", vec3_text(cfg.model.field));
  rec.meta("samples", std::to_string(cfg.samples));
  rec.meta("seed", std::to_string(cfg.seed));
  rec.columns = {"lambda_x", "lambda_y", "lambda_z", "mc_re",     "mc_im",         "stderr_re",
                 "stderr_im", "stderr",  "oracle_re", "oracle_im", "sigma_distance"};
  try {
    const ChiResult res = estimate_chi(cfg, cfg.probes);
    rec.meta("status", "ok");
    diagnostics_header(rec, res.diagnostics);
    double worst = 0.0;
    for (const auto& e : res.estimates) {
      const auto oracle = trotter_chi(cfg.model.s, cfg.model.beta, cfg.model.field, e.lambda, cfg.vertices);
      const double delta = std::abs(e.value - oracle);
      const double sigma = e.error();
      const double dist = delta == 0.0 ? 0.0 : (sigma > 0.0 ? delta / sigma : INFINITY);
      worst = std::max(worst, dist);
      rec.rows.push_back({e.lambda.x(), e.lambda.y(), e.lambda.z(), e.value.real(), e.value.imag(), e.error_re,
                          e.error_im, sigma, oracle.real(), oracle.imag(), dist});
    }
    rec.meta("max_sigma_distance", format_number(worst));
    rec.meta("wall_seconds", format_number(res.diagnostics.wall_seconds));
    emit(rec, o.out, o.json, out);
    return kExitOk;
  } catch (const RunFailure& f) {
    rec.meta("status", "sign-problem");
    diagnostics_header(rec, f.diagnostics());
    emit(rec, o.out, o.json, out);
    err << "spinpcd chi: " << f.what() << '\n';
    return kExitSignProblem;
  }
}

// ---------------------------------------------------------------------------
// phase-scatter

struct PhaseOptions {
  std::string spin = "1/2";
  unsigned vertices = 3;
  std::size_t points = 1000;
  std::uint64_t seed = 1;
  double beta = 0.0;
  std::string field = "0";
  std::string out;
  bool json = false;
};

int run_phase(const PhaseOptions& o, std::ostream& out) {
  RunConfig cfg;
  cfg.model.s = parse_spin(o.spin);
  cfg.model.beta = o.beta;
  cfg.model.field = parse_vec3(o.field, "field", true);
  cfg.vertices = o.vertices;
  cfg.seed = o.seed;
  cfg.samples = o.points;
  try {
    cfg.validate();
    if (o.points < 1) throw std::invalid_argument("--points must be >= 1");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::vector<std::string> canonical = {
      "phase-scatter", "--spin",  cfg.model.s.to_string(), "--vertices", std::to_string(cfg.vertices),
      "--points",      std::to_string(o.points),           "--seed",     std::to_string(cfg.seed),
      "--beta",        format_number(cfg.model.beta),       "--field",    vec3_text(cfg.model.field)};
  const auto pts = phase_scatter(cfg, o.points);

  OutputRecord rec;
  common_header(rec, "phase-scatter", canonical);
  rec.meta("spin", cfg.model.s.to_string());
  rec.meta("vertices", std::to_string(cfg.vertices));
  rec.meta("points", std::to_string(o.points));
  rec.meta("seed", std::to_string(cfg.seed));
  rec.columns = {"S", "phase"};
  std::vector<double> phases;
  phases.reserve(pts.size());
  for (const auto& p : pts) {
    rec.rows.push_back({p.observable, p.phase});
    phases.push_back(p.phase);
  }
  rec.meta("ks_uniform_statistic", format_number(ks_uniform_statistic(phases, -std::numbers::pi, std::numbers::pi)));
  if (cfg.model.s.twice() == 1 && cfg.vertices == 3) {
    // |phase| < pi/2 exactly when S > 1/2, outside a 1e-9 band.
    long long violations = 0;
    for (const auto& p : pts) {
      if (std::abs(p.observable - 0.5) < 1e-9 || std::abs(std::abs(p.phase) - std::numbers::pi / 2) < 1e-9) continue;
      if ((std::abs(p.phase) < std::numbers::pi / 2) != (p.observable > 0.5)) ++violations;
    }
    rec.meta("sign_law_violations", std::to_string(violations));
  }
  emit(rec, o.out, o.json, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Path-centroid distributions of spin coherent-state paths"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  PcdOptions pcd;
  auto* pcd_cmd = app.add_subcommand("pcd", "Monte Carlo path-centroid histogram");
  pcd_cmd->add_option("--spin", pcd.spin, "spin s: n, n/2 or decimal");
  pcd_cmd->add_option("--vertices,-L", pcd.vertices, "polygon vertices L")->check(CLI::PositiveNumber);
  pcd_cmd->add_option("--samples,-N", pcd.samples, "sampled paths")->check(CLI::PositiveNumber);
  pcd_cmd->add_option("--seed", pcd.seed, "random seed");
  pcd_cmd->add_option("--beta", pcd.beta, "inverse temperature");
  pcd_cmd->add_option("--field", pcd.field, "Zeeman field Bz or x,y,z");
  pcd_cmd->add_option("--observable", pcd.observable, "radial or z");
  pcd_cmd->add_option("--bins", pcd.bins, "histogram bins")->check(CLI::PositiveNumber);
  pcd_cmd->add_option("--smax", pcd.smax, "histogram upper edge (default s+1.5)");
  pcd_cmd->add_option("--workers", pcd.workers, "worker threads")->check(CLI::PositiveNumber);
  pcd_cmd->add_option("--batches", pcd.batches, "batch-means blocks")->check(CLI::PositiveNumber);
  pcd_cmd->add_option("--out,-o", pcd.out, "output file (directory with --grid)");
  pcd_cmd->add_flag("--json", pcd.json, "emit JSON instead of CSV");
  pcd_cmd->add_flag("--grid", pcd.grid, "run every (spin, L) panel of the default grid");
  pcd_cmd->add_option("--grid-spins", pcd.grid_spins, "comma-separated spins for --grid");
  pcd_cmd->add_option("--grid-vertices", pcd.grid_vertices, "comma-separated L values for --grid");

  ExactOptions exact;
  auto* exact_cmd = app.add_subcommand("exact", "Smeared Wigner radial curve and zero ladders");
  exact_cmd->add_option("--spin", exact.spin)->required();
  exact_cmd->add_option("--vertices,-L", exact.vertices)->required()->check(CLI::PositiveNumber);
  exact_cmd->add_option("--srange", exact.srange, "lo:hi (default 0:s+1.5)");
  exact_cmd->add_option("--points", exact.points, "grid points");
  exact_cmd->add_option("--out,-o", exact.out);
  exact_cmd->add_option("--zeros-out", exact.zeros_out, "zero-ladder file (default <out>.zeros.csv)");
  exact_cmd->add_flag("--json", exact.json);

  ChiOptions chi;
  auto* chi_cmd = app.add_subcommand("chi", "Characteristic function: Monte Carlo vs matrix trace");
  chi_cmd->add_option("--spin", chi.spin)->required();
  chi_cmd->add_option("--vertices,-L", chi.vertices)->required()->check(CLI::PositiveNumber);
  chi_cmd->add_option("--beta", chi.beta);
  chi_cmd->add_option("--field", chi.field, "Bz or x,y,z");
  chi_cmd->add_option("--lambda", chi.lambdas, "probe vector x,y,z (repeatable)");
  chi_cmd->add_option("--lambda-grid", chi.lambda_grid, "axis:start:stop:count");
  chi_cmd->add_option("--samples,-N", chi.samples)->check(CLI::PositiveNumber);
  chi_cmd->add_option("--seed", chi.seed);
  chi_cmd->add_option("--workers", chi.workers)->check(CLI::PositiveNumber);
  chi_cmd->add_option("--batches", chi.batches)->check(CLI::PositiveNumber);
  chi_cmd->add_option("--out,-o", chi.out);
  chi_cmd->add_flag("--json", chi.json);

  PhaseOptions phase;
  auto* phase_cmd = app.add_subcommand("phase-scatter", "Centroid magnitude vs Berry phase of random polygons");
  phase_cmd->add_option("--spin", phase.spin);
  phase_cmd->add_option("--vertices,-L", phase.vertices)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--points", phase.points)->check(CLI::PositiveNumber);
  phase_cmd->add_option("--seed", phase.seed);
  phase_cmd->add_option("--beta", phase.beta);
  phase_cmd->add_option("--field", phase.field);
  phase_cmd->add_option("--out,-o", phase.out);
  phase_cmd->add_flag("--json", phase.json);

  std::string replay_file, replay_out;
  bool replay_json = false;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the configuration embedded in an output file");
  replay_cmd->add_option("file", replay_file)->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--out,-o", replay_out);
  replay_cmd->add_flag("--json", replay_json);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "spinpcd: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*pcd_cmd) {
      if (pcd.grid) return run_pcd_grid(pcd, out, err);
      if (pcd.spin.empty() || pcd.vertices == 0) throw UsageError("pcd needs --spin and --vertices (or --grid)");
      return run_pcd_panel(pcd, out, err);
    }
    if (*exact_cmd) return run_exact(exact, out);
    if (*chi_cmd) return run_chi(chi, out, err);
    if (*phase_cmd) return run_phase(phase, out);
    if (*replay_cmd) {
      std::ifstream f(replay_file);
      const OutputRecord meta = read_csv_metadata(f);
      const std::string* line = meta.find_meta("args");
      if (!line) throw UsageError("'" + replay_file + "' carries no '# args:' line");
      auto replay_args = split(*line, ' ');
      if (!replay_out.empty()) {
        replay_args.push_back("--out");
        replay_args.push_back(replay_out);
      }
      if (replay_json) replay_args.push_back("--json");
      return run(replay_args, out, err);
    }
  } catch (const UsageError& e) {
    err << "spinpcd: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "spinpcd: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}

}  // namespace spinpcd::cli
