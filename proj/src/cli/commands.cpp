#include "cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cli/output.hpp"
#include "skewspec/density.hpp"
#include "skewspec/ensemble.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/fekete.hpp"
#include "skewspec/jacobian.hpp"
#include "skewspec/optimize.hpp"
#include "skewspec/rng.hpp"
#include "skewspec/sampler.hpp"

namespace skewspec::cli {

namespace {

constexpr double kKsThreshold = 0.05;

nlohmann::json spectrum_json(const SkewSpectrum& s) { return s.interleaved(); }

void emit(RunContext& ctx, const std::string& name, const std::string& text) {
  write_file(*ctx.out_dir, name, text);
  ctx.manifest.artifacts.push_back(name);
}

void emit_json(RunContext& ctx, const std::string& name, const nlohmann::json& j) {
  emit(ctx, name, j.dump(2) + "\n");
}

struct TrialOutcome {
  std::optional<SkewSpectrum> spectrum;
  GramResult gram;
  double log_closed = 0.0;
  double rel_err = 0.0;
  double shape_ratio = 0.0;
  std::optional<DegenerateJacobian> degenerate;
};

TrialOutcome run_trial(const SkewSpectrum& s, const WeightSpec& w) {
  TrialOutcome t;
  t.spectrum = s;
  try {
    t.gram = gram_determinant(s);
  } catch (const DegenerateJacobian& e) {
    t.degenerate = e;
    return t;
  }
  t.log_closed = log_closed_form_gram(s);
  t.rel_err = std::abs(std::expm1(t.gram.log_determinant - t.log_closed));
  t.shape_ratio = density_shape_ratio(s, w);
  return t;
}

// x1,y1,...,xp,yp header.
std::vector<std::string> interleaved_header(int p) {
  std::vector<std::string> h;
  for (int k = 1; k <= p; ++k) {
    h.push_back("x" + std::to_string(k));
    h.push_back("y" + std::to_string(k));
  }
  return h;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Empty optional when some field is not a finite number.
std::optional<std::vector<double>> parse_row(std::string_view line) {
  std::vector<double> v;
  while (true) {
    const auto comma = line.find(',');
    const std::string_view field = trim(line.substr(0, comma));
    double d = 0.0;
    const char* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, d);
    if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(d)) return std::nullopt;
    v.push_back(d);
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return v;
}

}  // namespace

int cmd_verify_jacobian(const VerifyJacobianOptions& o, RunContext& ctx) {
  const WeightSpec w = WeightSpec::gaussian(o.gamma);
  std::vector<TrialOutcome> trials;
  if (!o.spectrum.empty()) {
    if (o.spectrum.size() % 2 != 0) {
      *ctx.err << "verify-jacobian: --spectrum needs an even number of values\n";
      return kUsage;
    }
    SkewSpectrum s = SkewSpectrum::from_interleaved(o.spectrum);
    trials.push_back(run_trial(s, w));
  } else {
    trials.resize(static_cast<std::size_t>(o.trials));
    parallel_for(o.trials, ctx.threads, [&](int t) {
      Rng rng(derive_seed(ctx.seed, static_cast<std::uint64_t>(t)));
      trials[static_cast<std::size_t>(t)] = run_trial(random_generic_spectrum(o.p, 0.1, 5.0, 1e-3, rng), w);
    });
  }

  nlohmann::json rows = nlohmann::json::array();
  double max_err = 0.0;
  std::vector<double> ratios;
  const TrialOutcome* failed = nullptr;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& tr = trials[t];
    nlohmann::json row = {{"trial", t}, {"spectrum", spectrum_json(*tr.spectrum)}};
    if (tr.degenerate) {
      row["degenerate"] = {{"rank", tr.degenerate->rank()},
                           {"expected_rank", tr.degenerate->expected_rank()}};
      if (!failed) failed = &tr;
    } else {
      row["gram"] = json_number(tr.gram.determinant);
      row["log_gram"] = tr.gram.log_determinant;
      row["closed_form"] = json_number(std::exp(tr.log_closed));
      row["log_closed_form"] = tr.log_closed;
      row["rel_err"] = tr.rel_err;
      row["density_shape_ratio"] = json_number(tr.shape_ratio);
      max_err = std::max(max_err, tr.rel_err);
      ratios.push_back(tr.shape_ratio);
    }
    rows.push_back(std::move(row));
  }

  nlohmann::json report = {{"p", trials.front().spectrum->size()},
                           {"trials", trials.size()},
                           {"gamma", o.gamma},
                           {"seed", ctx.seed},
                           {"tolerance", o.tolerance},
                           {"max_rel_err", max_err},
                           {"results", rows}};
  if (ratios.size() > 1) {
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    report["density_shape_cv"] = std::sqrt(var / static_cast<double>(ratios.size())) / mean;
  }
  const bool pass = !failed && max_err <= o.tolerance;
  report["pass"] = pass;
  if (failed) {
    report["degenerate_spectrum"] = failed->degenerate->spectrum();
    report["degenerate_reason"] = failed->degenerate->what();
  }
  emit_json(ctx, "report.json", report);

  *ctx.out << "max_rel_err " << format_double(max_err) << (pass ? " PASS" : " FAIL") << '\n';
  if (failed) {
    *ctx.err << "verify-jacobian: degenerate Jacobian at spectrum";
    for (double v : failed->spectrum->interleaved()) *ctx.err << ' ' << format_double(v);
    *ctx.err << '\n';
    return kNumericalFailure;
  }
  return pass ? kSuccess : kNumericalFailure;
}

int cmd_fekete(const FeketeOptions& o, RunContext& ctx) {
  const bool anti = o.mode == "anti";
  if (anti && o.n % 2 != 0) {
    *ctx.err << "fekete: --n must be even in anti mode\n";
    return kUsage;
  }
  const double gamma = o.gamma.value_or(anti ? 1.0 : 0.5);
  OptimizerConfig cfg;
  cfg.restarts = o.restarts;
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  cfg.max_iters = o.max_iters;
  cfg.trace_stride = 100;

  std::vector<std::array<double, 2>> points;
  nlohmann::json stats = {{"mode", o.mode}, {"n", o.n}, {"gamma", gamma}, {"seed", ctx.seed}};
  double reference_radius;
  bool converged;
  if (anti) {
    const int p = o.n / 2;
    const FeketeResult r = minimize_tau(p, cfg);
    // tau with weight coefficient gamma is minimized by the gamma = 1 optimum scaled by 1/sqrt(gamma).
    const double s = 1.0 / std::sqrt(gamma);
    const SkewSpectrum scaled = r.points.scaled(s);
    points = as_planar(scaled);
    const double log_terms = 3.0 * p + 4.0 * p * (p - 1.0);
    reference_radius = 2.0 * std::sqrt(o.n / gamma);
    converged = r.converged;
    const SpacingStats st = spacing_stats(scaled.points());
    stats.update({{"tau_final", r.tau_final - log_terms * std::log(s)},
                  {"grad_norm", r.grad_norm_final / s},
                  {"iterations", r.iterations},
                  {"converged", r.converged},
                  {"best_restart", r.best_restart},
                  {"k_bound", r.k_bound * s},
                  {"nn_mean", st.nn_mean},
                  {"nn_cv", st.nn_cv},
                  {"max_norm", st.max_norm},
                  {"fekete_max_norm", st.max_norm / std::sqrt(static_cast<double>(p))},
                  {"reference_radius", reference_radius}});
  } else {
    const CommutingResult r = minimize_commuting(o.n, gamma, cfg);
    points = r.points;
    reference_radius = std::sqrt(o.n / gamma);
    converged = r.converged;
    const SpacingStats st = spacing_stats(std::span<const std::array<double, 2>>(points));
    stats.update({{"value_final", r.value_final},
                  {"grad_norm", r.grad_norm_final},
                  {"iterations", r.iterations},
                  {"converged", r.converged},
                  {"best_restart", r.best_restart},
                  {"nn_mean", st.nn_mean},
                  {"nn_cv", st.nn_cv},
                  {"max_norm", st.max_norm},
                  {"reference_radius", reference_radius}});
  }

  std::vector<std::vector<double>> rows;
  for (const auto& pt : points) rows.push_back({pt[0], pt[1]});
  emit(ctx, "points.csv", csv_table({"x", "y"}, rows));
  emit_json(ctx, "stats.json", stats);
  emit(ctx, "figure.svg",
       scatter_svg(
           points, reference_radius, anti,
           (anti ? "anti-commuting maximizer, n = " : "commuting maximizer, n = ") + std::to_string(o.n)));

  *ctx.out << "max_norm " << format_double(stats["max_norm"].get<double>()) << " reference_radius "
           << format_double(reference_radius) << (converged ? "" : " (not converged)") << '\n';
  if (!converged) {
    *ctx.err << "fekete: optimizer did not reach the gradient tolerance\n";
    return kNumericalFailure;
  }
  return kSuccess;
}

int cmd_sample(const SampleOptions& o, RunContext& ctx) {
  const WeightSpec w = WeightSpec::gaussian(o.gamma);
  ChainSettings settings;
  settings.n_samples = o.samples;
  settings.burn_in = o.burn_in;
  settings.thinning = o.thinning;
  settings.seed = ctx.seed;
  const ChainReport chain = run_chain(o.p, w, settings);

  std::vector<std::vector<double>> rows;
  rows.reserve(chain.samples.size());
  for (const auto& s : chain.samples) rows.push_back(s.interleaved());
  emit(ctx, "samples.csv", csv_table(interleaved_header(o.p), rows));

  nlohmann::json info = {{"p", o.p},
                         {"gamma", o.gamma},
                         {"samples", chain.samples.size()},
                         {"burn_in", chain.burn_in},
                         {"thinning", chain.thinning},
                         {"seed", chain.seed},
                         {"acceptance_rate", chain.acceptance_rate},
                         {"step_scale", chain.step_scale}};
  int code = kSuccess;
  if (o.p == 1 && chain.samples.size() >= 1000) {
    const QuadratureCdf cdf = p1_quadrature_cdf(w, o.ks_resolution);
    const KsResult ks = ks_compare(chain.samples, cdf);
    const double stat = std::max(ks.statistic_x, ks.statistic_y);
    const bool pass = stat < kKsThreshold;
    emit_json(ctx, "ks.json",
              {{"statistic_x", ks.statistic_x},
               {"statistic_y", ks.statistic_y},
               {"statistic", stat},
               {"threshold", kKsThreshold},
               {"pass", pass},
               {"samples", ks.samples},
               {"quadrature_length", cdf.length},
               {"quadrature_resolution", cdf.resolution}});
    *ctx.out << "ks_statistic " << format_double(stat) << (pass ? " PASS" : " FAIL") << '\n';
    code = pass ? kSuccess : kNumericalFailure;
  } else if (o.p == 1) {
    info["ks"] = "skipped: needs at least 1000 samples";
  }
  emit_json(ctx, "chain.json", info);
  *ctx.out << "acceptance_rate " << format_double(chain.acceptance_rate) << '\n';
  return code;
}

int cmd_density(const DensityOptions& o, RunContext& ctx) {
  const WeightSpec w = WeightSpec::gaussian(o.gamma);
  std::ifstream file;
  std::istream* in = &std::cin;
  if (o.points != "-") {
    file.open(o.points);
    if (!file) {
      *ctx.err << "density: cannot read " << o.points << '\n';
      return kDataFormat;
    }
    in = &file;
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  bool seen_content = false;
  while (std::getline(*in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto row = parse_row(line);
    if (!row) {
      if (!seen_content) {  // header row
        seen_content = true;
        continue;
      }
      *ctx.err << "density: line " << lineno << ": expected comma-separated finite numbers\n";
      return kDataFormat;
    }
    seen_content = true;
    if (row->size() % 2 != 0) {
      *ctx.err << "density: line " << lineno << ": odd number of columns (" << row->size() << ")\n";
      return kDataFormat;
    }
    std::vector<Point> pts;
    for (std::size_t k = 0; k < row->size(); k += 2) pts.push_back({(*row)[k], (*row)[k + 1]});
    rows.push_back({log_rho(pts, w).log_unnormalized, tau(pts)});
  }
  if (rows.empty()) {
    *ctx.err << "density: no data rows in " << o.points << '\n';
    return kDataFormat;
  }
  const std::string table = csv_table({"log_rho", "tau"}, rows);
  *ctx.out << table;
  if (ctx.out_dir) emit(ctx, "density.csv", table);
  return kSuccess;
}

int cmd_kbound(const KboundOptions& o, RunContext& ctx) {
  const double k = solve_k_bound(o.p);
  const std::string table =
      csv_table({"p", "K", "lhs"}, {{static_cast<double>(o.p), k, k_bound_lhs(k, o.p)}});
  *ctx.out << table;
  if (ctx.out_dir) emit(ctx, "kbound.csv", table);
  return kSuccess;
}

}  // namespace skewspec::cli
