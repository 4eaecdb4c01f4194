#include "skewspec/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>

#include "cli/commands.hpp"
#include "cli/output.hpp"
#include "skewspec/errors.hpp"
#include "skewspec/kernels.hpp"

#ifndef SKEWSPEC_VERSION
#define SKEWSPEC_VERSION "0.0.0"
#endif

namespace skewspec::cli {

namespace {

std::optional<std::uint64_t> parse_seed(const char* text) {
  if (!text || !*text) return std::nullopt;
  std::uint64_t v = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto res = std::from_chars(text, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw std::invalid_argument(text);
  return v;
}

template <class T>
std::string param(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_floating_point_v<T>) {
    return format_double(v);
  } else {
    return std::to_string(v);
  }
}

}  // namespace

std::string version_string() {
  return std::string("skewspec ") + SKEWSPEC_VERSION + " (" +
         std::string(kernels::isa_name(kernels::active().isa)) + ")";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random anti-commuting Hermitian pairs: Jacobian checks, maximizers, sampling"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out_dir;
  const auto add_common = [&](CLI::App* sub, bool out_required) {
    sub->add_option("--seed", seed, "RNG seed (default: $SKEWSPEC_SEED, else 0)");
    sub->add_option("--threads", threads, "maximum worker threads; 1 is bit-reproducible")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* o = sub->add_option("--out", out_dir, "output directory");
    if (out_required) o->required();
  };

  std::function<int(RunContext&)> action;
  std::map<std::string, std::string> params;

  VerifyJacobianOptions vj;
  auto* vj_cmd =
      app.add_subcommand("verify-jacobian", "compare the numeric Gram determinant with its closed form");
  vj_cmd->add_option("--p", vj.p, "number of skew-spectrum points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vj_cmd->add_option("--trials", vj.trials, "random generic spectra")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vj_cmd->add_option("--gamma", vj.gamma, "Gaussian weight coefficient")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  vj_cmd->add_option("--spectrum", vj.spectrum, "explicit spectrum x1,y1,...,xp,yp (replaces random trials)")
      ->delimiter(',');
  add_common(vj_cmd, true);
  vj_cmd->callback([&] {
    params = {{"p", param(vj.p)}, {"trials", param(vj.trials)}, {"gamma", param(vj.gamma)}};
    if (!vj.spectrum.empty()) {
      std::string s;
      for (double v : vj.spectrum) s += (s.empty() ? "" : ",") + format_double(v);
      params["spectrum"] = s;
    }
    action = [&](RunContext& ctx) { return cmd_verify_jacobian(vj, ctx); };
  });

  FeketeOptions fk;
  double fk_gamma = 0.0;
  auto* fk_cmd = app.add_subcommand("fekete", "maximum-likelihood point configuration");
  fk_cmd->add_option("--n", fk.n, "matrix size")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  fk_cmd->add_option("--mode", fk.mode, "anti or commuting")
      ->check(CLI::IsMember({"anti", "commuting"}))
      ->capture_default_str();
  auto* fk_gamma_opt = fk_cmd->add_option("--gamma", fk_gamma, "weight coefficient (anti: 1, commuting: 0.5)")
                           ->check(CLI::PositiveNumber);
  fk_cmd->add_option("--restarts", fk.restarts, "perturbed restarts after the grid start")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fk_cmd->add_option("--max-iters", fk.max_iters, "iteration cap per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(fk_cmd, true);
  fk_cmd->callback([&] {
    if (fk_gamma_opt->count() > 0) fk.gamma = fk_gamma;
    params = {{"n", param(fk.n)},
              {"mode", fk.mode},
              {"restarts", param(fk.restarts)},
              {"max_iters", param(fk.max_iters)}};
    if (fk.gamma) params["gamma"] = param(*fk.gamma);
    action = [&](RunContext& ctx) { return cmd_fekete(fk, ctx); };
  });

  SampleOptions sm;
  auto* sm_cmd = app.add_subcommand("sample", "Metropolis chain on the skew-spectrum density");
  sm_cmd->add_option("--p", sm.p, "number of skew-spectrum points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sm_cmd->add_option("--gamma", sm.gamma, "Gaussian weight coefficient")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sm_cmd->add_option("--samples", sm.samples, "retained samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sm_cmd->add_option("--burnin", sm.burn_in, "burn-in steps (default 10^4 p)")->check(CLI::NonNegativeNumber);
  sm_cmd->add_option("--thin", sm.thinning, "steps between retained samples (default 10 p)")
      ->check(CLI::PositiveNumber);
  add_common(sm_cmd, true);
  sm_cmd->callback([&] {
    params = {{"p", param(sm.p)},
              {"gamma", param(sm.gamma)},
              {"samples", param(sm.samples)},
              {"burnin", param(sm.burn_in)},
              {"thin", param(sm.thinning)}};
    action = [&](RunContext& ctx) { return cmd_sample(sm, ctx); };
  });

  DensityOptions dn;
  auto* dn_cmd = app.add_subcommand("density", "log density and tau for each CSV row");
  dn_cmd->add_option("--points", dn.points, "CSV file of x1,y1,...,xp,yp rows, or - for stdin")->required();
  dn_cmd->add_option("--gamma", dn.gamma, "Gaussian weight coefficient")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(dn_cmd, false);
  dn_cmd->callback([&] {
    params = {{"points", dn.points}, {"gamma", param(dn.gamma)}};
    action = [&](RunContext& ctx) { return cmd_density(dn, ctx); };
  });

  KboundOptions kb;
  auto* kb_cmd = app.add_subcommand("kbound", "radius containing every configuration with tau <= 4p^2");
  kb_cmd->add_option("--p", kb.p, "number of skew-spectrum points")->required()->check(CLI::PositiveNumber);
  add_common(kb_cmd, false);
  kb_cmd->callback([&] {
    params = {{"p", param(kb.p)}};
    action = [&](RunContext& ctx) { return cmd_kbound(kb, ctx); };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  RunContext ctx;
  ctx.out = &out;
  ctx.err = &err;
  ctx.threads = threads;
  try {
    ctx.seed = seed ? *seed : parse_seed(std::getenv("SKEWSPEC_SEED")).value_or(0);
  } catch (const std::invalid_argument& e) {
    err << "SKEWSPEC_SEED is not an unsigned 64-bit integer: " << e.what() << '\n';
    return kUsage;
  }
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      err << "cannot create output directory " << out_dir << ": " << ec.message() << '\n';
      return kUsage;
    }
    ctx.out_dir = out_dir;
  }
  ctx.manifest.command = app.get_subcommands().front()->get_name();
  ctx.manifest.seed = ctx.seed;
  ctx.manifest.version = version_string();
  params["threads"] = param(threads);
  if (ctx.out_dir) params["out"] = out_dir;

  const auto t0 = std::chrono::steady_clock::now();
  int code;
  try {
    code = action(ctx);
  } catch (const Error& e) {
    err << ctx.manifest.command << ": " << e.what() << '\n';
    code = kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << ctx.manifest.command << ": " << e.what() << '\n';
    code = kUsage;
  } catch (const std::exception& e) {
    err << ctx.manifest.command << ": " << e.what() << '\n';
    code = kNumericalFailure;
  }
  ctx.manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.manifest.parameters = params;
  if (ctx.out_dir && code != kUsage) {
    try {
      write_json(*ctx.out_dir, "manifest.json", to_json(ctx.manifest));
    } catch (const std::exception& e) {
      err << e.what() << '\n';
      return kNumericalFailure;
    }
  }
  return code;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace skewspec::cli
