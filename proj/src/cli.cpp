#include "freelunch/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "freelunch/convergence.hpp"
#include "freelunch/errors.hpp"
#include "freelunch/io.hpp"
#include "freelunch/lunch.hpp"
#include "freelunch/rng.hpp"
#include "freelunch/version.hpp"

namespace freelunch {
namespace {

namespace fs = std::filesystem;

struct RunContext {
  ExperimentConfig cfg; // resolved: seed override already applied
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;

  std::string comment() const { return metadata_comment(config_hash, seed); }
  nlohmann::json metadata() const { return metadata_json(config_hash, seed); }
};

RunContext make_context(const std::string& config_path, const std::string& out_dir,
                        bool seed_given, std::uint64_t seed_flag) {
  RunContext ctx;
  ctx.cfg = ExperimentConfig::from_file(config_path);
  if (seed_given) ctx.cfg.doc["seed"] = seed_flag;
  ctx.seed = ctx.cfg.seed();
  ctx.config_hash = ctx.cfg.hash();
  ctx.out_dir = out_dir;
  fs::create_directories(ctx.out_dir);
  return ctx;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + path.string());
  f << text;
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::vector<long> sorted_n_list(const ExperimentConfig& cfg) {
  std::vector<long> ns = cfg.n_list();
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return ns;
}

int cmd_scan(const RunContext& ctx, std::ostream& out) {
  const MarketSpec market = ctx.cfg.market();
  const std::vector<long> ns = sorted_n_list(ctx.cfg);
  const long steps = ctx.cfg.j_steps();
  const double lambda = ctx.cfg.lambda();

  std::vector<ScanRow> rows;
  ArbitrageCertificate found;
  long found_n = 0;
  for (long n : ns) {
    const GridSpec grid = GridSpec::make(n, ctx.cfg.t0(), ctx.cfg.horizon(n));
    const long j0 = grid.j0();
    for (long j = j0; j <= j0 + steps; ++j) {
      const StepReport r = classify_step(market, grid, j, lambda);
      rows.push_back({n, r.j, r.lambda_bar, r.esssup_xy, r.essinf_z, r.verdict});
      if (r.verdict != Verdict::None && found.verdict == Verdict::None) {
        found = search_arbitrage(market, grid, j0 + steps, lambda);
        found_n = n;
      }
    }
  }

  std::ostringstream csv;
  write_scan_csv(csv, rows, ctx.comment());
  write_text_file(ctx.out_dir / "scan.csv", csv.str());

  nlohmann::json summary;
  summary["command"] = "scan";
  summary["n_list"] = ns;
  summary["j_steps"] = steps;
  summary["lambda"] = lambda;
  summary["found"] = found.verdict != Verdict::None;
  if (found.verdict != Verdict::None) {
    const GridSpec grid = GridSpec::make(found_n, ctx.cfg.t0(), ctx.cfg.horizon(found_n));
    write_json_file(ctx.out_dir / "certificate.json",
                    certificate_json(found, market, grid, ctx.metadata()));
    summary["certificate"] = "certificate.json";
    summary["n"] = found_n;
    summary["j_star"] = found.j_star;
    summary["verdict"] = verdict_name(found.verdict);
  } else {
    // Hint: the vanishing-risk route may still apply even though no single
    // step clears λ on these grids.
    const GridSpec grid =
        GridSpec::make(ns.back(), ctx.cfg.t0(), ctx.cfg.horizon(ns.back()));
    summary["flvr_hint"] = flvr_hypotheses(market, grid, 0.0, nullptr);
  }
  summary["metadata"] = ctx.metadata();
  write_json_file(ctx.out_dir / "scan_summary.json", summary);

  out << (found.verdict != Verdict::None
              ? std::string("scan: free lunch found, verdict ") +
                    verdict_name(found.verdict)
              : "scan: no free lunch on the scanned range")
      << "\n";
  return found.verdict != Verdict::None ? kExitFreeLunch : kExitOk;
}

int cmd_flvr(const RunContext& ctx, std::ostream& out) {
  const MarketSpec market = ctx.cfg.market();
  const std::vector<long> ns = sorted_n_list(ctx.cfg);
  const long steps = ctx.cfg.j_steps();
  std::vector<double> targets{0.5, 0.1, 0.02};
  if (ctx.cfg.options().contains("delta_targets")) {
    targets = ctx.cfg.options().at("delta_targets").get<std::vector<double>>();
  }
  const double nu =
      ctx.cfg.options().contains("nu") ? ctx.cfg.options().at("nu").get<double>() : 0.0;

  std::string csv = ctx.comment() + "n,j,ratio,expected_return,epsilon\n";
  nlohmann::json per_n = nlohmann::json::array();
  for (long n : ns) {
    const GridSpec grid = GridSpec::make(n, ctx.cfg.t0(), ctx.cfg.horizon(n));
    const FlvrReport rep = flvr_scan(market, grid, grid.j0() + steps, targets, nu);
    for (const auto& e : rep.entries) {
      csv += std::to_string(n) + "," + std::to_string(e.j) + "," +
             format_double(e.ratio) + "," + format_double(e.expected_return) + "," +
             format_double(e.epsilon) + "\n";
    }
    nlohmann::json block;
    block["n"] = n;
    block["achieved_delta"] = std::isfinite(rep.achieved_delta)
                                  ? nlohmann::json(rep.achieved_delta)
                                  : nlohmann::json("unbounded");
    nlohmann::json tj = nlohmann::json::array();
    for (const auto& [delta, met] : rep.targets) {
      tj.push_back({{"delta", delta}, {"met", met}});
    }
    block["targets"] = tj;
    block["x_all_nonnegative"] = rep.x_all_nonnegative;
    block["kappa_vanishes_at_infinity"] = rep.kappa_vanishes_at_infinity;
    per_n.push_back(block);
  }
  write_text_file(ctx.out_dir / "flvr.csv", csv);

  nlohmann::json summary;
  summary["command"] = "flvr";
  summary["j_steps"] = steps;
  summary["reports"] = per_n;
  summary["metadata"] = ctx.metadata();
  write_json_file(ctx.out_dir / "flvr_summary.json", summary);
  out << "flvr: scan complete over " << ns.size() << " grid size(s)\n";
  return kExitOk;
}

int cmd_converge(const RunContext& ctx, std::ostream& out) {
  const double t0 = ctx.cfg.t0();
  std::vector<std::pair<double, double>> pairs;
  if (ctx.cfg.options().contains("pairs")) {
    for (const auto& p : ctx.cfg.options().at("pairs")) {
      if (!p.is_array() || p.size() != 2) {
        throw ConfigError("config: options.pairs entries must be [t, T]");
      }
      pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  } else {
    pairs.emplace_back(t0 + 0.5, t0 + 1.0);
  }

  const ConvergenceReport rep =
      convergence_table(ctx.cfg.kernel(), ctx.cfg.law(), t0, pairs, sorted_n_list(ctx.cfg));

  std::ostringstream csv;
  write_convergence_csv(csv, rep, ctx.comment());
  write_text_file(ctx.out_dir / "convergence.csv", csv.str());

  nlohmann::json summary;
  summary["command"] = "converge";
  summary["kernel"] = rep.kernel_id;
  summary["law"] = rep.law_id;
  summary["t0"] = rep.t0;
  summary["fitted_decay_exponent"] = rep.fitted_decay_exponent;
  summary["rows"] = rep.rows.size();
  summary["metadata"] = ctx.metadata();
  write_json_file(ctx.out_dir / "convergence_summary.json", summary);
  out << "converge: fitted decay exponent " << format_double(rep.fitted_decay_exponent)
      << "\n";
  return kExitOk;
}

int cmd_simulate(const RunContext& ctx, std::ostream& out) {
  const MarketSpec market = ctx.cfg.market();
  const std::vector<long> ns = sorted_n_list(ctx.cfg);
  std::uint64_t num_paths = 1;
  if (ctx.cfg.options().contains("num_paths")) {
    num_paths = ctx.cfg.options().at("num_paths").get<std::uint64_t>();
    if (num_paths == 0) throw ConfigError("config: options.num_paths must be positive");
  }

  std::uint64_t stream = 0;
  std::size_t files = 0;
  for (long n : ns) {
    const GridSpec grid = GridSpec::make(n, ctx.cfg.t0(), ctx.cfg.horizon(n));
    for (std::uint64_t p = 0; p < num_paths; ++p, ++stream) {
      Rng rng(substream_seed(ctx.seed, stream));
      const MarketPath path = simulate_path(market, grid, rng);
      char name[64];
      std::snprintf(name, sizeof(name), "path_n%ld_p%04llu.csv", n,
                    static_cast<unsigned long long>(p));
      std::ostringstream csv;
      write_path_csv(csv, grid, path, ctx.comment());
      write_text_file(ctx.out_dir / name, csv.str());
      ++files;
    }
  }
  out << "simulate: wrote " << files << " path file(s)\n";
  return kExitOk;
}

int cmd_oracle(const RunContext& ctx, std::ostream& out, std::ostream& err) {
  const MarketSpec market = ctx.cfg.market();
  const std::vector<long> ns = sorted_n_list(ctx.cfg);
  const long steps = ctx.cfg.j_steps();
  const double lambda = ctx.cfg.lambda();
  std::uint64_t cap = 1ULL << 20;
  if (ctx.cfg.options().contains("cap")) {
    cap = ctx.cfg.options().at("cap").get<std::uint64_t>();
  }

  std::string csv = ctx.comment() + "n,j,lambda_bar,oracle_worst,agree\n";
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  for (long n : ns) {
    const GridSpec grid = GridSpec::make(n, ctx.cfg.t0(), ctx.cfg.horizon(n));
    const std::size_t arity = market.law(n).size();
    const long j0 = grid.j0();
    for (long j = j0; j <= j0 + steps; ++j) {
      // Skip steps whose history space exceeds the cap instead of failing.
      double space = 1.0;
      for (long k = 0; k < j - j0; ++k) space *= static_cast<double>(arity);
      if (space > static_cast<double>(cap)) continue;

      const EsssupXY sup = esssup_xy(market, grid, j);
      const double lb = lambda_bar(market, grid, j);
      const OracleResult orc = brute_force_oracle(market, grid, j, lambda, cap);
      const bool agree =
          orc.max_worst_return == lb - lambda && orc.history == sup.witness;
      mismatches += agree ? 0 : 1;
      ++checked;
      csv += std::to_string(n) + "," + std::to_string(j) + "," + format_double(lb) +
             "," + format_double(orc.max_worst_return) + "," + (agree ? "1" : "0") +
             "\n";
    }
  }
  write_text_file(ctx.out_dir / "oracle.csv", csv);

  nlohmann::json summary;
  summary["command"] = "oracle";
  summary["checked"] = checked;
  summary["mismatches"] = mismatches;
  summary["lambda"] = lambda;
  summary["metadata"] = ctx.metadata();
  write_json_file(ctx.out_dir / "oracle_summary.json", summary);

  if (mismatches > 0) {
    err << "oracle: " << mismatches << " mismatch(es) out of " << checked << "\n";
    return kExitNumerical;
  }
  out << "oracle: " << checked << " step(s) agree exactly\n";
  return kExitOk;
}

int cmd_kernels(std::ostream& out) {
  nlohmann::json catalog = nlohmann::json::array();
  auto entry = [&](const char* variant, std::vector<std::string> params,
                   bool difference, const char* note) {
    catalog.push_back({{"variant", variant},
                       {"params", params},
                       {"difference_kernel", difference},
                       {"note", note}});
  };
  entry("brownian_constant", {}, true, "kappa constant 1; classical random walk");
  entry("fbm_moving_average", {"hurst"}, true,
        "kappa(theta) = theta^(H-1/2); long memory for H > 1/2");
  entry("fbm_sottinen", {"hurst"}, false,
        "nonstationary fBm kernel, H in (1/2,1); not a difference kernel");
  entry("ornstein_uhlenbeck", {"kappa0", "v"}, true,
        "kappa(theta) = kappa0 * exp(-v theta)");
  entry("rogers", {"k", "v", "hurst"}, true,
        "kappa(theta) = k (theta^2 + v)^((H-1/2)/2); regularised near zero");
  entry("mixed_bm", {"sigma", "hurst"}, true,
        "kappa(theta) = sqrt(sigma^2 + theta^(2H-1)); fBm mixed with Brownian motion");
  entry("tabulated", {"thetas", "kappas"}, true,
        "piecewise-linear kappa from knots, clamped outside");
  nlohmann::json j;
  j["kernels"] = catalog;
  j["version"] = kVersion;
  out << j.dump(2) << "\n";
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"random-walk market free-lunch toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed_flag = 0;
  bool seed_given = false;
  int threads = 1;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* copt = sub->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_config) copt->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed_flag, "seed override")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads,
                    "worker budget; outputs are canonical regardless");
  };

  CLI::App* scan = app.add_subcommand("scan", "scan steps for a free lunch");
  CLI::App* flvr = app.add_subcommand("flvr", "vanishing-risk ratio scan");
  CLI::App* converge = app.add_subcommand("converge", "covariance convergence table");
  CLI::App* simulate = app.add_subcommand("simulate", "draw market paths");
  CLI::App* oracle = app.add_subcommand("oracle", "brute-force agreement check");
  CLI::App* kernels = app.add_subcommand("kernels", "list kernel variants");
  for (CLI::App* sub : {scan, flvr, converge, simulate, oracle}) {
    add_common(sub, true);
  }
  add_common(kernels, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (kernels->parsed()) return cmd_kernels(out);
    const RunContext ctx = make_context(config_path, out_dir, seed_given, seed_flag);
    if (scan->parsed()) return cmd_scan(ctx, out);
    if (flvr->parsed()) return cmd_flvr(ctx, out);
    if (converge->parsed()) return cmd_converge(ctx, out);
    if (simulate->parsed()) return cmd_simulate(ctx, out);
    if (oracle->parsed()) return cmd_oracle(ctx, out, err);
    err << "error: no subcommand\n";
    return kExitConfig;
  } catch (const HypothesisViolated& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

} // namespace freelunch
