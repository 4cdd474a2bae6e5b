#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "owm/analysis.hpp"
#include "owm/engines.hpp"
#include "owm/generators.hpp"
#include "owm/harness.hpp"
#include "owm/instance.hpp"
#include "owm/lambda.hpp"
#include "owm/matchers.hpp"
#include "owm/params.hpp"
#include "owm/policy.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Cli {
  std::vector<std::string> inputs;
  std::vector<std::string> families;
  std::vector<std::string> variants;
  std::string engine = "dist";
  std::string out;
  std::string plot_out;
  owm::AlgoParams algo;
  owm::ChargeParams charge;
  std::uint64_t seed = 1;
  int replicas = 10000;
  bool timings = false;
};

void add_algo_flags(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--eps", cli.algo.eps, "Greed slack epsilon")->capture_default_str();
  cmd->add_option("--delta", cli.algo.delta, "Weight-window slack delta")->capture_default_str();
  cmd->add_option("--p", cli.algo.p, "Optimized fallback bias p")->capture_default_str();
}

void add_charge_flags(CLI::App* cmd, Cli& cli) {
  cmd->add_option("--zeta", cli.charge.zeta, "Z-share split weight")->capture_default_str();
  cmd->add_option("--beta", cli.charge.beta, "Offline-partner share weight")
      ->capture_default_str();
  cmd->add_option("--sigma", cli.charge.sigma, "Fallback share weight")->capture_default_str();
}

std::vector<std::pair<std::string, owm::Instance>> collect_instances(const Cli& cli) {
  std::vector<std::pair<std::string, owm::Instance>> out;
  for (const std::string& path : cli.inputs) {
    out.emplace_back(path, owm::load_instance(path));
  }
  for (const std::string& family : cli.families) {
    owm::GeneratorSpec spec;
    spec.family = family;
    spec.seed = cli.seed;
    spec.n = 4;
    spec.m = 4;
    out.emplace_back(family, owm::generate(spec));
  }
  if (out.empty()) throw CLI::ValidationError("give at least one --in file or --family name");
  return out;
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open for writing: " + path);
  return file;
}

int cmd_gen(const Cli& cli, const std::string& family, int n, int m, const std::string& law) {
  owm::GeneratorSpec spec;
  spec.family = family;
  spec.n = n;
  spec.m = m;
  spec.weight_law = law;
  spec.seed = cli.seed;
  owm::Instance inst = owm::generate(spec);
  if (cli.out.empty()) {
    std::ostringstream os;
    os << "advertisers " << inst.num_advertisers << "\n";
    os << "impressions " << inst.num_impressions() << "\n";
    os.precision(17);
    for (int i = 0; i < inst.num_impressions(); ++i) {
      for (int a = 0; a < inst.num_advertisers; ++a) os << (a ? " " : "") << inst.weight(i, a);
      os << "\n";
    }
    std::cout << os.str();
  } else {
    owm::save_instance(inst, cli.out);
  }
  return kExitOk;
}

int cmd_opt(const Cli& cli) {
  for (const auto& [name, inst] : collect_instances(cli)) {
    owm::OfflineMatching opt = owm::offline_optimum(inst);
    std::cout << name << " opt=" << owm::format_sig(opt.value) << " match=[";
    for (size_t i = 0; i < opt.match.size(); ++i) std::cout << (i ? " " : "") << opt.match[i];
    std::cout << "]\n";
  }
  return kExitOk;
}

owm::RunConfig make_config(const Cli& cli, const std::string& variant_name) {
  owm::RunConfig cfg;
  if (!owm::variant_from_string(variant_name, cfg.variant)) {
    throw CLI::ValidationError("unknown variant: " + variant_name);
  }
  if (!owm::engine_from_string(cli.engine, cfg.engine)) {
    throw CLI::ValidationError("unknown engine: " + cli.engine);
  }
  cfg.algo = cli.algo;
  cfg.seed = cli.seed;
  cfg.replicas = cli.replicas;
  return cfg;
}

int cmd_run(const Cli& cli) {
  std::vector<std::string> variants = cli.variants;
  if (variants.empty()) variants = {"greedy", "sg", "osg"};
  std::vector<owm::SuiteConfig> configs;
  for (const std::string& v : variants) configs.push_back({v, make_config(cli, v)});
  auto rows = owm::run_suite(collect_instances(cli), configs);
  if (cli.out.empty()) {
    std::cout << owm::suite_csv(rows, cli.timings);
  } else {
    owm::write_suite_csv(rows, cli.out, cli.timings);
  }
  if (!cli.plot_out.empty()) owm::emit_plot_data(rows, cli.plot_out);
  return kExitOk;
}

int cmd_expect(const Cli& cli, const std::string& variant_name) {
  owm::RunConfig cfg = make_config(cli, variant_name);
  if (cfg.variant == owm::Variant::Greedy) {
    throw CLI::ValidationError("expectation tables exist for the randomized policies only");
  }
  std::ofstream file;
  std::ostream& os = open_or_stdout(file, cli.out);
  os << "t,impression,advertiser,e_gain,engine,stderr\n";
  for (const auto& [name, inst] : collect_instances(cli)) {
    (void)name;
    const int n = inst.num_advertisers;
    if (cfg.engine == owm::Engine::MC) {
      owm::McTables t = owm::mc_estimate(inst, cfg.algo, cfg.variant, cfg.replicas, cfg.seed);
      for (int i = 0; i < inst.num_impressions(); ++i) {
        for (int a = 0; a < n; ++a) {
          os << (i + 1) << ',' << i << ',' << a << ',' << owm::format_sig(t.e_gain_mean[i][a])
             << ",mc," << owm::format_sig(t.e_gain_stderr[i][a]) << "\n";
        }
      }
    } else {
      owm::EngineTables t = cfg.engine == owm::Engine::Enum
                                ? owm::enumerate_exact(inst, cfg.algo, cfg.variant)
                                : owm::propagate(inst, cfg.algo, cfg.variant);
      for (int i = 0; i < inst.num_impressions(); ++i) {
        for (int a = 0; a < n; ++a) {
          os << (i + 1) << ',' << i << ',' << a << ',' << owm::format_sig(t.e_gain[i][a]) << ','
             << owm::to_string(cfg.engine) << ",\n";
        }
      }
    }
  }
  return kExitOk;
}

int cmd_verify(const Cli& cli, const std::string& variant_name) {
  owm::RunConfig cfg = make_config(cli, variant_name);
  if (cfg.variant == owm::Variant::Greedy) {
    throw CLI::ValidationError("bounds are defined for the randomized policies only");
  }

  owm::LambdaParams lp;
  lp.eps = cli.algo.eps;
  lp.delta = cli.algo.delta;
  lp.zeta = cli.charge.zeta;
  lp.beta = cli.charge.beta;
  lp.sigma = cli.charge.sigma;
  lp.p = cli.algo.p;
  const bool optimized = cfg.variant == owm::Variant::OSG;
  owm::TermBreakdown terms =
      optimized ? owm::lambda_opt_terms(lp) : owm::lambda_terms(lp);
  const double lambda = std::max(0.0, terms.min_value);

  std::ofstream file;
  std::ostream& os = open_or_stdout(file, cli.out);
  os << "impression,x,y,z,excess,bound,margin,pass\n";
  bool all_ok = true;
  for (const auto& [name, raw] : collect_instances(cli)) {
    owm::Instance inst = owm::pad_with_dummies(raw);
    owm::Decomposition dec = owm::decompose(inst, cfg.algo, cfg.variant, owm::Engine::Enum);
    owm::ExcessLedger ledger = owm::run_mechanism(dec, inst, cfg.algo, cli.charge);
    owm::BoundsReport rep = owm::verify_bounds(dec, ledger, lambda);
    for (const owm::BoundRow& r : rep.rows) {
      os << r.impression << ',' << owm::format_sig(r.x) << ',' << owm::format_sig(r.y) << ','
         << owm::format_sig(r.z) << ',' << owm::format_sig(r.excess) << ','
         << owm::format_sig(r.bound) << ',' << owm::format_sig(r.margin) << ','
         << (r.pass ? "1" : "0") << "\n";
    }
    const bool identity_ok = std::abs(rep.identity_residual) <= 1e-9 &&
                             std::abs(rep.ledger_residual) <= 1e-9;
    if (!rep.all_pass || !identity_ok) {
      all_ok = false;
      std::cerr << "bound violation or identity mismatch on " << name
                << " (identity=" << rep.identity_residual
                << ", ledger=" << rep.ledger_residual << "); instance:\n";
      std::cerr << "advertisers " << inst.num_advertisers << "\nimpressions "
                << inst.num_impressions() << "\n";
      std::cerr.precision(17);
      for (int i = 0; i < inst.num_impressions(); ++i) {
        for (int a = 0; a < inst.num_advertisers; ++a)
          std::cerr << (a ? " " : "") << inst.weight(i, a);
        std::cerr << "\n";
      }
    }
  }
  return all_ok ? kExitOk : kExitInvariant;
}

void print_terms(std::ostream& os, const owm::TermBreakdown& t) {
  os << "term,value,binding\n";
  for (int k = 0; k < owm::kNumLambdaTerms; ++k) {
    os << '"' << t.name[k] << "\"," << owm::format_sig(t.value[k]) << ','
       << (k == t.binding ? "1" : "0") << "\n";
  }
}

int cmd_lambda_eval(const Cli& cli, const std::string& kind) {
  owm::LambdaParams lp;
  lp.eps = cli.algo.eps;
  lp.delta = cli.algo.delta;
  lp.zeta = cli.charge.zeta;
  lp.beta = cli.charge.beta;
  lp.sigma = cli.charge.sigma;
  lp.p = cli.algo.p;
  owm::TermBreakdown t;
  if (kind == "base") {
    t = owm::lambda_terms(lp);
  } else if (kind == "optimized") {
    t = owm::lambda_opt_terms(lp);
  } else {
    throw CLI::ValidationError("kind must be base or optimized");
  }
  std::ofstream file;
  std::ostream& os = open_or_stdout(file, cli.out);
  print_terms(os, t);
  os << "min," << owm::format_sig(t.min_value) << ",\n";
  os << "ratio," << owm::format_sig(owm::competitive_ratio(std::max(0.0, t.min_value))) << ",\n";
  return kExitOk;
}

int cmd_lambda_maximize(const Cli& cli, const std::string& kind, int restarts, int iters) {
  owm::LambdaKind k;
  if (kind == "base") {
    k = owm::LambdaKind::Base;
  } else if (kind == "optimized") {
    k = owm::LambdaKind::Optimized;
  } else {
    throw CLI::ValidationError("kind must be base or optimized");
  }
  owm::MaximizeResult res = owm::maximize_lambda(k, restarts, iters, cli.seed);
  std::ofstream file;
  std::ostream& os = open_or_stdout(file, cli.out);
  os << "eps=" << owm::format_sig(res.params.eps) << " delta=" << owm::format_sig(res.params.delta)
     << " zeta=" << owm::format_sig(res.params.zeta) << " beta=" << owm::format_sig(res.params.beta)
     << " sigma=" << owm::format_sig(res.params.sigma);
  if (k == owm::LambdaKind::Optimized) os << " p=" << owm::format_sig(res.params.p);
  os << "\n";
  print_terms(os, res.breakdown);
  os << "min," << owm::format_sig(res.breakdown.min_value) << ",\n";
  return kExitOk;
}

int cmd_lambda_impossibility(const Cli& cli, int resolution, int refine, int restarts) {
  owm::ScanResult res = owm::impossibility_scan(resolution, refine, restarts);
  std::ofstream file;
  std::ostream& os = open_or_stdout(file, cli.out);
  os << "max=" << owm::format_sig(res.max_value) << " ceiling=" << owm::kImpossibilityCeiling
     << " below_ceiling=" << (res.below_ceiling ? "yes" : "no") << "\n";
  os << "argmax: eps=" << owm::format_sig(res.argmax.eps)
     << " delta=" << owm::format_sig(res.argmax.delta)
     << " zeta=" << owm::format_sig(res.argmax.zeta)
     << " beta=" << owm::format_sig(res.argmax.beta)
     << " sigma=" << owm::format_sig(res.argmax.sigma) << " p=" << owm::format_sig(res.argmax.p)
     << "\n";
  return res.below_ceiling ? kExitOk : kExitInvariant;
}

int cmd_bench(const Cli& cli, const std::vector<int>& sizes) {
  std::ostream& os = std::cout;
  os << "size,variant,engine,value,opt,ratio,runtime_ms\n";
  for (int n : sizes) {
    owm::GeneratorSpec spec;
    spec.family = "triangular";
    spec.n = n;
    owm::Instance inst = owm::generate(spec);
    for (const std::string& vname : {std::string("greedy"), std::string("sg")}) {
      owm::RunConfig cfg = make_config(cli, vname);
      if (cfg.variant != owm::Variant::Greedy) cfg.engine = owm::Engine::Dist;
      auto start = std::chrono::steady_clock::now();
      owm::RunReport rep = owm::expected_value(inst, cfg);
      auto stop = std::chrono::steady_clock::now();
      os << n << ',' << vname << ','
         << (cfg.variant == owm::Variant::Greedy ? "greedy" : "dist") << ','
         << owm::format_sig(rep.value) << ',' << owm::format_sig(rep.opt) << ','
         << owm::format_sig(rep.ratio) << ','
         << owm::format_sig(std::chrono::duration<double, std::milli>(stop - start).count(), 4)
         << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online weighted bipartite matching laboratory"};
  app.require_subcommand(1);
  Cli cli;

  std::string family = "figure3", law = "uniform", variant = "sg", kind = "base";
  int gen_n = 4, gen_m = 4;
  int restarts = 32, iters = 200, resolution = 8, refine = 200;
  std::vector<int> sizes{25, 50, 100};

  CLI::App* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--family", family, "Instance family")->capture_default_str();
  gen->add_option("--n", gen_n, "Advertisers / triangular size")->capture_default_str();
  gen->add_option("--m", gen_m, "Impressions (random family)")->capture_default_str();
  gen->add_option("--law", law, "Weight law: uniform | ints")->capture_default_str();
  gen->add_option("--seed", cli.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", cli.out, "Output path (stdout if omitted)");

  CLI::App* opt = app.add_subcommand("opt", "Offline optimum of instances");
  opt->add_option("--in", cli.inputs, "Instance file (repeatable)");
  opt->add_option("--family", cli.families, "Named family instead of a file (repeatable)");
  opt->add_option("--seed", cli.seed, "Seed for generated families")->capture_default_str();

  CLI::App* run = app.add_subcommand("run", "Run policies over instances, emit a CSV report");
  run->add_option("--in", cli.inputs, "Instance file (repeatable)");
  run->add_option("--family", cli.families, "Named family instead of a file (repeatable)");
  run->add_option("--variant", cli.variants, "greedy | sg | osg (repeatable)");
  run->add_option("--engine", cli.engine, "enum | dist | mc")->capture_default_str();
  run->add_option("--seed", cli.seed, "Random seed")->capture_default_str();
  run->add_option("--replicas", cli.replicas, "Monte Carlo replicas")->capture_default_str();
  run->add_option("--out", cli.out, "CSV path (stdout if omitted)");
  run->add_option("--plot", cli.plot_out, "Also emit plot data to this path");
  run->add_flag("--timings", cli.timings, "Include the runtime column");
  add_algo_flags(run, cli);

  CLI::App* expect = app.add_subcommand("expect", "Per-(t,advertiser) expected gain tables");
  expect->add_option("--in", cli.inputs, "Instance file (repeatable)");
  expect->add_option("--family", cli.families, "Named family (repeatable)");
  expect->add_option("--variant", variant, "sg | osg")->capture_default_str();
  expect->add_option("--engine", cli.engine, "enum | dist | mc")->capture_default_str();
  expect->add_option("--seed", cli.seed, "Random seed")->capture_default_str();
  expect->add_option("--replicas", cli.replicas, "Monte Carlo replicas")->capture_default_str();
  expect->add_option("--out", cli.out, "CSV path (stdout if omitted)");
  add_algo_flags(expect, cli);

  CLI::App* verify = app.add_subcommand("verify", "Decompose, charge, and check excess bounds");
  verify->add_option("--in", cli.inputs, "Instance file (repeatable)");
  verify->add_option("--family", cli.families, "Named family (repeatable)");
  verify->add_option("--variant", variant, "sg | osg")->capture_default_str();
  verify->add_option("--out", cli.out, "CSV path (stdout if omitted)");
  verify->add_option("--seed", cli.seed, "Seed for generated families")->capture_default_str();
  add_algo_flags(verify, cli);
  add_charge_flags(verify, cli);

  CLI::App* lam = app.add_subcommand("lambda", "Guarantee certificates");
  lam->require_subcommand(1);
  CLI::App* leval = lam->add_subcommand("eval", "Evaluate the 11 terms at given parameters");
  leval->add_option("--kind", kind, "base | optimized")->capture_default_str();
  leval->add_option("--out", cli.out, "CSV path (stdout if omitted)");
  add_algo_flags(leval, cli);
  add_charge_flags(leval, cli);
  CLI::App* lmax = lam->add_subcommand("maximize", "Search parameters maximizing the guarantee");
  lmax->add_option("--kind", kind, "base | optimized")->capture_default_str();
  lmax->add_option("--restarts", restarts, "Search restarts")->capture_default_str();
  lmax->add_option("--iters", iters, "Simplex iterations per restart")->capture_default_str();
  lmax->add_option("--seed", cli.seed, "Random seed")->capture_default_str();
  lmax->add_option("--out", cli.out, "Output path (stdout if omitted)");
  CLI::App* limp = lam->add_subcommand("impossibility", "Grid + refinement ceiling scan");
  limp->add_option("--resolution", resolution, "Grid resolution per axis")->capture_default_str();
  limp->add_option("--refine", refine, "Refinement iterations")->capture_default_str();
  limp->add_option("--restarts", restarts, "Cells refined")->capture_default_str();
  limp->add_option("--out", cli.out, "Output path (stdout if omitted)");

  CLI::App* bench = app.add_subcommand("bench", "Timing on triangular instances");
  bench->add_option("--sizes", sizes, "Triangular sizes")->capture_default_str();
  add_algo_flags(bench, cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(cli, family, gen_n, gen_m, law);
    if (opt->parsed()) return cmd_opt(cli);
    if (run->parsed()) return cmd_run(cli);
    if (expect->parsed()) return cmd_expect(cli, variant);
    if (verify->parsed()) return cmd_verify(cli, variant);
    if (lam->parsed()) {
      if (leval->parsed()) return cmd_lambda_eval(cli, kind);
      if (lmax->parsed()) return cmd_lambda_maximize(cli, kind, restarts, iters);
      if (limp->parsed()) return cmd_lambda_impossibility(cli, resolution, refine, restarts);
    }
    if (bench->parsed()) return cmd_bench(cli, sizes);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const owm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
