// corrclust: run the rounding pipeline, the analysis checks, or a seed sweep.
//
// Exit codes: 0 success, 2 when a run ends with a separation certificate,
// 1 on any error or failed check.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrclust/combine.hpp"
#include "corrclust/exact.hpp"
#include "corrclust/io.hpp"
#include "corrclust/report.hpp"
#include "corrclust/verify.hpp"

namespace cc = corrclust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCertificate = 2;
constexpr const char* kOutDirEnv = "CORRCLUST_OUT_DIR";

struct RunConfig {
  std::string gen;
  std::string instance;
  double epsilon_q = 0.1;
  double epsilon = cc::kDefaultEpsilon;
  int rank = cc::lp::kDefaultSetOrder;
  int trials = cc::kDefaultTrials;
  std::uint64_t seed = 0;
  int oracle_limit = cc::kDefaultOracleLimit;
  int max_cuts = 8;
  double noise = 0.0;
  std::string out;

  cc::PipelineParams pipeline() const {
    cc::PipelineParams p;
    p.agreement = cc::AgreementParams::from_epsilon_q(epsilon_q);
    p.rounding.epsilon = epsilon;
    p.rounding.r = rank;
    p.rounding.trials = trials;
    p.oracle_limit = oracle_limit;
    p.max_cuts = max_cuts;
    return p;
  }
};

struct GenSpec {
  cc::InstanceKind kind = cc::InstanceKind::kUniformRandom;
  int n = 0;
  cc::GeneratorParams params;
};

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad size list: " + s);
    out.push_back(v);
  }
  return out;
}

// uniform:<n>[:<p>] | planted:<s1>,<s2>,... | adversarial:<s1>,...[:<hubs>]
GenSpec parse_gen(const std::string& spec, double noise) {
  GenSpec g;
  g.params.noise = noise;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (rest.empty()) throw std::invalid_argument("generator spec needs arguments: " + spec);
  const auto second = rest.find(':');
  const std::string head = rest.substr(0, second);
  const std::string tail = second == std::string::npos ? "" : rest.substr(second + 1);
  try {
    if (kind == "uniform") {
      g.kind = cc::InstanceKind::kUniformRandom;
      g.n = std::stoi(head);
      if (!tail.empty()) g.params.plus_probability = std::stod(tail);
    } else if (kind == "planted") {
      g.kind = cc::InstanceKind::kPlantedCliques;
      g.params.clique_sizes = parse_sizes(head);
      if (!tail.empty()) throw std::invalid_argument("planted takes only clique sizes");
      for (int s : g.params.clique_sizes) g.n += s;
    } else if (kind == "adversarial") {
      g.kind = cc::InstanceKind::kAdversarialMix;
      g.params.clique_sizes = parse_sizes(head);
      g.params.hubs = tail.empty() ? 0 : std::stoi(tail);
      for (int s : g.params.clique_sizes) g.n += s;
      g.n += g.params.hubs;
    } else {
      throw std::invalid_argument("unknown generator: " + kind);
    }
  } catch (const std::logic_error& e) {
    throw std::invalid_argument("bad generator spec '" + spec + "': " + e.what());
  }
  if (g.n < 1) throw std::invalid_argument("generator spec gives n = 0: " + spec);
  return g;
}

cc::SignedGraph load_graph(const RunConfig& c) {
  if (c.gen.empty() == c.instance.empty()) throw std::invalid_argument("give exactly one of --gen and --instance");
  if (!c.instance.empty()) return cc::read_instance_file(c.instance);
  const GenSpec g = parse_gen(c.gen, c.noise);
  return cc::generate_instance(g.kind, g.n, g.params, c.seed);
}

// --out, else <$CORRCLUST_OUT_DIR>/<default_name>, else stdout.
void emit(const std::string& text, const std::string& out, const std::string& default_name) {
  std::string path = out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) {
      std::filesystem::create_directories(dir);
      path = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

cc::Json config_json(const RunConfig& c) {
  cc::Json j;
  if (!c.gen.empty()) {
    j["gen"] = c.gen;
    j["noise"] = c.noise;
  } else {
    j["instance"] = c.instance;
  }
  j["eps_q"] = c.epsilon_q;
  j["eps"] = c.epsilon;
  j["rank"] = c.rank;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["oracle_limit"] = c.oracle_limit;
  j["max_cuts"] = c.max_cuts;
  return j;
}

int cmd_run(const RunConfig& c) {
  const cc::SignedGraph g = load_graph(c);
  const cc::PipelineReport r = cc::full_pipeline(g, c.pipeline(), c.seed);
  cc::Json doc;
  doc["command"] = "run";
  doc["config"] = config_json(c);
  doc["result"] = cc::to_json(r);
  emit(cc::render(doc), c.out, "run-" + std::to_string(c.seed) + ".json");
  if (r.certified()) {
    std::cerr << "separation certificate: " << r.certificate->provenance << "\n";
    return kExitCertificate;
  }
  return kExitOk;
}

struct VerifyConfig {
  double grid_step = 1e-4;
  double f_grid_step = 1e-5;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  double plus_constant = cc::kPivotPlusConstant;
  std::string out;
};

int cmd_verify(const VerifyConfig& c) {
  cc::Json doc;
  doc["command"] = "verify";
  bool ok = true;
  auto line = [](const std::string& name, bool pass, const std::string& detail) {
    std::cerr << (pass ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  " + detail) << "\n";
  };

  const cc::FinalRatio ratio = cc::verify_final_ratio(c.grid_step);
  doc["final_ratio"] = cc::to_json(ratio);
  std::ostringstream rd;
  rd << std::setprecision(10) << "max " << ratio.max << " at x = " << ratio.argmax << ", minus edge "
     << ratio.minus_edge;
  line("final_ratio", ratio.ok(), rd.str());
  ok = ok && ratio.ok();

  cc::Rng rng(c.seed);
  doc["triangles"] = cc::Json::array();
  for (cc::TriangleKind k : {cc::TriangleKind::kMinusMinusMinus, cc::TriangleKind::kPlusMinusMinus,
                             cc::TriangleKind::kPlusPlusMinus, cc::TriangleKind::kPlusPlusPlus}) {
    const cc::TriangleSweep s = cc::sweep_triangle_case(k, c.samples, rng);
    doc["triangles"].push_back(cc::to_json(s));
    std::ostringstream d;
    d << std::setprecision(10) << s.failures << "/" << s.samples << " failures, min slack " << s.min_slack;
    if (s.first_failure) d << ", witness " << cc::to_json(*s.first_failure).dump();
    line(std::string("triangle ") + cc::triangle_kind_name(k), s.failures == 0, d.str());
    ok = ok && s.failures == 0;
  }

  const cc::FConstantCheck f = cc::verify_f_constant(c.f_grid_step, c.plus_constant);
  cc::Json fj = cc::to_json(f);
  fj["plus_constant"] = c.plus_constant;
  doc["f_constant"] = fj;
  std::ostringstream fd;
  fd << std::setprecision(10) << "constant " << c.plus_constant << ", min gap " << f.min_gap << " at x = "
     << f.min_gap_at << ", gap at 1/2 " << f.gap_at_half;
  line("f_constant", f.ok, fd.str());
  ok = ok && f.ok;

  doc["ok"] = ok;
  emit(cc::render(doc), c.out, "verify.json");
  return ok ? kExitOk : kExitError;
}

struct BenchConfig {
  RunConfig run;
  std::vector<int> sizes{10};
  int count = 50;
  int jobs = 1;
  std::string summary;
};

struct BenchRow {
  int n = 0;
  std::uint64_t seed = 0;
  cc::PipelineReport report;
};

std::string csv_number(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(10) << *v;
  return s.str();
}

int cmd_bench(const BenchConfig& c) {
  if (c.sizes.empty()) throw std::invalid_argument("bench needs at least one size");
  for (int n : c.sizes)
    if (n < 1) throw std::invalid_argument("bench sizes must be at least 1");
  if (c.count < 1) throw std::invalid_argument("bench needs at least one instance per size");
  if (c.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  // Only the kind and the + probability of the spec matter; n comes from the sizes.
  std::string spec = c.run.gen.empty() ? "uniform" : c.run.gen;
  if (spec == "uniform") spec += ":1";
  const GenSpec base = parse_gen(spec, c.run.noise);
  if (base.kind != cc::InstanceKind::kUniformRandom) throw std::invalid_argument("bench sweeps uniform instances");
  const cc::PipelineParams params = c.run.pipeline();

  std::vector<std::pair<int, std::uint64_t>> tasks;
  for (int n : c.sizes)
    for (int i = 0; i < c.count; ++i) tasks.emplace_back(n, c.run.seed + static_cast<std::uint64_t>(i));
  std::vector<BenchRow> rows(tasks.size());
  auto work = [&](std::size_t i) {
    const auto [n, seed] = tasks[i];
    const cc::SignedGraph g = cc::generate_instance(base.kind, n, base.params, seed);
    rows[i] = BenchRow{n, seed, cc::full_pipeline(g, params, seed)};
  };
  for (std::size_t start = 0; start < tasks.size(); start += static_cast<std::size_t>(c.jobs)) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(tasks.size(), start + c.jobs); ++i)
      batch.push_back(std::async(c.jobs > 1 ? std::launch::async : std::launch::deferred, work, i));
    for (auto& f : batch) f.get();
  }

  std::ostringstream table;
  table << "n,seed,admissible,lp_cost,opt,cost,ratio_to_opt,ratio_to_lp,eps_r,guarantee_bound,guarantee_ok,chosen,"
           "cuts,edge_bound_ok\n";
  struct Summary {
    int instances = 0, certified = 0, guarantee_ok = 0;
    std::optional<double> max_ratio_opt, max_ratio_lp;
    double sum_ratio_opt = 0.0;
    int with_opt = 0;
  };
  std::vector<Summary> summary(c.sizes.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [n, seed, r] = rows[i];
    Summary& s = summary[i / static_cast<std::size_t>(c.count)];
    ++s.instances;
    table << n << "," << seed << "," << r.admissible << "," << csv_number(r.lp_cost) << ","
          << (r.opt ? std::to_string(*r.opt) : "") << ",";
    if (r.certified()) {
      ++s.certified;
      table << ",,,,,0,certificate," << r.cuts << ",\n";
      continue;
    }
    table << r.cost << "," << csv_number(r.ratio_to_opt) << "," << csv_number(r.ratio_to_lp) << ","
          << csv_number(r.combined->measured_eps_r()) << "," << csv_number(r.guarantee_bound) << ","
          << (r.guarantee_ok ? 1 : 0) << "," << r.combined->chosen << "," << r.cuts << ","
          << (r.combined->edge_check.ok() ? 1 : 0) << "\n";
    s.guarantee_ok += r.guarantee_ok;
    if (r.ratio_to_opt) {
      s.max_ratio_opt = std::max(s.max_ratio_opt.value_or(0.0), *r.ratio_to_opt);
      s.sum_ratio_opt += *r.ratio_to_opt;
      ++s.with_opt;
    }
    if (r.ratio_to_lp) s.max_ratio_lp = std::max(s.max_ratio_lp.value_or(0.0), *r.ratio_to_lp);
  }
  emit(table.str(), c.run.out, "bench.csv");

  std::ostringstream sum;
  sum << "n,instances,certified,guarantee_ok,max_ratio_opt,mean_ratio_opt,max_ratio_lp\n";
  for (std::size_t k = 0; k < c.sizes.size(); ++k) {
    const Summary& s = summary[k];
    sum << c.sizes[k] << "," << s.instances << "," << s.certified << "," << s.guarantee_ok << ","
        << csv_number(s.max_ratio_opt) << ","
        << csv_number(s.with_opt ? std::optional<double>(s.sum_ratio_opt / s.with_opt) : std::nullopt) << ","
        << csv_number(s.max_ratio_lp) << "\n";
  }
  if (c.summary.empty()) std::cerr << sum.str();
  else emit(sum.str(), c.summary, "bench-summary.csv");
  return kExitOk;
}

void add_model_options(CLI::App* app, RunConfig& c) {
  app->add_option("--eps-q", c.epsilon_q, "preclustering agreement parameter")->check(CLI::Range(0.0, 1.0));
  app->add_option("--eps", c.epsilon, "rounding error parameter")->check(CLI::PositiveNumber);
  app->add_option("--rank", c.rank, "lift order r of the relaxations")->check(CLI::Range(2, 8));
  app->add_option("--trials", c.trials, "independent rounding trials, best kept")->check(CLI::Range(1, 100000));
  app->add_option("--oracle-limit", c.oracle_limit, "largest n for the exact optimum")->check(CLI::Range(0, 20));
  app->add_option("--max-cuts", c.max_cuts, "separation planes added before giving up")->check(CLI::Range(0, 1000));
  app->add_option("--noise", c.noise, "sign flip probability for --gen")->check(CLI::Range(0.0, 1.0));
  app->add_option("--out", c.out, "output file (default: $" + std::string(kOutDirEnv) + " or stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation clustering by combined set and pivot rounding"};
  app.require_subcommand(1);

  RunConfig run;
  CLI::App* run_cmd = app.add_subcommand("run", "precluster, solve the LP, round, write a JSON report");
  auto* gen = run_cmd->add_option("--gen", run.gen, "uniform:<n>[:<p>] | planted:<sizes> | adversarial:<sizes>[:<hubs>]");
  auto* inst = run_cmd->add_option("--instance", run.instance, "instance file")->check(CLI::ExistingFile);
  gen->excludes(inst);
  run_cmd->add_option("--seed", run.seed, "seed for generation and rounding")->required();
  add_model_options(run_cmd, run);

  VerifyConfig ver;
  CLI::App* ver_cmd = app.add_subcommand("verify", "numeric checks of the ratio analysis");
  ver_cmd->add_option("--grid-step", ver.grid_step, "grid for the combined ratio, at most 1e-3");
  ver_cmd->add_option("--f-grid-step", ver.f_grid_step, "grid for the + constant check, at most 0.05");
  ver_cmd->add_option("--samples", ver.samples, "feasible points per triangle kind")->check(CLI::Range(1, 100000000));
  ver_cmd->add_option("--seed", ver.seed, "sampler seed");
  ver_cmd->add_option("--plus-constant", ver.plus_constant, "constant checked in min(c + x, 2)");
  ver_cmd->add_option("--out", ver.out, "output file (default: $" + std::string(kOutDirEnv) + " or stdout)");

  BenchConfig bench;
  bench.run.seed = 0;
  std::string sizes = "10";
  CLI::App* bench_cmd = app.add_subcommand("bench", "seed sweep over uniform instances, CSV table");
  bench_cmd->add_option("--gen", bench.run.gen, "uniform[:<n>[:<p>]]; n is taken from --sizes");
  bench_cmd->add_option("--sizes", sizes, "comma-separated n values");
  bench_cmd->add_option("--count", bench.count, "instances per size");
  bench_cmd->add_option("--seed", bench.run.seed, "first seed of the sweep");
  bench_cmd->add_option("--jobs", bench.jobs, "instances solved at once");
  bench_cmd->add_option("--summary", bench.summary, "summary CSV file (default: stderr)");
  add_model_options(bench_cmd, bench.run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*ver_cmd) {
      if (!(ver.grid_step > 0.0 && ver.grid_step <= 1e-3) || !(ver.f_grid_step > 0.0 && ver.f_grid_step <= 0.05)) {
        std::cerr << "usage error: --grid-step must be in (0, 1e-3] and --f-grid-step in (0, 0.05]\n";
        return kExitError;
      }
      return cmd_verify(ver);
    }
    bench.sizes = parse_sizes(sizes);
    return cmd_bench(bench);
  } catch (const cc::ParseError& e) {
    std::cerr << "error: instance " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
