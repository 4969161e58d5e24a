#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "blocksim/blocktree.hpp"
#include "blocksim/experiments.hpp"
#include "blocksim/sim_infinite.hpp"
#include "blocksim/sim_matrix.hpp"
#include "blocksim/sim_network.hpp"
#include "blocksim/validation.hpp"

namespace blocksim::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < length; ++i) {
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return out.str();
}

namespace {

struct Artifact {
  std::string path;
  std::string bytes;
};

struct Execution {
  std::vector<Artifact> artifacts;
  json stream_seeds = json::array();
  std::string summary;
};

json to_json(const DistributionSpec& spec) {
  json j{{"kind", kind_name(spec.kind)}, {"mean", spec.mean}};
  if (spec.kind == DistKind::gamma || spec.kind == DistKind::chi_squared) j["shape"] = spec.shape;
  return j;
}

DistributionSpec distribution_from_json(const json& j) {
  if (j.is_string()) return parse_distribution(j.get<std::string>());
  DistributionSpec spec;
  spec.kind = parse_kind(j.at("kind").get<std::string>());
  spec.mean = j.at("mean").get<double>();
  if (j.contains("shape")) {
    spec.shape = j.at("shape").get<double>();
  } else if (spec.kind == DistKind::chi_squared) {
    spec.shape = spec.mean;
  } else if (spec.kind == DistKind::gamma) {
    throw ConfigError("gamma needs a shape");
  }
  return spec;
}

std::uint64_t env_seed() {
  const char* text = std::getenv("BLOCKSIM_SEED");
  if (text == nullptr || *text == '\0') return 0;
  try {
    std::size_t used = 0;
    auto value = std::stoull(text, &used, 0);
    if (used != std::string(text).size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw ConfigError(std::string("BLOCKSIM_SEED is not an integer: '") + text + "'");
  }
}

json defaults(const std::string& command, const std::string& kind) {
  json cfg{{"command", command},
           {"engine", "infinite"},
           {"m", 1},
           {"n", 1000},
           {"alpha", to_json(make_exponential(1.0))},
           {"beta", to_json(make_exponential(0.1))},
           {"seed", env_seed()},
           {"use_pruning", true}};
  if (command == "simulate") {
    cfg["out"] = "outcome.json";
    cfg["tree_out"] = nullptr;
    cfg["tree_format"] = nullptr;
    cfg["series_out"] = nullptr;
    return cfg;
  }
  cfg["kind"] = kind;
  cfg["jobs"] = 1;
  cfg["out"] = kind + ".csv";
  if (kind == "convergence") {
    cfg["replications"] = 100;
    cfg["ms"] = ConvergencePlan{}.ms;
  } else if (kind == "efficiency") {
    cfg["replications"] = 100;
    cfg["ratios"] = default_ratio_grid();
  } else if (kind == "histogram") {
    cfg["replications"] = 1000;
    cfg["m"] = 100;
    cfg["bins"] = 40;
  } else if (kind == "single") {
    cfg["replications"] = 100;
  } else {
    throw ConfigError("unknown experiment '" + kind +
                      "' (convergence, efficiency, histogram, single)");
  }
  return cfg;
}

ModelConfig model_from(const json& cfg) {
  ModelConfig model;
  model.engine = parse_engine(cfg.at("engine").get<std::string>());
  model.m = cfg.at("m").get<std::size_t>();
  model.n = cfg.at("n").get<std::size_t>();
  model.alpha = distribution_from_json(cfg.at("alpha"));
  model.beta = distribution_from_json(cfg.at("beta"));
  model.use_pruning = cfg.at("use_pruning").get<bool>();
  model.validate();
  return model;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string series_csv(const HeightSeries& series) {
  std::ostringstream out;
  out << "k,t,h,z\n";
  for (std::size_t k = 0; k < series.h.size(); ++k) {
    out << k << ',' << format_number(series.t[k]) << ',' << series.h[k] << ',' << series.z[k]
        << '\n';
  }
  return out.str();
}

Execution execute_simulate(const json& cfg) {
  const ModelConfig model = model_from(cfg);
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const bool want_tree = !cfg.at("tree_out").is_null();
  const bool want_series = !cfg.at("series_out").is_null();
  if (want_tree && model.engine != Engine::network) {
    throw ConfigError("--tree-out needs --engine network");
  }

  SimOutcome outcome;
  switch (model.engine) {
    case Engine::network: {
      auto c = model.net(seed);
      c.record_tree = want_tree;
      c.record_series = want_series;
      outcome = simulate_network(c);
      break;
    }
    case Engine::matrix: {
      auto c = model.net(seed);
      c.record_series = want_series;
      outcome = simulate_matrix(c);
      break;
    }
    case Engine::infinite: {
      auto c = model.inf(seed);
      c.record_series = want_series;
      outcome = simulate_infinite(c);
      break;
    }
  }

  json result{{"engine", engine_name(model.engine)},
              {"n", model.n},
              {"height", outcome.final_height},
              {"p_n", outcome.p_n},
              {"seed", seed},
              {"ratio", model.beta.mean / model.alpha.mean},
              {"regime", regime_name(classify(model.alpha.mean, model.beta.mean))}};
  if (model.engine != Engine::infinite) result["m"] = model.m;
  if (model.engine != Engine::network) result["mean_scan_length"] = outcome.mean_scan_length();

  Execution exec;
  if (want_tree) {
    const auto gaps = invalid_gap_histogram(*outcome.tree);
    json hist = json::object();
    for (const auto& [gap, count] : gaps.counts) hist[std::to_string(gap)] = count;
    result["invalid_gaps"] = {
        {"histogram", hist},
        {"trailing", gaps.trailing},
        {"mean", gaps.mean_gap()},
        {"rate_form", (1.0 - outcome.p_n) / model.alpha.mean},
        {"count_form", (1.0 - outcome.p_n) / outcome.p_n}};
    const std::string fmt_name = cfg.at("tree_format").is_null()
                                     ? (fs::path(cfg.at("tree_out").get<std::string>()).extension() == ".json" ? "json" : "dot")
                                     : cfg.at("tree_format").get<std::string>();
    exec.artifacts.push_back({cfg.at("tree_out").get<std::string>(),
                              export_tree(*outcome.tree, parse_tree_format(fmt_name))});
  }
  if (want_series) {
    exec.artifacts.push_back({cfg.at("series_out").get<std::string>(), series_csv(*outcome.series)});
  }
  exec.artifacts.insert(exec.artifacts.begin(), {cfg.at("out").get<std::string>(), dump(result)});
  exec.stream_seeds = outcome.seed_used;
  exec.summary = dump(result);
  return exec;
}

json point_seeds(std::uint64_t seed, std::size_t points) {
  json seeds = json::array();
  for (std::size_t p = 0; p < points; ++p) seeds.push_back(point_seed(seed, p));
  return seeds;
}

Execution execute_experiment(const json& cfg) {
  const auto kind = cfg.at("kind").get<std::string>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const auto reps = cfg.at("replications").get<std::size_t>();
  const auto jobs = cfg.at("jobs").get<unsigned>();
  const std::string out = cfg.at("out").get<std::string>();
  if (reps < 1) throw ConfigError("--reps must be >= 1");
  Execution exec;
  std::ostringstream summary;

  if (kind == "convergence") {
    ConvergencePlan plan;
    plan.base = model_from(cfg);
    plan.ms = cfg.at("ms").get<std::vector<std::size_t>>();
    plan.replications = reps;
    plan.seed = seed;
    plan.jobs = jobs;
    for (auto m : plan.ms) {
      if (m < 1) throw ConfigError("every m must be >= 1");
    }
    auto rows = convergence_experiment(plan);
    exec.artifacts.push_back({out, convergence_csv(rows)});
    exec.stream_seeds = point_seeds(seed, rows.size());
    const auto& inf = rows.back().estimate;
    for (const auto& row : rows) {
      if (!row.m) continue;
      summary << "m=" << *row.m << " mean=" << format_number(row.estimate.mean)
              << " |gap to A_inf|=" << format_number(std::abs(row.estimate.mean - inf.mean)) << '\n';
    }
    summary << "m=inf mean=" << format_number(inf.mean) << '\n';
  } else if (kind == "efficiency") {
    EfficiencyPlan plan;
    plan.base = model_from(cfg);
    plan.ratios = cfg.at("ratios").get<std::vector<double>>();
    plan.replications = reps;
    plan.seed = seed;
    plan.jobs = jobs;
    auto rows = efficiency_experiment(plan);
    exec.artifacts.push_back({out, efficiency_csv(rows)});
    exec.stream_seeds = point_seeds(seed, rows.size());
    for (const auto& row : rows) {
      summary << "ratio=" << format_number(row.ratio) << " mean_p=" << format_number(row.estimate.mean)
              << " predicted=" << format_number(row.predicted) << '\n';
    }
  } else if (kind == "histogram") {
    HistogramPlan plan;
    plan.base = model_from(cfg);
    plan.replications = reps;
    plan.bins = cfg.at("bins").get<std::size_t>();
    plan.seed = seed;
    plan.jobs = jobs;
    auto result = pdf_histogram_experiment(plan);
    exec.artifacts.push_back({out, histogram_csv(result)});
    exec.stream_seeds = point_seeds(seed, 2);
    summary << "ks_distance=" << format_number(result.ks_distance)
            << " mean_shift=" << format_number(result.mean_shift) << '\n';
  } else if (kind == "single") {
    const ModelConfig model = model_from(cfg);
    auto est = run_replications(model, reps, seed, jobs);
    std::ostringstream csv;
    csv << "engine,m,n,mean_p,std_err,q25,q50,q75,replications\n"
        << engine_name(model.engine) << ',' << model.m << ',' << model.n << ','
        << format_number(est.mean) << ',' << format_number(est.std_error) << ','
        << format_number(est.q25) << ',' << format_number(est.q50) << ','
        << format_number(est.q75) << ',' << est.replications << '\n';
    exec.artifacts.push_back({out, csv.str()});
    exec.stream_seeds = json::array({seed});
    summary << "mean_p=" << format_number(est.mean) << " std_err=" << format_number(est.std_error)
            << '\n';
  } else {
    throw ConfigError("unknown experiment '" + kind + "'");
  }
  exec.summary = summary.str();
  return exec;
}

Execution execute(const json& cfg) {
  const auto command = cfg.at("command").get<std::string>();
  if (command == "simulate") return execute_simulate(cfg);
  if (command == "experiment") return execute_experiment(cfg);
  throw ConfigError("manifest names unknown command '" + command + "'");
}

const char* csv_schema(const json& cfg) {
  if (cfg.at("command") != "experiment") return nullptr;
  const auto kind = cfg.at("kind").get<std::string>();
  if (kind == "convergence") return kConvergenceHeader;
  if (kind == "efficiency") return kEfficiencyHeader;
  if (kind == "histogram") return kHistogramHeader;
  return "engine,m,n,mean_p,std_err,q25,q50,q75,replications";
}

void write_file(const std::string& path, const std::string& bytes) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream file(p, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << bytes;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }

/// Runs `cfg`, writes its outputs and the manifest next to the main output.
int run_and_record(const json& cfg, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  Execution exec = execute(cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json outputs = json::array();
  for (const auto& a : exec.artifacts) {
    write_file(a.path, a.bytes);
    outputs.push_back({{"path", a.path}, {"sha256", sha256_hex(a.bytes)}});
  }
  json manifest{{"schema_version", kManifestSchema},
                {"tool_version", kToolVersion},
                {"config", cfg},
                {"base_seed", cfg.at("seed")},
                {"stream_seeds", exec.stream_seeds},
                {"wall_clock_seconds", seconds},
                {"outputs", outputs}};
  if (const char* schema = csv_schema(cfg)) manifest["csv_schema"] = schema;
  const auto mpath = manifest_path(cfg.at("out").get<std::string>());
  write_file(mpath, dump(manifest));

  out << exec.summary;
  out << "wrote " << exec.artifacts.front().path << " (manifest " << mpath << ")\n";
  return kOk;
}

int rerun(const std::string& manifest_file, const std::string& out_dir, std::ostream& out) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_file));
  } catch (const json::exception& e) {
    throw ConfigError("malformed manifest: " + std::string(e.what()));
  }
  json cfg = manifest.at("config");
  Execution exec = execute(cfg);

  bool identical = exec.artifacts.size() == manifest.at("outputs").size();
  for (std::size_t i = 0; i < exec.artifacts.size(); ++i) {
    const auto& a = exec.artifacts[i];
    const auto digest = sha256_hex(a.bytes);
    const bool same = identical && manifest["outputs"][i].at("sha256") == digest;
    identical = identical && same;
    out << (same ? "identical " : "DIFFERENT ") << a.path << ' ' << digest << '\n';
    if (!out_dir.empty()) write_file((fs::path(out_dir) / fs::path(a.path).filename()).string(), a.bytes);
  }
  return identical ? kOk : kValidationFailure;
}

int validate(const ValidationOptions& options, std::ostream& out) {
  bool ok = true;
  for (const auto& report : run_validation(options)) {
    out << (report.passed() ? "PASS " : "FAIL ") << report.name << " (" << report.cases
        << " cases, " << report.failures << " failures)\n";
    for (const auto& d : report.details) out << "    " << d << '\n';
    ok = ok && report.passed();
  }
  return ok ? kOk : kValidationFailure;
}

// Flags shared by simulate and experiment. Values land in `overrides` only
// when given, so they win over the config file without masking it.
struct ModelFlags {
  std::string config_file;
  std::string engine;
  std::size_t m = 0;
  std::size_t n = 0;
  std::string alpha;
  std::string beta;
  std::uint64_t seed = 0;
  bool no_pruning = false;
  std::string out;
  std::vector<CLI::Option*> options;

  void add(CLI::App& app) {
    app.add_option("--config", config_file, "JSON config file (flags override it)");
    options = {app.add_option("--engine", engine, "network | matrix | infinite"),
               app.add_option("--m", m, "worker count (bounded engines)"),
               app.add_option("--n", n, "blocks to produce, origin included"),
               app.add_option("--alpha", alpha, "production time, kind:mean[:shape]"),
               app.add_option("--beta", beta, "broadcast delay, kind:mean[:shape]"),
               app.add_option("--seed", seed, "base seed (default $BLOCKSIM_SEED or 0)"),
               app.add_flag("--no-pruning", no_pruning, "full scan in the infinite engine"),
               app.add_option("--out", out, "main output file")};
  }

  void apply(json& cfg) const {
    if (!config_file.empty()) {
      json file;
      try {
        file = json::parse(read_file(config_file));
      } catch (const json::exception& e) {
        throw ConfigError("malformed config file: " + std::string(e.what()));
      }
      for (auto& [key, value] : file.items()) {
        if (!cfg.contains(key)) throw ConfigError("unknown config key '" + key + "'");
        cfg[key] = value;
      }
    }
    if (options[0]->count()) cfg["engine"] = engine;
    if (options[1]->count()) cfg["m"] = m;
    if (options[2]->count()) cfg["n"] = n;
    if (options[3]->count()) cfg["alpha"] = to_json(parse_distribution(alpha));
    if (options[4]->count()) cfg["beta"] = to_json(parse_distribution(beta));
    if (options[5]->count()) cfg["seed"] = seed;
    if (options[6]->count()) cfg["use_pruning"] = !no_pruning;
    if (options[7]->count()) cfg["out"] = out;
    // Normalize distributions given as strings in the file.
    cfg["alpha"] = to_json(distribution_from_json(cfg["alpha"]));
    cfg["beta"] = to_json(distribution_from_json(cfg["beta"]));
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for proof-of-work block trees with broadcast delay", "blocksim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  auto* simulate = app.add_subcommand("simulate", "run one simulation");
  ModelFlags sim_flags;
  sim_flags.add(*simulate);
  std::string tree_out;
  std::string tree_format;
  std::string series_out;
  auto* tree_opt = simulate->add_option("--tree-out", tree_out, "write the block tree (network engine)");
  auto* tree_fmt_opt = simulate->add_option("--tree-format", tree_format, "dot | json (default from extension)");
  auto* series_opt = simulate->add_option("--series-out", series_out, "write k,t,h,z per block as CSV");

  auto* experiment = app.add_subcommand("experiment", "run a replicated experiment");
  std::string kind;
  experiment->add_option("kind", kind, "convergence | efficiency | histogram | single")->required();
  ModelFlags exp_flags;
  exp_flags.add(*experiment);
  std::size_t reps = 0;
  unsigned jobs = 1;
  std::vector<std::size_t> ms;
  std::vector<double> ratios;
  std::size_t bins = 0;
  auto* reps_opt = experiment->add_option("--reps", reps, "replications per point");
  auto* jobs_opt = experiment->add_option("--jobs", jobs, "concurrent replications");
  auto* ms_opt = experiment->add_option("--ms", ms, "worker counts (convergence)")->delimiter(',');
  auto* ratios_opt = experiment->add_option("--ratios", ratios, "beta/alpha ratios (efficiency)")->delimiter(',');
  auto* bins_opt = experiment->add_option("--bins", bins, "histogram bins");

  auto* validate_cmd = app.add_subcommand("validate", "run the engine self-checks");
  ValidationOptions vopts;
  bool quick = false;
  std::string fault;
  validate_cmd->add_option("--configs", vopts.random_configs, "random configurations per suite");
  validate_cmd->add_option("--seed", vopts.seed, "seed for the random configurations");
  validate_cmd->add_flag("--quick", quick, "small subset");
  validate_cmd->add_option("--inject-fault", fault, "test hook: non-strict-visibility");

  auto* rerun_cmd = app.add_subcommand("rerun", "re-execute a run manifest and compare digests");
  std::string manifest_file;
  std::string out_dir;
  rerun_cmd->add_option("manifest", manifest_file, "manifest JSON")->required();
  rerun_cmd->add_option("--out-dir", out_dir, "also write the regenerated outputs here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*simulate) {
      json cfg = defaults("simulate", "");
      sim_flags.apply(cfg);
      if (tree_opt->count()) cfg["tree_out"] = tree_out;
      if (tree_fmt_opt->count()) cfg["tree_format"] = tree_format;
      if (series_opt->count()) cfg["series_out"] = series_out;
      return run_and_record(cfg, out);
    }
    if (*experiment) {
      json cfg = defaults("experiment", kind);
      exp_flags.apply(cfg);
      if (reps_opt->count()) cfg["replications"] = reps;
      if (jobs_opt->count()) cfg["jobs"] = jobs;
      if (ms_opt->count()) cfg["ms"] = ms;
      if (ratios_opt->count()) cfg["ratios"] = ratios;
      if (bins_opt->count()) cfg["bins"] = bins;
      return run_and_record(cfg, out);
    }
    if (*validate_cmd) {
      if (quick) {
        vopts.random_configs = std::min<std::size_t>(vopts.random_configs, 6);
        vopts.max_n = 200;
      }
      if (fault == "non-strict-visibility") {
        vopts.pruned_visibility = Visibility::non_strict;
      } else if (!fault.empty()) {
        throw ConfigError("unknown fault '" + fault + "'");
      }
      return validate(vopts, out);
    }
    return rerun(manifest_file, out_dir, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const json::exception& e) {
    err << "error: bad configuration value: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace blocksim::cli
