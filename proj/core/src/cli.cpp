// SPDX-License-Identifier: Apache-2.0

#include "optsweep/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "optsweep/clang_adapter.hpp"
#include "optsweep/diff.hpp"
#include "optsweep/env_probe.hpp"
#include "optsweep/errors.hpp"
#include "optsweep/explore.hpp"
#include "optsweep/mock_adapter.hpp"
#include "optsweep/render.hpp"
#include "optsweep/report.hpp"
#include "optsweep/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace optsweep {

namespace {

constexpr const char* kDefaultStore = "optsweep-store";

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

/// Config-file fallback for options the user did not pass on the command
/// line. Flag (and environment) values always win.
struct ConfigBinder {
  std::vector<std::pair<CLI::Option*, std::function<void(const json&)>>> binds;

  template <typename T>
  void bind(CLI::Option* opt, T* target, const std::string& key) {
    binds.emplace_back(opt, [target, key](const json& cfg) {
      if (cfg.contains(key)) *target = cfg.at(key).get<T>();
    });
  }
  void apply(const json& cfg) {
    for (auto& [opt, fn] : binds) {
      if (opt->count() == 0) fn(cfg);
    }
  }
};

struct PipelineInputs {
  std::string whitelist_path;
  std::string analyses_path;
  std::string fixture_path;
};

PassPipeline parse_from_inputs(const std::string& raw_text,
                               const PipelineInputs& in,
                               const std::string& level,
                               PipelineSource source, std::ostream& err) {
  std::set<std::string> whitelist = load_pass_name_list(in.whitelist_path);
  std::set<std::string> analyses;
  if (!in.analyses_path.empty()) {
    analyses = load_pass_name_list(in.analyses_path);
  }
  ParseDiagnostics diags;
  PassPipeline pipe = parse_pipeline(raw_text, whitelist, level, analyses, &diags);
  pipe.source = source;
  for (const auto& name : diags.unknown_passes) {
    err << "warning: pass '" << name
        << "' is neither a documented transformation nor a known analysis; "
           "keeping it inline as an analysis\n";
  }
  return pipe;
}

int cmd_extract_pipeline(const std::string& adapter_name,
                         const PipelineInputs& inputs,
                         const std::string& level, const std::string& target,
                         const std::string& out_path, std::ostream& out,
                         std::ostream& err) {
  std::string raw;
  PipelineSource source = PipelineSource::Introspected;
  if (!inputs.fixture_path.empty()) {
    raw = read_text(inputs.fixture_path);
    source = PipelineSource::Fixture;
  } else if (adapter_name == "clang") {
    auto tools = ClangAdapter::detect();
    if (!tools) {
      err << "error: no usable clang/opt toolchain on PATH\n";
      return 3;
    }
    ClangAdapter adapter(*tools, load_pass_name_list(inputs.whitelist_path));
    raw = adapter.introspect_pipeline(level, target);
  } else {
    err << "error: adapter '" << adapter_name
        << "' cannot introspect a pipeline; pass --fixture\n";
    return 2;
  }

  PassPipeline pipe = parse_from_inputs(raw, inputs, level, source, err);
  std::ostringstream listing;
  listing << "# " << level << " pass sequence (" << pipe.invocations.size()
          << " invocations, " << pipe.transformation_count()
          << " documented transformation truncation points)\n";
  for (const auto& inv : pipe.invocations) listing << inv.name << "\n";
  write_output(out_path, listing.str(), out);
  err << "parsed " << pipe.invocations.size() << " invocations, "
      << pipe.transformation_count() << " transformation truncation points\n";
  return 0;
}

struct ExploreArgs {
  std::string benchmarks_path;
  std::string adapter = "mock";
  std::string model_path;
  PipelineInputs pipeline;
  std::string level = "-O3";
  std::string target;
  std::string store_root;
  std::string artifact_root = "results";
  std::string run_id;
  int jobs = 1;
  StabilityPolicy policy;
  double tie_epsilon = 0.005;
  bool dry_run = false;
  bool require_stable_env = false;
  std::vector<std::string> backend_flags;
};

int cmd_explore(const ExploreArgs& args, std::ostream& out, std::ostream& err) {
  std::unique_ptr<CompilerAdapter> adapter;
  if (args.adapter == "mock") {
    if (args.model_path.empty()) {
      err << "error: --adapter mock needs --model <cost-model.json>\n";
      return 2;
    }
    adapter = std::make_unique<MockAdapter>(CostModel::from_file(args.model_path));
  } else if (args.adapter == "clang") {
    auto tools = ClangAdapter::detect();
    if (!tools) {
      err << "error: no usable clang/opt toolchain on PATH\n";
      return 3;
    }
    adapter = std::make_unique<ClangAdapter>(
        *tools, load_pass_name_list(args.pipeline.whitelist_path),
        args.backend_flags);
  } else {
    err << "error: unknown adapter '" << args.adapter << "'\n";
    return 2;
  }

  std::string raw;
  PipelineSource source = PipelineSource::Fixture;
  if (!args.pipeline.fixture_path.empty()) {
    raw = read_text(args.pipeline.fixture_path);
  } else {
    raw = adapter->introspect_pipeline(args.level, args.target);
    source = PipelineSource::Introspected;
  }
  PassPipeline pipe =
      parse_from_inputs(raw, args.pipeline, args.level, source, err);

  if (args.dry_run) {
    for (const auto& cfg : generate_configs(pipe)) {
      out << cfg.prefix_len << "\t" << config_label(cfg) << "\n";
    }
    return 0;
  }

  auto env = probe_environment();
  std::string advice = stability_advice(env);
  if (!advice.empty()) {
    if (args.require_stable_env) {
      err << "error: environment not ready for timing: " << advice << "\n";
      return 3;
    }
    err << "warning: " << advice << "\n";
  }

  ExploreOptions options;
  options.level = args.level;
  options.target = args.target.empty() ? env["arch"] : args.target;
  options.jobs = args.jobs;
  options.policy = args.policy;
  options.criteria.tie_epsilon = args.tie_epsilon;
  options.artifact_root = args.artifact_root;

  std::vector<BenchmarkSpec> benchmarks =
      load_benchmark_manifest(args.benchmarks_path);
  RunRecord run = explore_run(benchmarks, pipe, *adapter, options);
  run.run_id = args.run_id;

  for (const auto& [id, why] : run.aborted) {
    err << "warning: benchmark " << id << " aborted: " << why << "\n";
  }
  if (run.profiles.empty()) {
    err << "error: every benchmark aborted; nothing to save\n";
    return 3;
  }
  RunStore store(args.store_root);
  std::string run_id = store.save_run(run);
  err << "explored " << run.profiles.size() << " benchmark(s), "
      << generate_configs(pipe).size() << " configs each\n";
  out << run_id << "\n";
  return 0;
}

int cmd_report(const std::string& store_root, const std::string& run_id,
               const std::string& latest_target, const ReportParams& params,
               const std::string& format, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  RunStore store(store_root);
  std::string id = run_id;
  if (id.empty() && !latest_target.empty()) {
    auto latest = store.latest_reference(latest_target);
    if (!latest) {
      err << "error: no clean run stored for target '" << latest_target << "'\n";
      return 3;
    }
    id = *latest;
  }
  if (id.empty()) {
    err << "error: pass --run <id> or --latest <target>\n";
    return 2;
  }
  RunRecord run = store.load_run(id);
  auto clusters = build_regression_report(run.profiles, params);

  std::string rendered;
  if (format == "text") rendered = render_report_text(clusters, run.level);
  else if (format == "csv") rendered = render_report_csv(clusters);
  else if (format == "json") rendered = render_report_json(clusters, run.level);
  else {
    err << "error: unknown format '" << format << "'\n";
    return 2;
  }
  write_output(out_path, rendered, out);

  if (!run_is_clean(run)) {
    err << "correctness failures present in run " << id << "\n";
    return 1;
  }
  return 0;
}

int cmd_diff(const std::string& store_root, const std::string& run_id,
             std::string reference_id, double threshold, bool strict_target,
             const std::string& format, const std::string& out_path,
             std::ostream& out, std::ostream& err) {
  RunStore store(store_root);
  RunRecord current = store.load_run(run_id);
  if (reference_id.empty()) {
    for (const auto& row : store.list_runs()) {
      if (row.run_id != run_id && row.clean &&
          (!strict_target || row.target == current.target)) {
        reference_id = row.run_id;  // newest clean run wins (save order)
      }
    }
    if (reference_id.empty()) {
      err << "error: no reference run available; pass --reference <id>\n";
      return 3;
    }
  }
  RunRecord reference = store.load_run(reference_id);
  RunDiff diff = diff_runs(current, reference, threshold, strict_target);
  write_output(out_path,
               format == "json" ? render_diff_json(diff) : render_diff_text(diff),
               out);
  return diff.has_correctness_regression() ? 1 : 0;
}

int cmd_replay(const std::string& store_root, const std::string& fixtures_dir,
               const std::string& run_id, std::ostream& out, std::ostream& err) {
  std::vector<ConfigProfile> profiles = load_profile_fixtures(fixtures_dir);
  RunRecord run;
  run.run_id = run_id;
  run.target = profiles.front().target;
  run.level = profiles.front().level;
  run.compiler_version = profiles.front().compiler_version;
  run.environment["replayed_from"] = fs::absolute(fixtures_dir).string();
  run.profiles = std::move(profiles);

  RunStore store(store_root);
  std::string id = store.save_run(run);
  err << "replayed " << run.profiles.size() << " profile(s) from "
      << fixtures_dir << "\n";
  out << id << "\n";
  return 0;
}

int cmd_emit_plotdata(const std::string& store_root, const std::string& run_id,
                      const std::string& bench_id, int skip_first,
                      const std::string& out_path, std::ostream& out,
                      std::ostream& err) {
  RunStore store(store_root);
  RunRecord run = store.load_run(run_id);
  for (const auto& p : run.profiles) {
    if (p.benchmark_id == bench_id) {
      write_output(out_path, render_plotdata_csv(profile_plotdata(p, skip_first)),
                   out);
      return 0;
    }
  }
  err << "error: run " << run_id << " has no benchmark '" << bench_id << "'\n";
  return 3;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exploration of standard-optimization-level prefix "
               "configurations with an enhanced nightly-regression report"};
  app.require_subcommand(1);
  ConfigBinder cfg_bind;
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; command-line flags take precedence");

  // ---- extract-pipeline ----
  auto* extract = app.add_subcommand(
      "extract-pipeline", "obtain and normalize a level's pass sequence");
  std::string ex_adapter = "clang", ex_level = "-O3", ex_target, ex_out = "-";
  PipelineInputs ex_inputs;
  extract->add_option("--adapter", ex_adapter, "mock or clang")
      ->check(CLI::IsMember({"mock", "clang"}));
  extract->add_option("--fixture", ex_inputs.fixture_path,
                      "read the pass sequence from a fixture file");
  auto* ex_wl = extract->add_option("--whitelist", ex_inputs.whitelist_path,
                                    "documented transformation pass list");
  ex_wl->required();
  extract->add_option("--analyses", ex_inputs.analyses_path,
                      "known analysis pass list (unknown names warn)");
  extract->add_option("--level", ex_level, "optimization level");
  extract->add_option("--target", ex_target, "target name");
  extract->add_option("--out", ex_out, "output file ('-' for stdout)");

  // ---- explore ----
  auto* explore = app.add_subcommand(
      "explore", "sweep every prefix configuration over the benchmarks");
  ExploreArgs ea;
  explore->add_option("--benchmarks", ea.benchmarks_path, "benchmark manifest")
      ->required();
  explore->add_option("--adapter", ea.adapter, "mock or clang")
      ->check(CLI::IsMember({"mock", "clang"}));
  explore->add_option("--model", ea.model_path, "mock cost model JSON");
  explore->add_option("--pipeline", ea.pipeline.fixture_path,
                      "pipeline fixture (introspected when omitted)");
  explore->add_option("--whitelist", ea.pipeline.whitelist_path,
                      "documented transformation pass list")
      ->required();
  explore->add_option("--analyses", ea.pipeline.analyses_path,
                      "known analysis pass list");
  cfg_bind.bind(explore->add_option("--level", ea.level, "exploration level"),
                &ea.level, "level");
  explore->add_option("--target", ea.target, "target name for the run record");
  auto* store_opt =
      explore->add_option("--store", ea.store_root, "run store root")
          ->envname("OPTSWEEP_STORE");
  cfg_bind.bind(store_opt, &ea.store_root, "store");
  cfg_bind.bind(explore->add_option("--artifact-root", ea.artifact_root,
                                    "build artifact retention root"),
                &ea.artifact_root, "artifact_root");
  cfg_bind.bind(explore->add_option("--jobs", ea.jobs, "parallel build workers")
                    ->check(CLI::Range(1, 4096)),
                &ea.jobs, "jobs");
  cfg_bind.bind(explore->add_option("--repetitions", ea.policy.repetitions,
                                    "timed sessions per config")
                    ->check(CLI::Range(1, 1000000)),
                &ea.policy.repetitions, "repetitions");
  cfg_bind.bind(
      explore->add_option("--min-duration", ea.policy.calibration_min_duration,
                          "calibration target duration, seconds")
          ->check(CLI::PositiveNumber),
      &ea.policy.calibration_min_duration, "min_duration");
  cfg_bind.bind(explore->add_option("--cv-threshold", ea.policy.cv_threshold,
                                    "coefficient-of-variation stability gate")
                    ->check(CLI::NonNegativeNumber),
                &ea.policy.cv_threshold, "cv_threshold");
  bool strict_cv = false;
  explore->add_flag("--strict-cv", strict_cv,
                    "retry once instead of only flagging unstable timings");
  cfg_bind.bind(explore->add_option("--tie-epsilon", ea.tie_epsilon,
                                    "relative exec-time window treated as a tie"),
                &ea.tie_epsilon, "tie_epsilon");
  explore->add_option("--run-id", ea.run_id, "explicit run id");
  explore->add_flag("--dry-run", ea.dry_run,
                    "print the generated config list and stop");
  explore->add_flag("--require-stable-env", ea.require_stable_env,
                    "refuse to run when the environment looks noisy");
  explore->add_option("--backend-flag", ea.backend_flags,
                      "extra flag passed through to back-end and linker");

  // ---- report ----
  auto* report = app.add_subcommand(
      "report", "render the enhanced regression report for a run");
  std::string rp_run, rp_latest, rp_format = "text", rp_out = "-", rp_store;
  ReportParams rp_params;
  report->add_option("--run", rp_run, "run id");
  report->add_option("--latest", rp_latest, "newest clean run for a target");
  auto* rp_store_opt = report->add_option("--store", rp_store, "run store root")
                           ->envname("OPTSWEEP_STORE");
  cfg_bind.bind(rp_store_opt, &rp_store, "store");
  cfg_bind.bind(report->add_option("--threshold", rp_params.threshold_pct,
                                   "minimum exec-time reduction %, exclusive"),
                &rp_params.threshold_pct, "threshold");
  cfg_bind.bind(report->add_option("--epsilon", rp_params.epsilon,
                                   "relative margin for 'outperforms'"),
                &rp_params.epsilon, "epsilon");
  cfg_bind.bind(report->add_option("--sustain", rp_params.sustain,
                                   "consecutive beating configs required"),
                &rp_params.sustain, "sustain");
  report->add_option("--format", rp_format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  report->add_option("--out", rp_out, "output file ('-' for stdout)");

  // ---- diff ----
  auto* diff = app.add_subcommand(
      "diff", "compare a run against a reference run");
  std::string df_run, df_ref, df_format = "text", df_out = "-", df_store;
  double df_threshold = 3.0;
  bool df_loose_target = false;
  diff->add_option("--run", df_run, "current run id")->required();
  diff->add_option("--reference", df_ref,
                   "reference run id (default: newest clean run)");
  auto* df_store_opt = diff->add_option("--store", df_store, "run store root")
                           ->envname("OPTSWEEP_STORE");
  cfg_bind.bind(df_store_opt, &df_store, "store");
  cfg_bind.bind(diff->add_option("--threshold", df_threshold,
                                 "percentage-point change worth reporting"),
                &df_threshold, "threshold");
  diff->add_flag("--allow-target-mismatch", df_loose_target,
                 "diff runs from different targets");
  diff->add_option("--format", df_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  diff->add_option("--out", df_out, "output file ('-' for stdout)");

  // ---- replay ----
  auto* replay = app.add_subcommand(
      "replay", "register a run from stored profile documents");
  std::string rl_fixtures, rl_run_id, rl_store;
  replay->add_option("--fixtures", rl_fixtures, "profile fixture directory")
      ->required();
  replay->add_option("--run-id", rl_run_id, "explicit run id");
  auto* rl_store_opt = replay->add_option("--store", rl_store, "run store root")
                           ->envname("OPTSWEEP_STORE");
  cfg_bind.bind(rl_store_opt, &rl_store, "store");

  // ---- emit-plotdata ----
  auto* plot = app.add_subcommand(
      "emit-plotdata", "per-config improvement series for one benchmark");
  std::string pl_run, pl_bench, pl_out = "-", pl_store;
  int pl_skip = 0;
  plot->add_option("--run", pl_run, "run id")->required();
  plot->add_option("--benchmark", pl_bench, "benchmark id")->required();
  plot->add_option("--skip-first", pl_skip,
                   "drop the first N axis points (slow unoptimized configs)");
  auto* pl_store_opt = plot->add_option("--store", pl_store, "run store root")
                           ->envname("OPTSWEEP_STORE");
  cfg_bind.bind(pl_store_opt, &pl_store, "store");
  plot->add_option("--out", pl_out, "output file ('-' for stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help() << "\n";
    return 2;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) cfg = json::parse(read_text(config_path));
    cfg_bind.apply(cfg);

    auto store_or_default = [&](std::string& s) {
      if (s.empty()) s = kDefaultStore;
    };

    if (extract->parsed()) {
      return cmd_extract_pipeline(ex_adapter, ex_inputs, ex_level, ex_target,
                                  ex_out, out, err);
    }
    if (explore->parsed()) {
      ea.policy.warn_only = !strict_cv;
      store_or_default(ea.store_root);
      return cmd_explore(ea, out, err);
    }
    if (report->parsed()) {
      store_or_default(rp_store);
      return cmd_report(rp_store, rp_run, rp_latest, rp_params, rp_format,
                        rp_out, out, err);
    }
    if (diff->parsed()) {
      store_or_default(df_store);
      return cmd_diff(df_store, df_run, df_ref, df_threshold, !df_loose_target,
                      df_format, df_out, out, err);
    }
    if (replay->parsed()) {
      store_or_default(rl_store);
      return cmd_replay(rl_store, rl_fixtures, rl_run_id, out, err);
    }
    if (plot->parsed()) {
      store_or_default(pl_store);
      return cmd_emit_plotdata(pl_store, pl_run, pl_bench, pl_skip, pl_out, out,
                               err);
    }
    err << "error: no command\n" << app.help();
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace optsweep
