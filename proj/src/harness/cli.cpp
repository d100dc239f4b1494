#include "tt/harness/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "tt/harness/matrix.hpp"
#include "tt/harness/report.hpp"
#include "tt/harness/stacks.hpp"
#include "tt/transports/trace_model.hpp"

namespace tt::harness {

namespace {

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  auto cfg = load_config(path);
  if (!cfg) {
    err << path << ": " << cfg.error().str() << '\n';
    return kExitConfig;
  }
  out << "ok: " << cfg->name << " (stack " << cfg->stack.name << ": " << cfg->stack.str() << ", seed " << *cfg->seed
      << ", trials " << cfg->trials << ")\n";
  return kExitOk;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::size_t> trials,
            const std::string& stack, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  auto cfg = load_config(path);
  if (!cfg) {
    err << path << ": " << cfg.error().str() << '\n';
    return kExitConfig;
  }
  RunOptions ro;
  ro.seed = seed;
  ro.trials = trials;
  if (!stack.empty()) {
    // a named stack, or a comma separated layer list
    ro.stack = named_stack(stack);
    if (!ro.stack) {
      auto d = parse_stack("custom", stack);
      if (!d) {
        err << "--stack: " << d.error().message() << '\n';
        return kExitConfig;
      }
      if (auto v = validate_builtin(*d); !v) {
        err << "--stack: " << v.error().message() << '\n';
        return kExitConfig;
      }
      ro.stack = *d;
    }
  }
  auto run = run_scenario(*cfg, ro);
  if (!run) {
    err << path << ": " << run.error() << '\n';
    return kExitConfig;
  }
  if (!out_dir.empty()) {
    if (auto w = write_reports(*run, out_dir); !w) {
      err << w.error() << '\n';
      return kExitConfig;
    }
  }
  const auto& r = run->report;
  out << "scenario " << r.scenario << " stack " << r.stack << " seed " << r.seed << ": " << r.trials.size()
      << " trials, TPR " << format_rate(r.tpr) << ", FPR " << format_rate(r.fpr) << ", collateral "
      << format_rate(r.collateral) << ", pass rate " << format_rate(r.pass_rate) << '\n';
  if (!r.expectation.empty()) out << "expectation " << r.expectation << ": " << (r.expectation_met ? "met" : "NOT met") << '\n';
  if (!out_dir.empty()) out << "reports written to " << out_dir << '\n';
  return r.expectation_met ? kExitOk : kExitUnexpected;
}

int cmd_matrix(const std::string& dir, const std::string& out_file, std::optional<std::size_t> trials,
               std::ostream& out, std::ostream& err) {
  auto suites = load_config_dir(dir);
  if (!suites) {
    err << suites.error() << '\n';
    return kExitConfig;
  }
  MatrixOptions mo;
  mo.trials = trials;
  auto m = build_matrix(*suites, mo);
  if (!m) {
    err << m.error() << '\n';
    return kExitConfig;
  }
  const std::string text = render_matrix(*m);
  std::ofstream f(out_file, std::ios::binary);
  if (!f || !(f << text)) {
    err << "cannot write " << out_file << '\n';
    return kExitConfig;
  }
  out << text;
  return kExitOk;
}

int cmd_trace_stats(const std::string& path, std::size_t min_rows, std::ostream& out, std::ostream& err) {
  auto m = transports::TraceModel::load(path, {min_rows});
  if (!m) {
    err << path << ": " << m.error().message << '\n';
    return kExitConfig;
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto quantile = [](std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))];
  };
  char buf[256];
  out << "trace " << path << '\n';
  out << "rows " << m->rows() << ", clamped lengths " << m->clamped() << '\n';
  std::snprintf(buf, sizeof buf, "length mean %.1f, median %.0f, p90 %.0f, distinct %zu\n", mean(m->raw_lengths()),
                quantile(m->raw_lengths(), 0.5), quantile(m->raw_lengths(), 0.9), m->length_histogram().size());
  out << buf;
  std::snprintf(buf, sizeof buf, "iat ms mean %.3f, median %.3f, p90 %.3f, buckets %zu\n", mean(m->raw_iats_ms()),
                quantile(m->raw_iats_ms(), 0.5), quantile(m->raw_iats_ms(), 0.9), m->iat_histogram().size());
  out << buf;
  std::vector<std::pair<double, int>> top;
  for (const auto& [len, p] : m->length_histogram()) top.push_back({p, len});
  std::sort(top.begin(), top.end(), [](auto& a, auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  out << "most common lengths:";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, top.size()); ++i) {
    std::snprintf(buf, sizeof buf, " %d (%.3f)", top[i].second, top[i].first);
    out << buf;
  }
  out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate circumvention stacks against a simulated censor", "tt"};
  app.require_subcommand(1);

  std::string config_path, dir, out_path, csv, stack;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::size_t min_rows = 100;

  auto* validate = app.add_subcommand("validate", "Check a scenario config");
  validate->add_option("config", config_path, "Scenario config file")->required();

  auto* run = app.add_subcommand("run", "Run a scenario and write its reports");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--trials", trials, "Override the trial count");
  run->add_option("--stack", stack, "Named stack or layer list replacing the configured stack");
  run->add_option("--out", out_path, "Directory for report.csv, report.md and events.csv");

  auto* matrix = app.add_subcommand("matrix", "Build the coverage matrix from suite configs");
  matrix->add_option("config-dir", dir, "Directory of suite configs")->required();
  matrix->add_option("--out", out_path, "Markdown output file")->required();
  matrix->add_option("--trials", trials, "Override every suite's trial count");

  auto* stats = app.add_subcommand("trace-stats", "Summarise a packet trace CSV");
  stats->add_option("csv", csv, "Trace file with length,iat_ms rows")->required();
  stats->add_option("--min-rows", min_rows, "Minimum rows accepted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  if (validate->parsed()) return cmd_validate(config_path, out, err);
  if (run->parsed()) return cmd_run(config_path, seed, trials, stack, out_path, out, err);
  if (matrix->parsed()) return cmd_matrix(dir, out_path, trials, out, err);
  if (stats->parsed()) return cmd_trace_stats(csv, min_rows, out, err);
  err << app.help();
  return kExitConfig;
}

}  // namespace tt::harness
