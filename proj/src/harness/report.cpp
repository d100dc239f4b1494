#include "tt/harness/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tt::harness {

namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

Result<void, std::string> write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) return fail("cannot write " + p.string());
  out << text;
  if (!out) return fail("cannot write " + p.string());
  return {};
}

}  // namespace

std::string format_rate(std::optional<double> v) { return v ? fixed(*v) : "N/A"; }

std::string report_csv(const MetricsReport& r) {
  std::ostringstream out;
  out << "trial,seed,outcome,detected,node,censored,passed,bytes_delivered,goodput_bytes_per_s,duration_s,covert_flows,"
         "background_flows,background_flagged,background_blocked,probes,probes_confirmed,labels,error\n";
  for (const auto& t : r.trials) {
    out << t.index << ',' << t.seed << ',' << to_string(t.outcome) << ',' << (t.detected ? 1 : 0) << ','
        << csv_field(t.node) << ',' << (t.censored ? 1 : 0) << ',' << (t.passed ? 1 : 0) << ',' << t.bytes_delivered
        << ',' << fixed(t.goodput_bytes_per_s, 1) << ',' << fixed(t.duration_s, 6) << ',' << t.covert_flows << ','
        << t.background_flows << ',' << t.background_flagged << ',' << t.background_blocked << ',' << t.probes << ','
        << t.probes_confirmed << ',' << csv_field(join(t.labels, ";")) << ',' << csv_field(t.error) << '\n';
  }
  return out.str();
}

std::string report_markdown(const MetricsReport& r) {
  std::ostringstream out;
  out << "# Scenario " << r.scenario << "\n\n";
  out << "| field | value |\n|---|---|\n";
  out << "| stack | " << r.stack << " |\n";
  out << "| layers | `" << r.layers << "` |\n";
  out << "| suite | " << (r.suite ? std::string(censor::label(*r.suite)) : "-") << " |\n";
  out << "| seed | " << r.seed << " |\n";
  out << "| trials | " << r.trials.size() << " |\n";
  out << "| detection rate (TPR) | " << format_rate(r.tpr) << " |\n";
  out << "| background flagged (FPR) | " << format_rate(r.fpr) << " |\n";
  out << "| collateral damage | " << format_rate(r.collateral) << " |\n";
  out << "| undetected and unblocked | " << fixed(r.pass_rate) << " |\n";
  if (!r.expectation.empty())
    out << "| expectation | " << r.expectation << (r.expectation_met ? " (met)" : " (NOT met)") << " |\n";

  std::size_t ok = 0;
  std::uint64_t bytes = 0;
  double goodput = 0;
  for (const auto& t : r.trials) {
    ok += t.outcome == Outcome::ok;
    bytes += t.bytes_delivered;
    goodput += t.goodput_bytes_per_s;
  }
  out << "| sessions completed | " << ok << " / " << r.trials.size() << " |\n";
  out << "| bytes delivered | " << bytes << " |\n";
  if (!r.trials.empty())
    out << "| mean goodput (B/s) | " << fixed(goodput / static_cast<double>(r.trials.size()), 1) << " |\n";

  out << "\n## Trials\n\n| # | outcome | detected | node | labels |\n|---|---|---|---|---|\n";
  const std::size_t shown = std::min<std::size_t>(r.trials.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& t = r.trials[i];
    out << "| " << t.index << " | " << to_string(t.outcome) << " | " << (t.detected ? "yes" : "no") << " | "
        << (t.node.empty() ? "-" : t.node) << " | " << (t.labels.empty() ? "-" : join(t.labels, ", ")) << " |\n";
  }
  if (shown < r.trials.size()) out << "\n(" << r.trials.size() - shown << " more trials in report.csv)\n";
  return out.str();
}

Result<void, std::string> write_reports(const ScenarioRun& run, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return fail("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  if (auto r = write_file(base / "report.csv", report_csv(run.report)); !r) return r;
  if (auto r = write_file(base / "report.md", report_markdown(run.report)); !r) return r;
  return write_file(base / "events.csv", run.event_log_csv);
}

}  // namespace tt::harness
