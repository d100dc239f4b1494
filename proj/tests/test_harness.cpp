#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "tt/harness/background.hpp"
#include "tt/harness/cli.hpp"
#include "tt/harness/config.hpp"
#include "tt/harness/matrix.hpp"
#include "tt/harness/report.hpp"

namespace tt::harness {
namespace {

const std::string kSrc = TT_SOURCE_DIR;
const std::string kScenarios = kSrc + "/configs/scenarios/";

const char* kMinimal = R"([scenario]
name = t
seed = 9
trials = 2

[stack]
layers = ENC:aead, TRN:sim

[traffic]
payload_bytes = 4096
)";

struct Cli {
  int code = 0;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tt");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Cli r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Config, MinimalParses) {
  auto c = parse_config(kMinimal, ".");
  ASSERT_TRUE(c) << c.error().str();
  EXPECT_EQ(*c->seed, 9u);
  EXPECT_EQ(c->trials, 2u);
  EXPECT_EQ(c->stack.layers.size(), 2u);
  EXPECT_EQ(c->traffic.payload_bytes, 4096u);
}

TEST(Config, SeedIsRequired) {
  std::string text = kMinimal;
  text.erase(text.find("seed = 9\n"), 9);
  auto c = parse_config(text, ".");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().message, "seed required");
  EXPECT_EQ(c.error().key, "seed");
}

TEST(Config, UnknownLayerImplementationIsNamed) {
  std::string text = kMinimal;
  text.replace(text.find("ENC:aead"), 8, "ENC:rot13");
  auto c = parse_config(text, ".");
  ASSERT_FALSE(c);
  EXPECT_NE(c.error().str().find("rot13"), std::string::npos);
  EXPECT_EQ(c.error().key, "layers");
  EXPECT_EQ(c.error().line, 7u);
}

TEST(Config, UnknownKeyReportsKeyAndLine) {
  std::string text = std::string(kMinimal) + "colour = blue\n";
  auto c = parse_config(text, ".");
  ASSERT_FALSE(c);
  EXPECT_EQ(c.error().key, "colour");
  EXPECT_EQ(c.error().line, 11u);
  EXPECT_NE(c.error().str().find("line 11"), std::string::npos);
}

TEST(Config, UnknownSectionAndBadValues) {
  EXPECT_FALSE(parse_config(std::string(kMinimal) + "[wibble]\n", "."));
  std::string bad_trials = kMinimal;
  bad_trials.replace(bad_trials.find("trials = 2"), 10, "trials = x");
  EXPECT_FALSE(parse_config(bad_trials, "."));
  EXPECT_FALSE(parse_config(std::string(kMinimal) + "[policy]\nnodes = FPR.XYZ\n", "."));
  EXPECT_FALSE(parse_config(std::string(kMinimal) + "[policy]\nthrottle_factor = 1\n", "."));
}

TEST(Config, EveryShippedConfigLoads) {
  for (const std::string dir : {"/configs/scenarios", "/configs/matrix"}) {
    auto all = load_config_dir(kSrc + dir);
    ASSERT_TRUE(all) << all.error();
    EXPECT_GE(all->size(), 10u);
  }
}

TEST(Payload, KeywordIsPlantedAtOffsetAndPeriod) {
  TrafficConfig t;
  t.payload_bytes = 3000;
  t.content = "text";
  t.keyword = "falun";
  t.keyword_offset = 100;
  t.keyword_every = 1000;
  Rng rng(1);
  Bytes b = make_payload(t, rng);
  ASSERT_EQ(b.size(), 3000u);
  const std::string s = tt::to_string(b);
  for (std::size_t at : {100u, 1100u, 2100u}) EXPECT_EQ(s.substr(at, 5), "falun") << at;
  std::size_t n = 0;
  for (std::size_t p = s.find("falun"); p != std::string::npos; p = s.find("falun", p + 1)) ++n;
  EXPECT_EQ(n, 3u);
}

TEST(Cli, ExitCodes) {
  auto none = cli({});
  EXPECT_EQ(none.code, kExitConfig);
  EXPECT_NE(none.err.find("validate"), std::string::npos);
  EXPECT_NE(none.err.find("trace-stats"), std::string::npos);

  EXPECT_EQ(cli({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(cli({"validate", kScenarios + "keyword-plaintext.cfg"}).code, kExitOk);
  auto missing = cli({"validate", "/no/such.cfg"});
  EXPECT_EQ(missing.code, kExitConfig);
  EXPECT_FALSE(missing.err.empty());
  EXPECT_EQ(cli({"run", kScenarios + "keyword-plaintext.cfg", "--seed", "notanumber"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", kScenarios + "keyword-plaintext.cfg", "--stack", "ENC:rot13, TRN:sim"}).code, kExitConfig);

  EXPECT_EQ(cli({"run", kScenarios + "keyword-plaintext.cfg", "--trials", "3"}).code, kExitOk);
  // The same scenario over an encrypted stack contradicts its expectation.
  auto unexpected = cli({"run", kScenarios + "keyword-plaintext.cfg", "--trials", "3", "--stack", "obfs3"});
  EXPECT_EQ(unexpected.code, kExitUnexpected);
  EXPECT_NE(unexpected.out.find("NOT met"), std::string::npos);
}

TEST(Cli, TraceStats) {
  auto r = cli({"trace-stats", kSrc + "/data/traces/http_browsing.csv"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("rows"), std::string::npos);
  const std::string tmp = testing::temp_dir("trace-stats").string();
  testing::write_file(tmp + "/short.csv", "length,iat_ms\n100,1\n");
  EXPECT_EQ(cli({"trace-stats", tmp + "/short.csv"}).code, kExitConfig);
}

TEST(Cli, SameSeedGivesIdenticalReports) {
  const std::string a = testing::temp_dir("det-a").string(), b = testing::temp_dir("det-b").string();
  const std::string cfg = kScenarios + "keyword-plaintext.cfg";
  ASSERT_EQ(cli({"run", cfg, "--seed", "42", "--out", a}).code, kExitOk);
  ASSERT_EQ(cli({"run", cfg, "--seed", "42", "--out", b}).code, kExitOk);
  for (const char* f : {"/report.csv", "/events.csv", "/report.md"}) {
    const std::string x = testing::read_file(a + f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, testing::read_file(b + f)) << f;
  }
  const std::string c = testing::temp_dir("det-c").string();
  ASSERT_EQ(cli({"run", cfg, "--seed", "43", "--out", c}).code, kExitOk);
  EXPECT_NE(testing::read_file(a + "/report.csv"), testing::read_file(c + "/report.csv"));
}

TEST(Report, CsvHasOneRowPerTrial) {
  auto cfg = load_config(kScenarios + "keyword-plaintext.cfg");
  ASSERT_TRUE(cfg);
  RunOptions ro;
  ro.trials = 4;
  auto run = run_scenario(*cfg, ro);
  ASSERT_TRUE(run) << run.error();
  const std::string csv = report_csv(run->report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("goodput_bytes_per_s"), std::string::npos);
  EXPECT_EQ(format_rate(std::nullopt), "N/A");
  EXPECT_EQ(format_rate(0.9), "0.9000");
}

void check_bounds(const MetricsReport& r) {
  for (auto v : {r.tpr, r.fpr, r.collateral}) {
    if (!v) continue;
    EXPECT_GE(*v, 0.0);
    EXPECT_LE(*v, 1.0);
  }
  EXPECT_GE(r.pass_rate, 0.0);
  EXPECT_LE(r.pass_rate, 1.0);
  std::size_t detected = 0;
  for (const auto& t : r.trials) {
    detected += t.detected;
    EXPECT_GE(t.goodput_bytes_per_s, 0.0);
    EXPECT_LE(t.background_blocked, t.background_flows);
    EXPECT_LE(t.background_flagged, t.background_flows);
    EXPECT_LE(t.probes_confirmed, t.probes);
    if (t.detected) EXPECT_FALSE(t.node.empty());
  }
  ASSERT_TRUE(r.tpr);
  EXPECT_DOUBLE_EQ(*r.tpr, static_cast<double>(detected) / static_cast<double>(r.trials.size()));
}

TEST(Metrics, BoundsAndUndefinedRates) {
  auto cfg = parse_config(kMinimal, ".");
  ASSERT_TRUE(cfg);
  auto run = run_scenario(*cfg);
  ASSERT_TRUE(run) << run.error();
  check_bounds(run->report);
  EXPECT_FALSE(run->report.fpr);
  EXPECT_FALSE(run->report.collateral);
  EXPECT_EQ(run->report.pass_rate, 1.0);
  for (const auto& t : run->report.trials) EXPECT_EQ(t.outcome, Outcome::ok) << t.error;

  for (const char* name : {"background-overblock.cfg", "ignore-rst.cfg", "entropy-enc.cfg"}) {
    auto c = load_config(kScenarios + name);
    ASSERT_TRUE(c) << name;
    RunOptions ro;
    ro.trials = 3;
    auto r = run_scenario(*c, ro);
    ASSERT_TRUE(r) << name;
    check_bounds(r->report);
  }
}

TEST(Background, FlowsAreBenignAndDistinct) {
  auto model = transports::TraceModel::load(kSrc + "/data/traces/http_browsing.csv");
  ASSERT_TRUE(model);
  auto flows = gen_background(*model, 50, 10, 2, 3);
  ASSERT_EQ(flows.size(), 50u);
  std::set<netsim::FlowKey> keys;
  for (const auto& f : flows) {
    keys.insert(f.key);
    EXPECT_TRUE(is_background_client(f.key.src_addr));
    EXPECT_EQ(f.key.dst_addr, kBackgroundServer);
    EXPECT_EQ(f.payloads.size(), 10u);
    EXPECT_EQ(f.gaps.size(), 9u);
  }
  EXPECT_EQ(keys.size(), 50u);
  EXPECT_TRUE(gen_background(*model, 0, 10, 2, 3).empty());
}

TEST(Matrix, TenColumnsAndReferenceComparison) {
  auto suites = load_config_dir(kSrc + "/configs/matrix");
  ASSERT_TRUE(suites) << suites.error();
  MatrixOptions mo;
  mo.trials = 2;
  auto m = build_matrix(*suites, mo);
  ASSERT_TRUE(m) << m.error();
  ASSERT_EQ(m->rows.size(), 3u);
  EXPECT_EQ(kMatrixColumns, 10u);
  const std::string md = render_matrix(*m);
  for (censor::AttackNode n : censor::kAllNodes) EXPECT_NE(md.find(std::string(censor::label(n))), std::string::npos);
  const auto* plain = m->row("plaintext");
  ASSERT_NE(plain, nullptr);
  for (const auto& c : plain->cells) EXPECT_NE(c.status, MatrixCell::Status::protected_);
  EXPECT_EQ(find_divergences(*m), m->divergences);
}

}  // namespace
}  // namespace tt::harness
