#include "tt/harness/matrix.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace tt::harness {

using censor::AttackNode;

namespace {

std::size_t column(AttackNode n) {
  for (std::size_t i = 0; i < kMatrixColumns; ++i)
    if (censor::kAllNodes[i] == n) return i;
  return 0;
}

std::string kinds_text(const std::set<LayerKind>& kinds) {
  std::string out;
  for (LayerKind k : kAllLayerKinds)
    if (kinds.count(k)) out += (out.empty() ? "" : " ") + std::string(short_name(k));
  return out;
}

std::string cell_text(const MatrixCell& c) {
  switch (c.status) {
    case MatrixCell::Status::untested: return "untested";
    case MatrixCell::Status::unprotected: return "";
    case MatrixCell::Status::protected_: return c.credited.empty() ? "+" : kinds_text(c.credited);
  }
  return "";
}

std::string rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// The stack with one layer taken out. The transport cannot be removed, so
// it is replaced by the default transport instead.
std::optional<StackDescriptor> ablate(const StackDescriptor& s, LayerKind k) {
  if (k != LayerKind::transport) return s.without(k);
  const LayerSpec* trn = s.find(LayerKind::transport);
  if (trn == nullptr || (trn->impl == "sim" && trn->params.empty())) return std::nullopt;
  StackDescriptor out = s;
  out.layers.back() = LayerSpec{LayerKind::transport, "sim", {}};
  return out;
}

}  // namespace

const MatrixRow* CoverageMatrix::row(const std::string& stack) const {
  for (const auto& r : rows)
    if (r.stack == stack) return &r;
  return nullptr;
}

const MatrixCell* CoverageMatrix::cell(const std::string& stack, AttackNode n) const {
  const MatrixRow* r = row(stack);
  return r ? &r->cells[column(n)] : nullptr;
}

const std::vector<ReferenceRow>& reference_rows() {
  using K = LayerKind;
  static const std::vector<ReferenceRow> rows = {
      {"scramblesuit",
       {{AttackNode::COR_CON, {K::session_init, K::encryption}},
        {AttackNode::FPR_LEN, {K::timing_length}},
        {AttackNode::FPR_TIM, {K::timing_length}},
        {AttackNode::FPR_SEM, {K::session_init, K::encryption}},
        {AttackNode::FPR_CON, {K::session_init, K::encryption}}}},
      {"obfs3",
       {{AttackNode::COR_CON, {K::session_init, K::encryption}},
        {AttackNode::FPR_SEM, {K::session_init}},
        {AttackNode::FPR_CON, {K::session_init, K::encryption}}}},
      {"plaintext", {}},
  };
  return rows;
}

bool has_reference_column(AttackNode n) { return n != AttackNode::DEG_PER; }

Result<CoverageMatrix, std::string> build_matrix(const std::vector<ScenarioConfig>& suites,
                                                 const MatrixOptions& opts) {
  CoverageMatrix m;
  m.threshold = opts.threshold;
  auto row_for = [&m](const StackDescriptor& s) -> MatrixRow& {
    for (auto& r : m.rows)
      if (r.stack == s.name) return r;
    m.rows.push_back({s.name, s.str(), {}});
    return m.rows.back();
  };

  for (const auto& cfg : suites) {
    if (!cfg.suite) continue;
    std::vector<StackDescriptor> stacks = cfg.matrix_stacks;
    if (stacks.empty()) stacks.push_back(cfg.stack);
    for (const auto& stack : stacks) {
      MatrixRow& row = row_for(stack);
      MatrixCell& cell = row.cells[column(*cfg.suite)];
      if (cell.status != MatrixCell::Status::untested) {
        cell.note = "suite " + cfg.name + " ignored: " + cell.suite + " already covers this cell";
        continue;
      }
      RunOptions ro;
      ro.trials = opts.trials;
      ro.stack = stack;
      ro.keep_event_log = false;
      auto run = run_scenario(cfg, ro);
      if (!run) {
        cell.note = run.error();
        continue;
      }
      cell.suite = cfg.name;
      cell.pass_rate = run->report.pass_rate;
      cell.status = cell.pass_rate >= opts.threshold ? MatrixCell::Status::protected_
                                                     : MatrixCell::Status::unprotected;
      if (cell.status != MatrixCell::Status::protected_) continue;
      for (const auto& layer : stack.layers) {
        auto reduced = ablate(stack, layer.kind);
        if (!reduced) continue;
        ro.stack = *reduced;
        ro.stack->name = stack.name;
        auto ab = run_scenario(cfg, ro);
        if (!ab) {
          cell.note += (cell.note.empty() ? "" : "; ") + std::string("without ") +
                       std::string(short_name(layer.kind)) + ": " + ab.error();
          continue;
        }
        cell.ablation[layer.kind] = ab->report.pass_rate;
        if (ab->report.pass_rate < opts.threshold) cell.credited.insert(layer.kind);
      }
    }
  }
  m.divergences = find_divergences(m);
  return m;
}

std::vector<std::string> find_divergences(const CoverageMatrix& m) {
  std::vector<std::string> out;
  for (const auto& ref : reference_rows()) {
    const MatrixRow* row = m.row(ref.stack);
    if (row == nullptr) continue;
    for (AttackNode n : censor::kAllNodes) {
      if (!has_reference_column(n)) continue;
      const MatrixCell& c = row->cells[column(n)];
      auto it = ref.cells.find(n);
      const std::string name = ref.stack + " " + std::string(censor::label(n)) + ": ";
      if (c.status == MatrixCell::Status::untested) {
        out.push_back(name + "untested here");
        continue;
      }
      const bool measured = c.status == MatrixCell::Status::protected_;
      const bool expected = it != ref.cells.end();
      if (measured != expected) {
        out.push_back(name + (expected ? "reference protects with " + kinds_text(it->second) +
                                             ", measured unprotected (pass rate " + rate(c.pass_rate) + ")"
                                       : "reference unprotected, measured protected by " + cell_text(c) +
                                             " (pass rate " + rate(c.pass_rate) + ")"));
      } else if (expected && c.credited != it->second) {
        out.push_back(name + "reference credits " + kinds_text(it->second) + ", ablation credits " +
                      (c.credited.empty() ? std::string("no single layer") : kinds_text(c.credited)));
      }
    }
  }
  return out;
}

std::string render_matrix(const CoverageMatrix& m) {
  std::ostringstream out;
  out << "# Coverage matrix\n\n";
  out << "A cell lists the layers whose removal loses protection. `+` means protected with no single layer "
         "responsible; an empty cell means unprotected. Protection requires a pass rate of at least "
      << rate(m.threshold) << ".\n\n";
  out << "| stack |";
  for (AttackNode n : censor::kAllNodes) out << ' ' << censor::label(n) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < kMatrixColumns; ++i) out << "---|";
  out << '\n';
  for (const auto& r : m.rows) {
    out << "| " << r.stack << " |";
    for (const auto& c : r.cells) out << ' ' << cell_text(c) << " |";
    out << '\n';
  }

  out << "\n## Pass rates\n\n| stack |";
  for (AttackNode n : censor::kAllNodes) out << ' ' << censor::label(n) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < kMatrixColumns; ++i) out << "---|";
  out << '\n';
  for (const auto& r : m.rows) {
    out << "| " << r.stack << " |";
    for (const auto& c : r.cells) {
      out << ' ';
      if (c.status == MatrixCell::Status::untested) {
        out << '-';
      } else {
        out << rate(c.pass_rate);
        for (const auto& [k, v] : c.ablation) out << " " << short_name(k) << ":" << rate(v);
      }
      out << " |";
    }
    out << '\n';
  }

  out << "\n## Stacks\n\n";
  for (const auto& r : m.rows) out << "- " << r.stack << ": `" << r.layers << "`\n";

  out << "\n## Divergences from the reference rows\n\n";
  if (m.divergences.empty()) out << "None.\n";
  for (const auto& d : m.divergences) out << "- " << d << '\n';

  bool header = false;
  for (const auto& r : m.rows)
    for (std::size_t i = 0; i < kMatrixColumns; ++i) {
      if (r.cells[i].note.empty()) continue;
      if (!header) out << "\n## Notes\n\n";
      header = true;
      out << "- " << r.stack << " " << censor::label(censor::kAllNodes[i]) << ": " << r.cells[i].note << '\n';
    }
  return out.str();
}

Result<std::vector<ScenarioConfig>, std::string> load_config_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return fail(dir + " is not a directory");
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".cfg") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::vector<ScenarioConfig> out;
  for (const auto& f : files) {
    auto c = load_config(f);
    if (!c) return fail(f + ": " + c.error().str());
    out.push_back(std::move(*c));
  }
  return out;
}

}  // namespace tt::harness
