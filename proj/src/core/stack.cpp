#include "tt/core/stack.hpp"

#include <boost/algorithm/string/trim.hpp>

#include "tt/core/registry.hpp"

namespace tt {

namespace {

LayerError invalid(std::size_t index, const char* rule_id, std::string detail) {
  LayerError e = make_error(ErrorKind::validation, std::move(detail));
  e.layer_index = index;
  e.rule = rule_id;
  return e;
}

std::string trimmed(std::string_view s) { return boost::algorithm::trim_copy(std::string(s)); }

// Splits on commas that are not inside braces.
std::vector<std::string> split_top_level(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trimmed(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(trimmed(cur));
  return out;
}

}  // namespace

const LayerSpec* StackDescriptor::find(LayerKind k) const {
  for (const auto& l : layers)
    if (l.kind == k) return &l;
  return nullptr;
}

StackDescriptor StackDescriptor::without(LayerKind k) const {
  StackDescriptor out{name, {}};
  for (const auto& l : layers)
    if (l.kind != k) out.layers.push_back(l);
  return out;
}

std::string StackDescriptor::str() const {
  std::string out;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i) out += ", ";
    out += layers[i].str();
  }
  return out;
}

Result<LayerSpec, LayerError> parse_layer_spec(std::string_view text) {
  const std::string s = trimmed(text);
  const auto colon = s.find(':');
  if (colon == std::string::npos) return fail(invalid(0, rule::kSyntax, "expected KIND:impl in '" + s + "'"));
  const std::string kind_name = trimmed(std::string_view(s).substr(0, colon));
  auto kind = parse_layer_kind(kind_name);
  if (!kind) return fail(invalid(0, rule::kUnknownKind, "unknown layer kind '" + kind_name + "'"));

  LayerSpec spec;
  spec.kind = *kind;
  std::string rest = s.substr(colon + 1);
  const auto brace = rest.find('{');
  if (brace != std::string::npos) {
    if (rest.back() != '}') return fail(invalid(0, rule::kSyntax, "unterminated parameter list in '" + s + "'"));
    const std::string body = rest.substr(brace + 1, rest.size() - brace - 2);
    rest = rest.substr(0, brace);
    if (!trimmed(body).empty()) {
      for (const auto& kv : split_top_level(body)) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
          return fail(invalid(0, rule::kSyntax, "expected key=value, got '" + kv + "'"));
        spec.params[trimmed(std::string_view(kv).substr(0, eq))] = trimmed(std::string_view(kv).substr(eq + 1));
      }
    }
  }
  spec.impl = trimmed(rest);
  if (spec.impl.empty()) return fail(invalid(0, rule::kSyntax, "missing implementation id in '" + s + "'"));
  return spec;
}

Result<StackDescriptor, LayerError> parse_stack(std::string name, std::string_view layers) {
  StackDescriptor desc{std::move(name), {}};
  if (trimmed(layers).empty()) return desc;
  const auto entries = split_top_level(layers);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto spec = parse_layer_spec(entries[i]);
    if (!spec) {
      LayerError e = spec.error();
      e.layer_index = i;
      return fail(std::move(e));
    }
    desc.layers.push_back(std::move(*spec));
  }
  return desc;
}

Result<ValidatedStack, LayerError> validate_stack(const StackDescriptor& desc, const Registry& registry) {
  bool seen[std::size(kAllLayerKinds)] = {};
  bool transport_seen = false;
  int prev_rank = 0;
  for (std::size_t i = 0; i < desc.layers.size(); ++i) {
    const LayerSpec& spec = desc.layers[i];
    const std::string kind(long_name(spec.kind));
    const LayerImplementation* impl = registry.find(spec.kind, spec.impl);
    if (impl == nullptr)
      return fail(invalid(i, rule::kUnknownImpl, "no " + kind + " implementation '" + spec.impl + "'"));
    for (const auto& [key, value] : spec.params) {
      const ParamSpec* ps = nullptr;
      for (const auto& p : impl->params)
        if (p.name == key) ps = &p;
      if (ps == nullptr)
        return fail(invalid(i, rule::kBadParam, "unknown parameter '" + key + "' for " + spec.impl));
      if (ps->valid && !ps->valid(value))
        return fail(invalid(i, rule::kBadParam, "bad value '" + value + "' for parameter '" + key + "'"));
    }
    if (transport_seen)
      return fail(invalid(i, rule::kTransportLast, "Transport must be last (rank order violated by " + kind + ")"));
    if (seen[static_cast<int>(spec.kind)])
      return fail(invalid(i, rule::kDuplicateKind, "duplicate kind " + kind));
    if (rank(spec.kind) < prev_rank)
      return fail(invalid(i, rule::kRankOrder, "rank order violated: " + kind + " below a lower layer"));
    seen[static_cast<int>(spec.kind)] = true;
    prev_rank = rank(spec.kind);
    transport_seen = spec.kind == LayerKind::transport;
  }
  if (!transport_seen)
    return fail(invalid(desc.layers.size(), rule::kMissingTransport, "stack has no Transport layer"));
  return ValidatedStack(desc, registry);
}

}  // namespace tt
