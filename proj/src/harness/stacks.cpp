#include "tt/harness/stacks.hpp"

#include "tt/transports/builtin.hpp"

namespace tt::harness {

const std::vector<NamedStack>& named_stacks() {
  static const std::vector<NamedStack> stacks = {
      {"plaintext", "TRN:sim", "no protection at all"},
      {"enc-only", "ENC:aead, TRN:sim", "encryption under fixed keys"},
      {"obfs3", "SI:uniform_dh, ENC:aead, TRN:sim", "uniform key exchange, then a random-looking stream"},
      {"scramblesuit", "SI:ticket, ENC:aead, TIMLEN:iid{seed=11}, TRN:sim",
       "ticket authentication, encryption and per-server length and timing distributions"},
      {"stegotorus", "SI:uniform_dh, ENC:aead, MUX:frame, OBF:http, TRN:sim",
       "frames chopped into HTTP-looking cover messages"},
      {"gohop", "SI:uniform_dh, ENC:aead, TRN:sim{hop_lo=2000,hop_hi=2100,hop_seed=7}",
       "encrypted stream spread over randomized ports"},
      {"decoy", "SI:decoy, ENC:aead, TRN:sim{port=443}", "tagged flows deflected by a cooperating router"},
  };
  return stacks;
}

std::optional<StackDescriptor> named_stack(std::string_view name) {
  for (const auto& s : named_stacks()) {
    if (s.name != name) continue;
    auto d = parse_stack(s.name, s.layers);
    if (!d) return std::nullopt;
    return *d;
  }
  return std::nullopt;
}

Result<ValidatedStack, LayerError> validate_builtin(const StackDescriptor& desc) {
  return validate_stack(desc, transports::builtin_registry());
}

}  // namespace tt::harness
