#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "tt/util/bytes.hpp"

// Thin wrappers over libcrypto. None of these draw from a system RNG;
// callers supply all randomness so simulations stay reproducible.
namespace tt::crypto {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);
Digest hmac_sha256(ByteView key, ByteView data);
Digest hmac_sha256(ByteView key, std::string_view label, ByteView data);

// HKDF-SHA256 (extract then expand).
Bytes hkdf(ByteView ikm, ByteView salt, std::string_view info, std::size_t length);

bool equal_ct(ByteView a, ByteView b);

constexpr std::size_t kAeadKeySize = 32;
constexpr std::size_t kAeadNonceSize = 12;
constexpr std::size_t kAeadTagSize = 16;

// ChaCha20-Poly1305. seal() returns ciphertext || tag.
Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext);
std::optional<Bytes> aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView sealed);

// Fixed-width big-endian modular exponentiation: base^exp mod modulus.
Bytes mod_exp(ByteView base, ByteView exp, ByteView modulus);
// Big-endian subtraction a - b, both of modulus width, assuming a > b.
Bytes sub_be(ByteView a, ByteView b);
// Compare two equal-width big-endian numbers.
int compare_be(ByteView a, ByteView b);

}  // namespace tt::crypto
