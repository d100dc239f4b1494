#include "tt/util/crypto.hpp"

#include <memory>
#include <stdexcept>

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/kdf.h>
#include <openssl/sha.h>

namespace tt::crypto {
namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
  void operator()(BIGNUM* b) const { BN_clear_free(b); }
  void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};

template <class T>
using Owned = std::unique_ptr<T, CtxDeleter>;

void check(int ok, const char* what) {
  if (ok != 1) throw std::runtime_error(std::string("libcrypto failure: ") + what);
}

}  // namespace

Digest sha256(ByteView data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest hmac_sha256(ByteView key, ByteView data) {
  Digest out;
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(), out.data(),
       &len);
  return out;
}

Digest hmac_sha256(ByteView key, std::string_view label, ByteView data) {
  Bytes msg = to_bytes(label);
  msg.push_back(0);
  append(msg, data);
  return hmac_sha256(key, msg);
}

Bytes hkdf(ByteView ikm, ByteView salt, std::string_view info, std::size_t length) {
  Owned<EVP_PKEY_CTX> ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
  check(ctx != nullptr, "hkdf ctx");
  check(EVP_PKEY_derive_init(ctx.get()), "hkdf init");
  check(EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()), "hkdf md");
  static const std::uint8_t kZero = 0;
  check(EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.empty() ? &kZero : salt.data(),
                                    static_cast<int>(salt.size())),
        "hkdf salt");
  check(EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(), static_cast<int>(ikm.size())), "hkdf key");
  check(EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), reinterpret_cast<const unsigned char*>(info.data()),
                                    static_cast<int>(info.size())),
        "hkdf info");
  Bytes out(length);
  std::size_t out_len = length;
  check(EVP_PKEY_derive(ctx.get(), out.data(), &out_len), "hkdf derive");
  return out;
}

bool equal_ct(ByteView a, ByteView b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

Bytes aead_seal(ByteView key, ByteView nonce, ByteView aad, ByteView plaintext) {
  Owned<EVP_CIPHER_CTX> ctx(EVP_CIPHER_CTX_new());
  check(EVP_EncryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.data(), nonce.data()),
        "seal init");
  int len = 0;
  if (!aad.empty())
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
          "seal aad");
  Bytes out(plaintext.size() + kAeadTagSize);
  if (!plaintext.empty())
    check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                            static_cast<int>(plaintext.size())),
          "seal update");
  check(EVP_EncryptFinal_ex(ctx.get(), out.data() + plaintext.size(), &len), "seal final");
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kAeadTagSize,
                            out.data() + plaintext.size()),
        "seal tag");
  return out;
}

std::optional<Bytes> aead_open(ByteView key, ByteView nonce, ByteView aad, ByteView sealed) {
  if (sealed.size() < kAeadTagSize) return std::nullopt;
  const std::size_t n = sealed.size() - kAeadTagSize;
  Owned<EVP_CIPHER_CTX> ctx(EVP_CIPHER_CTX_new());
  check(EVP_DecryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.data(), nonce.data()),
        "open init");
  int len = 0;
  if (!aad.empty())
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())),
          "open aad");
  Bytes out(n);
  if (n > 0)
    check(EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(n)),
          "open update");
  Bytes tag(sealed.begin() + static_cast<std::ptrdiff_t>(n), sealed.end());
  check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kAeadTagSize, tag.data()), "open tag");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + n, &len) != 1) return std::nullopt;
  return out;
}

Bytes mod_exp(ByteView base, ByteView exp, ByteView modulus) {
  Owned<BN_CTX> ctx(BN_CTX_new());
  Owned<BIGNUM> b(BN_bin2bn(base.data(), static_cast<int>(base.size()), nullptr));
  Owned<BIGNUM> e(BN_bin2bn(exp.data(), static_cast<int>(exp.size()), nullptr));
  Owned<BIGNUM> m(BN_bin2bn(modulus.data(), static_cast<int>(modulus.size()), nullptr));
  Owned<BIGNUM> r(BN_new());
  check(BN_mod_exp(r.get(), b.get(), e.get(), m.get(), ctx.get()), "mod_exp");
  Bytes out(modulus.size());
  check(BN_bn2binpad(r.get(), out.data(), static_cast<int>(out.size())) >= 0 ? 1 : 0, "bn2bin");
  return out;
}

Bytes sub_be(ByteView a, ByteView b) {
  Bytes out(a.size());
  int borrow = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    int d = static_cast<int>(a[i]) - static_cast<int>(b[i]) - borrow;
    borrow = d < 0 ? 1 : 0;
    out[i] = static_cast<std::uint8_t>(d + (borrow ? 256 : 0));
  }
  return out;
}

int compare_be(ByteView a, ByteView b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

}  // namespace tt::crypto
