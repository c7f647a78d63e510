#include "hecke/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "hecke/error.hpp"

namespace hecke {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  ensure(ctx != nullptr, "EVP_MD_CTX_new failed");
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  ensure(EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1 &&
             EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) == 1 &&
             EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) == 1,
         "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string short_hash(std::string_view bytes, std::size_t chars) {
  return sha256_hex(bytes).substr(0, chars);
}

}  // namespace hecke
