#pragma once

#include <string>
#include <string_view>

namespace hecke {

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// First `chars` hex digits of sha256_hex.
std::string short_hash(std::string_view bytes, std::size_t chars = 16);

}  // namespace hecke
