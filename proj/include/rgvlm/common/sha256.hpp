#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rgvlm {

std::string sha256_hex(const void* data, std::size_t n);
std::string sha256_hex(const std::string& s);
std::string sha256_hex(const std::vector<std::uint8_t>& v);

}  // namespace rgvlm
