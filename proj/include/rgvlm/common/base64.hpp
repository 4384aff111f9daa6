#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rgvlm {

std::string base64_encode(const std::uint8_t* data, std::size_t n);
std::string base64_encode(const std::vector<std::uint8_t>& v);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace rgvlm
