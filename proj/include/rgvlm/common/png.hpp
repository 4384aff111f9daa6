#pragma once

#include <cstdint>
#include <vector>

namespace rgvlm {

// Minimal PNG writer: 8-bit RGB, stored (uncompressed) deflate blocks.
// Output is byte-for-byte deterministic, which matters because rendered
// frames feed content-addressed caches.
std::vector<std::uint8_t> encode_png(int width, int height, const std::uint8_t* rgb);

std::uint32_t crc32(const std::uint8_t* data, std::size_t n, std::uint32_t seed = 0);

}  // namespace rgvlm
