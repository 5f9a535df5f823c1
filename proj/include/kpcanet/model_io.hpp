#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "kpcanet/network.hpp"

namespace kpcanet {

// Model file layout (bit-exact):
//   magic "KPCN" (4 bytes) | format version (u16, little-endian) | payload |
//   CRC32 (u32, little-endian) of all preceding bytes.
// The payload stores the config, per-stage bases (basis patches, alphas,
// eigenvalues, centering statistics as 64-bit little-endian reals), and the
// classifier. Loading rejects version mismatches and checksum failures.

inline constexpr std::uint16_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_model(const Model &model);
Model deserialize_model(const std::vector<std::uint8_t> &bytes);

void save_model(const std::filesystem::path &path, const Model &model);
Model load_model(const std::filesystem::path &path);

/// CRC-32 (IEEE reflected polynomial 0xEDB88320).
std::uint32_t crc32(const std::uint8_t *data, std::size_t size);

}  // namespace kpcanet
