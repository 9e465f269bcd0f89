#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "epcfg/latent.hpp"

namespace epcfg {

// Binary latent container, little-endian throughout:
//   magic   4 bytes        "EPL1"
//   rank    uint32
//   dims    rank * uint32
//   payload prod(dims) * IEEE-754 binary32
// Values are stored as binary32 and widened to double in memory, so a
// write/read round trip is bitwise identity on binary32 payloads.

std::vector<std::uint8_t> serialize_latent(const LatentTensor& x);
LatentTensor deserialize_latent(std::span<const std::uint8_t> bytes);

void write_latent(const std::filesystem::path& path, const LatentTensor& x);
LatentTensor read_latent(const std::filesystem::path& path);

}  // namespace epcfg
