#include "epcfg/latent_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace epcfg {

namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'P', 'L', '1'};

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  return static_cast<std::uint32_t>(bytes[at]) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> serialize_latent(const LatentTensor& x) {
  const auto& shape = x.shape();
  std::vector<std::uint8_t> out;
  out.reserve(8 + 4 * shape.size() + 4 * x.size());
  for (std::uint8_t b : kMagic) out.push_back(b);
  push_u32(out, static_cast<std::uint32_t>(shape.size()));
  for (std::int64_t d : shape) {
    if (d > std::numeric_limits<std::uint32_t>::max())
      throw IoFailure("dimension " + std::to_string(d) +
                      " exceeds the format's uint32 limit");
    push_u32(out, static_cast<std::uint32_t>(d));
  }
  for (double v : x.data()) {
    const auto f = static_cast<float>(v);
    if (!std::isfinite(f))
      throw NonFiniteValue("value " + std::to_string(v) +
                           " is not representable as a finite binary32");
    push_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

LatentTensor deserialize_latent(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw TruncatedFile("shorter than the magic header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw BadMagic("bad magic header (expected \"EPL1\")");
  if (bytes.size() < 8) throw TruncatedFile("missing rank field");

  const std::uint32_t rank = read_u32(bytes, 4);
  const std::size_t header = 8 + 4 * static_cast<std::size_t>(rank);
  if (bytes.size() < header) throw TruncatedFile("missing dimension fields");

  std::vector<std::int64_t> shape(rank);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::uint32_t d = read_u32(bytes, 8 + 4 * static_cast<std::size_t>(i));
    shape[i] = static_cast<std::int64_t>(d);
    if (d != 0 && count > (std::uint64_t(1) << 40) / d)
      throw TruncatedFile("dimension product exceeds any plausible payload");
    count *= d;
  }

  const std::uint64_t expected = header + 4 * count;
  if (bytes.size() != expected)
    throw TruncatedFile("file length " + std::to_string(bytes.size()) +
                        " does not match expected " + std::to_string(expected));

  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto f = std::bit_cast<float>(
        read_u32(bytes, header + 4 * static_cast<std::size_t>(i)));
    if (!std::isfinite(f))
      throw NonFiniteValue("payload element " + std::to_string(i) +
                           " is not finite");
    data[i] = static_cast<double>(f);
  }
  return make_latent(std::move(shape), std::move(data));
}

void write_latent(const std::filesystem::path& path, const LatentTensor& x) {
  const std::vector<std::uint8_t> bytes = serialize_latent(x);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoFailure("write to " + path.string() + " failed");
}

LatentTensor read_latent(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("read from " + path.string() + " failed");
  return deserialize_latent(bytes);
}

}  // namespace epcfg
