#include "d2p/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "d2p/errors.hpp"

namespace d2p {
namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

constexpr char kMagic[7] = {'D', '2', 'P', 'S', 'E', 'G', '1'};
constexpr std::uint32_t kDimCap = 1u << 20;

void write_u32(std::ofstream& out, std::uint32_t value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

std::uint32_t read_u32(std::ifstream& in, const std::string& what) {
  std::uint32_t value = 0;
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) throw ParseError("checkpoint truncated while reading " + what, 0);
  return value;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const DenoiserParams& params,
                     int schedule_steps) {
  params.validate();
  if (schedule_steps < 1) throw DomainError("schedule_steps must be >= 1");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, static_cast<std::uint32_t>(params.cfg.classes));
  write_u32(out, static_cast<std::uint32_t>(params.cfg.feature_dim));
  write_u32(out, static_cast<std::uint32_t>(params.cfg.layers));
  write_u32(out, static_cast<std::uint32_t>(params.cfg.width));
  write_u32(out, static_cast<std::uint32_t>(schedule_steps));
  for (const auto& view : params.tensor_views()) {
    out.write(reinterpret_cast<const char*>(view.data()),
              static_cast<std::streamsize>(view.size() * sizeof(double)));
  }
  out.flush();
  if (!out) throw IoError("failed to write checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());

  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ParseError("bad checkpoint magic", 0);
  }

  const std::uint32_t classes = read_u32(in, "classes");
  const std::uint32_t feature_dim = read_u32(in, "feature_dim");
  const std::uint32_t layers = read_u32(in, "layers");
  const std::uint32_t width = read_u32(in, "width");
  const std::uint32_t schedule_steps = read_u32(in, "schedule_steps");
  if (classes > kDimCap || feature_dim > kDimCap || layers > kDimCap || width > kDimCap ||
      schedule_steps > kDimCap) {
    throw ParseError("checkpoint header dimensions out of range", 0);
  }

  DenoiserConfig cfg;
  cfg.classes = static_cast<int>(classes);
  cfg.feature_dim = static_cast<int>(feature_dim);
  cfg.layers = static_cast<int>(layers);
  cfg.width = static_cast<int>(width);
  try {
    cfg.validate();
  } catch (const ShapeError& e) {
    throw ParseError(std::string("checkpoint header invalid: ") + e.what(), 0);
  }

  Checkpoint ckpt;
  ckpt.params = DenoiserParams::zeros_like(cfg);
  ckpt.schedule_steps = static_cast<int>(schedule_steps);
  if (ckpt.schedule_steps < 1) throw ParseError("checkpoint schedule_steps must be >= 1", 0);
  for (auto& view : ckpt.params.tensor_views()) {
    in.read(reinterpret_cast<char*>(view.data()),
            static_cast<std::streamsize>(view.size() * sizeof(double)));
    if (!in) throw ParseError("checkpoint truncated inside a tensor", 0);
  }
  char extra = 0;
  in.read(&extra, 1);
  if (in.gcount() != 0) throw ParseError("checkpoint has trailing bytes", 0);
  return ckpt;
}

}  // namespace d2p
