#include "pfno/snapshot.hpp"

#include <fstream>
#include <sstream>

#include "pfno/bytes.hpp"
#include "pfno/error.hpp"

namespace pfno {

namespace {
constexpr char kMagic[8] = {'P', 'F', 'N', 'O', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::vector<char> snapshot_bytes(const std::vector<Field2D>& channels) {
  if (channels.empty()) throw InvalidArgument("snapshot needs at least one channel");
  for (const auto& c : channels) require_same_grid(channels.front(), c);
  const auto n = static_cast<std::uint32_t>(channels.front().n());
  std::vector<char> out;
  out.reserve(24 + channels.size() * n * n * 8);
  bytes::put_raw(out, kMagic, 8);
  bytes::put_u32(out, kVersion);
  bytes::put_u32(out, static_cast<std::uint32_t>(channels.size()));
  bytes::put_u32(out, n);
  bytes::put_u32(out, n);
  for (const auto& c : channels)
    for (double x : c.v) bytes::put_f64(out, x);
  return out;
}

std::vector<Field2D> snapshot_parse(const std::vector<char>& b, double length) {
  bytes::Reader r(b, "snapshot");
  if (r.str(8) != std::string(kMagic, 8)) throw FormatError("snapshot: bad magic");
  if (r.u32() != kVersion) throw FormatError("snapshot: unsupported version");
  const std::uint32_t ch = r.u32(), rows = r.u32(), cols = r.u32();
  if (ch == 0 || rows < 4 || rows != cols) throw FormatError("snapshot: bad dimensions");
  const std::size_t count = std::size_t(ch) * rows * cols;
  if (r.remaining() != count * 8) throw FormatError("snapshot: payload size mismatch");
  const Grid2D g = make_grid(static_cast<int>(rows), length);
  std::vector<Field2D> out;
  for (std::uint32_t c = 0; c < ch; ++c) {
    Field2D f(g);
    for (double& x : f.v) x = r.f64();
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, const std::vector<char>& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void snapshot_write(const std::vector<Field2D>& channels, const std::filesystem::path& path,
                    const Meta& meta) {
  write_file(path, snapshot_bytes(channels));
  if (!meta.empty()) {
    std::ofstream m(path.string() + ".meta", std::ios::trunc);
    for (const auto& [k, v] : meta) m << k << '=' << v << '\n';
  }
}

std::vector<Field2D> snapshot_read(const std::filesystem::path& path, double length) {
  return snapshot_parse(read_file(path), length);
}

Meta snapshot_meta(const std::filesystem::path& path) {
  Meta meta;
  std::ifstream in(path.string() + ".meta");
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

}  // namespace pfno
