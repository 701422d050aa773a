#include "srsp/snapshot.hpp"

#include "srsp/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace srsp {

static_assert(std::endian::native == std::endian::little,
              "snapshot encoding assumes a little-endian host");

namespace {

constexpr std::size_t magic_size = 5;
constexpr std::size_t header_size = magic_size + sizeof(std::int64_t) + sizeof(double);

template <class T>
void append_raw(std::string& out, const T& value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T read_raw(const std::string& in, std::size_t offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  return value;
}

}  // namespace

std::string encode_snapshot(const Field& u) {
  const Grid& grid = u.grid();
  std::string out;
  out.reserve(header_size + static_cast<std::size_t>(grid.size()) * 16);
  out.append(snapshot_magic, magic_size);
  append_raw(out, static_cast<std::int64_t>(grid.n()));
  append_raw(out, grid.box_length());
  out.append(reinterpret_cast<const char*>(u.values().data()),
             static_cast<std::size_t>(grid.size()) * sizeof(cdouble));
  return out;
}

Field decode_snapshot(const std::string& bytes) {
  if (bytes.size() < header_size || bytes.compare(0, magic_size, snapshot_magic) != 0) {
    throw ParseError("snapshot: missing SPSF1 header");
  }
  const auto n = read_raw<std::int64_t>(bytes, magic_size);
  const auto L = read_raw<double>(bytes, magic_size + sizeof(std::int64_t));
  if (n < 8 || n > 4096) throw ParseError("snapshot: implausible grid size " + std::to_string(n));
  Grid grid = [&] {
    try {
      return Grid(static_cast<int>(n), L);
    } catch (const ConfigError& e) {
      throw ParseError(std::string("snapshot: ") + e.what());
    }
  }();
  const std::size_t payload = static_cast<std::size_t>(grid.size()) * sizeof(cdouble);
  if (bytes.size() != header_size + payload) {
    throw ParseError("snapshot: expected " + std::to_string(header_size + payload) + " bytes, got " +
                     std::to_string(bytes.size()));
  }
  Eigen::ArrayXcd values(grid.size());
  std::memcpy(values.data(), bytes.data() + header_size, payload);
  Field u(grid, std::move(values));
  if (!u.all_finite()) throw ParseError("snapshot: non-finite samples");
  return u;
}

void write_snapshot(const std::filesystem::path& path, const Field& u) {
  write_file_atomic(path, encode_snapshot(u));
}

Field read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

std::string axis_slice_csv(const Field& u, int axis) {
  if (axis < 0 || axis > 2) throw ConfigError("slice axis must be 0, 1 or 2");
  const Grid& grid = u.grid();
  const int c = grid.n() / 2;
  std::ostringstream os;
  os << std::setprecision(17) << "coordinate,abs_u\n";
  for (int i = 0; i < grid.n(); ++i) {
    const int ix = axis == 0 ? i : c;
    const int iy = axis == 1 ? i : c;
    const int iz = axis == 2 ? i : c;
    os << grid.coordinate(i) << ',' << std::abs(u(ix, iy, iz)) << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace srsp
