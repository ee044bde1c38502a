#include "pw/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pw {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void write_field(const std::string& path, const FieldDump& f) {
  if (f.values.size() != static_cast<size_t>(f.N1) * f.N2 * f.components)
    throw IoError(path + ": value count does not match dimensions");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(path + ": cannot open for writing");
  os.write("PWV1", 4);
  put_u32(os, f.N1);
  put_u32(os, f.N2);
  put_u32(os, f.components);
  std::vector<unsigned char> buf(f.values.size() * 8);
  for (size_t k = 0; k < f.values.size(); ++k) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(f.values[k]);
    for (int b = 0; b < 8; ++b) buf[k * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!os) throw IoError(path + ": write failed");
}

FieldDump read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError(path + ": cannot open for reading");
  unsigned char head[16];
  is.read(reinterpret_cast<char*>(head), 16);
  if (is.gcount() != 16) throw IoError(path + ": truncated header");
  if (std::memcmp(head, "PWV1", 4) != 0) throw IoError(path + ": bad magic");
  FieldDump f;
  f.N1 = get_u32(head + 4);
  f.N2 = get_u32(head + 8);
  f.components = get_u32(head + 12);
  const size_t n = static_cast<size_t>(f.N1) * f.N2 * f.components;
  std::vector<unsigned char> buf(n * 8);
  is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<size_t>(is.gcount()) != buf.size())
    throw IoError(path + ": payload truncated at byte " + std::to_string(16 + is.gcount()));
  if (is.peek() != std::char_traits<char>::eof()) throw IoError(path + ": trailing bytes after payload");
  f.values.resize(n);
  for (size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[k * 8 + b]) << (8 * b);
    f.values[k] = std::bit_cast<double>(bits);
  }
  return f;
}

FieldDump state_dump(const SimulationState& s) {
  const MappedGrid& g = s.grid();
  FieldDump f;
  f.N1 = g.N1;
  f.N2 = g.N2;
  f.components = 8;
  f.values.reserve(static_cast<size_t>(g.N1) * g.N2 * 8);
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i)
      for (int k = 0; k < 8; ++k) f.values.push_back(s.q(i, j)(k));
  return f;
}

FieldDump energy_dump(const SimulationState& s) {
  const MappedGrid& g = s.grid();
  FieldDump f;
  f.N1 = g.N1;
  f.N2 = g.N2;
  f.components = 1;
  f.values.reserve(static_cast<size_t>(g.N1) * g.N2);
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) {
      const Vec8& q = s.q(i, j);
      f.values.push_back(0.5 * q.dot(s.model_at(i, j).E * q));
    }
  return f;
}

void write_sidecar(const std::string& path, const std::map<std::string, std::string>& entries) {
  std::ofstream os(path + ".meta", std::ios::trunc);
  if (!os) throw IoError(path + ".meta: cannot open for writing");
  for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
  if (!os) throw IoError(path + ".meta: write failed");
}

std::map<std::string, std::string> read_sidecar(const std::string& path) {
  std::ifstream is(path + ".meta");
  if (!is) throw IoError(path + ".meta: cannot open for reading");
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw IoError(path + ".meta: malformed line " + std::to_string(n));
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

std::map<std::string, std::string> mapping_metadata(const GridMapping& m) {
  return {{"mapping", to_string(m.kind)},
          {"x0", format_double(m.x0)},
          {"x1", format_double(m.x1)},
          {"z0", format_double(m.z0)},
          {"z1", format_double(m.z1)},
          {"r_inner", format_double(m.r_inner)},
          {"r_outer", format_double(m.r_outer)},
          {"core_half", format_double(m.core_half)},
          {"shell_half", format_double(m.shell_half)},
          {"blend_half", format_double(m.blend_half)}};
}

std::string dump_field(const SimulationState& s, const std::string& prefix, const std::string& material_map_path) {
  const std::string state_path = prefix + ".state.pwv";
  const std::string energy_path = prefix + ".energy.pwv";
  write_field(state_path, state_dump(s));
  write_field(energy_path, energy_dump(s));
  auto meta = mapping_metadata(s.grid().mapping);
  meta["N1"] = std::to_string(s.grid().N1);
  meta["N2"] = std::to_string(s.grid().N2);
  meta["time"] = format_double(s.time);
  meta["steps"] = std::to_string(s.steps);
  meta["material_map"] = material_map_path;
  meta["energy"] = energy_path;
  write_sidecar(state_path, meta);
  return state_path;
}

std::string dump_grid(const MappedGrid& g, const std::string& prefix) {
  FieldDump v;
  v.N1 = g.N1 + 1;
  v.N2 = g.N2 + 1;
  v.components = 2;
  for (int j = 0; j <= g.N2; ++j)
    for (int i = 0; i <= g.N1; ++i) {
      const Point& p = g.vertices[g.vertex(i, j)];
      v.values.push_back(p.x);
      v.values.push_back(p.z);
    }
  FieldDump k, m;
  k.N1 = m.N1 = g.N1;
  k.N2 = m.N2 = g.N2;
  k.components = m.components = 1;
  for (int j = 0; j < g.N2; ++j)
    for (int i = 0; i < g.N1; ++i) {
      k.values.push_back(g.kappa[g.cell(i, j)]);
      m.values.push_back(g.material[g.cell(i, j)]);
    }
  const std::string vp = prefix + ".vertices.pwv", kp = prefix + ".kappa.pwv", mp = prefix + ".material.pwv";
  write_field(vp, v);
  write_field(kp, k);
  write_field(mp, m);
  auto meta = mapping_metadata(g.mapping);
  meta["N1"] = std::to_string(g.N1);
  meta["N2"] = std::to_string(g.N2);
  meta["kappa"] = kp;
  meta["material_map"] = mp;
  write_sidecar(vp, meta);
  return mp;
}

}  // namespace pw
