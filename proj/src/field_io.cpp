#include "ltrace/field_io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ltrace/errors.hpp"
#include "ltrace/report_io.hpp"

namespace ltrace {

namespace {

template <class T>
void put(std::string& s, T v) {
  char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  s.append(b, sizeof(T));
}

template <class T>
T get(std::string_view b, std::size_t& pos) {
  if (pos + sizeof(T) > b.size()) throw ParseError("byte " + std::to_string(pos), "truncated binary field");
  T v;
  std::memcpy(&v, b.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string field_to_csv(const GridField& u) {
  const Grid& g = u.grid();
  std::ostringstream os;
  os << std::setprecision(17);
  for (int a = 0; a < g.n; ++a) os << (a ? "," : "") << "x" << (a + 1);
  for (int c = 0; c < u.components(); ++c) os << ",u" << (c + 1);
  os << "\n";
  std::vector<double> x(static_cast<std::size_t>(g.n));
  for (std::size_t i = 0; i < u.nodes(); ++i) {
    g.node(i, x);
    for (int a = 0; a < g.n; ++a) os << (a ? "," : "") << x[static_cast<std::size_t>(a)];
    for (int c = 0; c < u.components(); ++c) os << "," << u.at(c, i);
    os << "\n";
  }
  return os.str();
}

std::string field_to_binary(const GridField& u) {
  const Grid& g = u.grid();
  std::string s = "LTFD";
  put<std::uint32_t>(s, 1);
  put<std::uint32_t>(s, static_cast<std::uint32_t>(g.n));
  put<std::uint32_t>(s, static_cast<std::uint32_t>(u.components()));
  put<std::uint8_t>(s, g.periodic ? 1 : 0);
  put<std::uint8_t>(s, u.band_limited() ? 1 : 0);
  for (int a = 0; a < g.n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    put<std::int32_t>(s, g.res[i]);
    put<double>(s, g.length[i]);
    put<double>(s, g.origin[i]);
  }
  for (double w : u.weights()) put<double>(s, w);
  for (double v : u.values()) put<double>(s, v);
  return s;
}

GridField field_from_binary(std::string_view b) {
  if (b.size() < 4 || b.substr(0, 4) != "LTFD") throw ParseError("byte 0", "not a binary field file");
  std::size_t pos = 4;
  if (get<std::uint32_t>(b, pos) != 1) throw ParseError("byte 4", "unsupported version");
  Grid g;
  g.n = static_cast<int>(get<std::uint32_t>(b, pos));
  const int comps = static_cast<int>(get<std::uint32_t>(b, pos));
  if (g.n < 1 || g.n > 4 || comps < 1 || comps > 4096) throw ParseError("header", "bad dimensions");
  g.periodic = get<std::uint8_t>(b, pos) != 0;
  const bool band = get<std::uint8_t>(b, pos) != 0;
  for (int a = 0; a < g.n; ++a) {
    g.res.push_back(get<std::int32_t>(b, pos));
    g.length.push_back(get<double>(b, pos));
    g.origin.push_back(get<double>(b, pos));
  }
  try {
    g.validate();
  } catch (const Error& e) {
    throw ParseError("grid", e.what());
  }
  std::vector<double> weights(static_cast<std::size_t>(comps));
  for (double& w : weights) w = get<double>(b, pos);
  GridField u(g, comps, weights);
  if (b.size() - pos != u.values().size() * sizeof(double)) throw ParseError("samples", "size does not match the grid");
  for (double& v : u.values()) v = get<double>(b, pos);
  u.set_band_limited(band);
  return u;
}

void write_field_file(const GridField& u, const std::filesystem::path& path) {
  write_new_file(path, path.extension() == ".csv" ? field_to_csv(u) : field_to_binary(u));
}

GridField read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return field_from_binary(ss.str());
}

}  // namespace ltrace
