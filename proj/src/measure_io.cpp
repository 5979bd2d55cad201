#include "ltrace/measure_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ltrace/errors.hpp"
#include "ltrace/report_io.hpp"

namespace ltrace {

using nlohmann::json;

namespace {

const char* axis_kind(AxisSpec::Kind k) {
  switch (k) {
    case AxisSpec::Kind::full:
      return "full";
    case AxisSpec::Kind::cantor:
      return "cantor";
    case AxisSpec::Kind::point:
      return "point";
  }
  return "?";
}

AxisSpec::Kind axis_kind_from(const std::string& s, const std::string& path) {
  if (s == "full") return AxisSpec::Kind::full;
  if (s == "cantor") return AxisSpec::Kind::cantor;
  if (s == "point") return AxisSpec::Kind::point;
  throw ParseError(path, "unknown axis kind '" + s + "'");
}

SupportDescriptor::Kind support_kind_from(const std::string& s) {
  for (auto k : {SupportDescriptor::Kind::cube, SupportDescriptor::Kind::cone, SupportDescriptor::Kind::hyperplane,
                 SupportDescriptor::Kind::lebesgue, SupportDescriptor::Kind::point}) {
    if (s == to_string(k)) return k;
  }
  throw ParseError("support.kind", "unknown support kind '" + s + "'");
}

json generator_json(const ProductSpec& g) {
  json axes = json::array();
  for (const auto& ax : g.axes) axes.push_back({{"kind", axis_kind(ax.kind)}, {"dim", ax.dim}, {"at", ax.at}});
  return {{"axes", axes}, {"lo", g.lo}, {"hi", g.hi}, {"level", g.level}, {"volume_weights", g.volume_weights}};
}

ProductSpec generator_from_json(const json& j) {
  ProductSpec g;
  try {
    for (std::size_t i = 0; i < j.at("axes").size(); ++i) {
      const json& a = j.at("axes")[i];
      AxisSpec ax;
      ax.kind = axis_kind_from(a.at("kind").get<std::string>(), "generator.axes[" + std::to_string(i) + "].kind");
      ax.dim = a.at("dim").get<double>();
      ax.at = a.at("at").get<double>();
      g.axes.push_back(ax);
    }
    g.lo = j.at("lo").get<std::vector<double>>();
    g.hi = j.at("hi").get<std::vector<double>>();
    g.level = j.at("level").get<int>();
    g.volume_weights = j.at("volume_weights").get<bool>();
  } catch (const json::exception& e) {
    throw ParseError("generator", e.what());
  }
  return g;
}

json support_json(const SupportDescriptor& s) {
  return {{"kind", to_string(s.kind)}, {"lo", s.lo},       {"hi", s.hi},
          {"grid", s.grid},            {"apex", s.apex},   {"axis", s.axis},
          {"half_angle", s.half_angle}, {"normal", s.normal}, {"offset", s.offset}};
}

SupportDescriptor support_from_json(const json& j) {
  SupportDescriptor s;
  try {
    s.kind = support_kind_from(j.at("kind").get<std::string>());
    s.lo = j.value("lo", std::vector<double>{});
    s.hi = j.value("hi", std::vector<double>{});
    s.grid = j.value("grid", std::vector<int>{});
    s.apex = j.value("apex", std::vector<double>{});
    s.axis = j.value("axis", std::vector<double>{});
    s.half_angle = j.value("half_angle", 0.0);
    s.normal = j.value("normal", std::vector<double>{});
    s.offset = j.value("offset", 0.0);
  } catch (const json::exception& e) {
    throw ParseError("support", e.what());
  }
  return s;
}

/// Cell centers of each generator axis, computed exactly as build_product does.
std::vector<std::vector<double>> axis_centers(const ProductSpec& g) {
  std::vector<std::vector<double>> out;
  for (int a = 0; a < g.n(); ++a) {
    const auto u = static_cast<std::size_t>(a);
    ProductSpec one;
    one.axes = {g.axes[u]};
    one.lo = {g.lo[u]};
    one.hi = {g.hi[u]};
    one.level = g.level;
    out.push_back(build_product(one).points);
  }
  return out;
}

class Writer {
 public:
  template <class T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    s_.append(b, sizeof(T));
  }
  void put_vec(const std::vector<double>& v) {
    put<std::uint32_t>(static_cast<std::uint32_t>(v.size()));
    for (double x : v) put(x);
  }
  std::string take() { return std::move(s_); }

 private:
  std::string s_;
};

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > b_.size()) throw ParseError("byte " + std::to_string(pos_), "truncated binary measure");
    T v;
    std::memcpy(&v, b_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<double> get_vec() {
    const auto len = get<std::uint32_t>();
    if (len > b_.size()) throw ParseError("byte " + std::to_string(pos_), "bad vector length");
    std::vector<double> v(len);
    for (auto& x : v) x = get<double>();
    return v;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  std::string_view b_;
  std::size_t pos_ = 0;
};

void put_support(Writer& w, const SupportDescriptor& s) {
  w.put<std::uint8_t>(static_cast<std::uint8_t>(s.kind));
  w.put_vec(s.lo);
  w.put_vec(s.hi);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(s.grid.size()));
  for (int g : s.grid) w.put<std::int32_t>(g);
  w.put_vec(s.apex);
  w.put_vec(s.axis);
  w.put(s.half_angle);
  w.put_vec(s.normal);
  w.put(s.offset);
}

SupportDescriptor get_support(Reader& r) {
  SupportDescriptor s;
  const auto k = r.get<std::uint8_t>();
  if (k > static_cast<std::uint8_t>(SupportDescriptor::Kind::point)) throw ParseError("support", "bad kind");
  s.kind = static_cast<SupportDescriptor::Kind>(k);
  s.lo = r.get_vec();
  s.hi = r.get_vec();
  const auto ng = r.get<std::uint32_t>();
  if (ng > 64) throw ParseError("support", "bad grid length");
  for (std::uint32_t i = 0; i < ng; ++i) s.grid.push_back(r.get<std::int32_t>());
  s.apex = r.get_vec();
  s.axis = r.get_vec();
  s.half_angle = r.get<double>();
  s.normal = r.get_vec();
  s.offset = r.get<double>();
  return s;
}

}  // namespace

json measure_to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    json a = json::array();
    for (double x : mu.point(i)) a.push_back(x);
    a.push_back(mu.weights[i]);
    atoms.push_back(std::move(a));
  }
  return {{"schema", kMeasureSchema},
          {"n", mu.n},
          {"dimension_alpha", mu.dimension_alpha},
          {"level", mu.level},
          {"spacing", mu.spacing},
          {"total_mass", mu.total_mass()},
          {"support", support_json(mu.support)},
          {"generator", mu.generator ? generator_json(*mu.generator) : json(nullptr)},
          {"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  if (doc.value("schema", std::string()) != kMeasureSchema) throw ParseError("schema", "expected " + std::string(kMeasureSchema));
  DiscreteMeasure mu;
  try {
    mu.n = doc.at("n").get<int>();
    mu.dimension_alpha = doc.at("dimension_alpha").get<double>();
    mu.level = doc.at("level").get<int>();
    mu.spacing = doc.at("spacing").get<double>();
  } catch (const json::exception& e) {
    throw ParseError("$", e.what());
  }
  if (mu.n < 1) throw ParseError("n", "must be >= 1");
  if (!doc.contains("support")) throw ParseError("support", "missing field");
  mu.support = support_from_json(doc["support"]);
  if (doc.contains("generator") && !doc["generator"].is_null()) mu.generator = generator_from_json(doc["generator"]);
  if (!doc.contains("atoms") || !doc["atoms"].is_array()) throw ParseError("atoms", "missing atom list");
  const json& atoms = doc["atoms"];
  mu.points.reserve(atoms.size() * static_cast<std::size_t>(mu.n));
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const json& a = atoms[i];
    const std::string path = "atoms[" + std::to_string(i) + "]";
    if (!a.is_array() || static_cast<int>(a.size()) != mu.n + 1) throw ParseError(path, "expected n coordinates and a weight");
    for (const auto& x : a) {
      if (!x.is_number()) throw ParseError(path, "non-numeric entry");
    }
    for (int c = 0; c < mu.n; ++c) mu.points.push_back(a[static_cast<std::size_t>(c)].get<double>());
    mu.weights.push_back(a.back().get<double>());
  }
  try {
    mu.validate();
  } catch (const DomainError& e) {
    throw ParseError("atoms", e.what());
  }
  if (doc.contains("total_mass") && doc["total_mass"].is_number()) {
    const double declared = doc["total_mass"].get<double>();
    if (std::abs(declared - mu.total_mass()) > 1e-9 * std::max(1.0, std::abs(declared))) {
      throw ParseError("total_mass", "does not match the atom weights");
    }
  }
  return mu;
}

std::string measure_to_text(const DiscreteMeasure& mu) { return measure_to_json(mu).dump(1) + "\n"; }

DiscreteMeasure parse_measure(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  return measure_from_json(doc);
}

std::string measure_to_binary(const DiscreteMeasure& mu) {
  Writer w;
  w.put<char>('L');
  w.put<char>('T');
  w.put<char>('M');
  w.put<char>('S');
  w.put<std::uint32_t>(1);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(mu.n));
  w.put<std::int32_t>(mu.level);
  w.put(mu.dimension_alpha);
  w.put(mu.spacing);
  put_support(w, mu.support);
  w.put<std::uint8_t>(mu.generator ? 1 : 0);
  if (mu.generator) {
    const ProductSpec& g = *mu.generator;
    w.put<std::uint32_t>(static_cast<std::uint32_t>(g.n()));
    for (const auto& ax : g.axes) {
      w.put<std::uint8_t>(static_cast<std::uint8_t>(ax.kind));
      w.put(ax.dim);
      w.put(ax.at);
    }
    w.put_vec(g.lo);
    w.put_vec(g.hi);
    w.put<std::int32_t>(g.level);
    w.put<std::uint8_t>(g.volume_weights ? 1 : 0);
  }
  w.put<std::uint64_t>(mu.size());
  const auto n = static_cast<std::size_t>(mu.n);
  bool cells = mu.generator.has_value();
  std::vector<std::uint32_t> codes;
  if (cells) {
    const auto centers = axis_centers(*mu.generator);
    codes.reserve(mu.size() * n);
    for (std::size_t i = 0; i < mu.size() && cells; ++i) {
      for (std::size_t a = 0; a < n; ++a) {
        const auto& c = centers[a];
        const double x = mu.points[i * n + a];
        const auto it = std::lower_bound(c.begin(), c.end(), x);
        if (it == c.end() || *it != x) {
          cells = false;
          break;
        }
        codes.push_back(static_cast<std::uint32_t>(it - c.begin()));
      }
    }
  }
  w.put<std::uint8_t>(cells ? 1 : 0);
  if (cells) {
    for (auto c : codes) w.put(c);
  } else {
    for (double x : mu.points) w.put(x);
  }
  const bool uniform = std::all_of(mu.weights.begin(), mu.weights.end(),
                                   [&](double x) { return x == mu.weights.front(); });
  w.put<std::uint8_t>(uniform ? 1 : 0);
  if (uniform) {
    w.put(mu.weights.empty() ? 0.0 : mu.weights.front());
  } else {
    for (double x : mu.weights) w.put(x);
  }
  return w.take();
}

DiscreteMeasure measure_from_binary(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < 4 || bytes.substr(0, 4) != "LTMS") throw ParseError("byte 0", "not a binary measure file");
  for (int i = 0; i < 4; ++i) r.get<char>();
  if (r.get<std::uint32_t>() != 1) throw ParseError("byte 4", "unsupported version");
  DiscreteMeasure mu;
  mu.n = static_cast<int>(r.get<std::uint32_t>());
  if (mu.n < 1 || mu.n > 16) throw ParseError("byte 8", "bad dimension");
  mu.level = r.get<std::int32_t>();
  mu.dimension_alpha = r.get<double>();
  mu.spacing = r.get<double>();
  mu.support = get_support(r);
  if (r.get<std::uint8_t>()) {
    ProductSpec g;
    const auto na = r.get<std::uint32_t>();
    if (na != static_cast<std::uint32_t>(mu.n)) throw ParseError("generator", "axis count mismatch");
    for (std::uint32_t a = 0; a < na; ++a) {
      AxisSpec ax;
      const auto k = r.get<std::uint8_t>();
      if (k > 2) throw ParseError("generator", "bad axis kind");
      ax.kind = static_cast<AxisSpec::Kind>(k);
      ax.dim = r.get<double>();
      ax.at = r.get<double>();
      g.axes.push_back(ax);
    }
    g.lo = r.get_vec();
    g.hi = r.get_vec();
    g.level = r.get<std::int32_t>();
    g.volume_weights = r.get<std::uint8_t>() != 0;
    mu.generator = g;
  }
  const auto count = r.get<std::uint64_t>();
  if (count > bytes.size()) throw ParseError("atoms", "bad atom count");
  const auto n = static_cast<std::size_t>(mu.n);
  mu.points.resize(count * n);
  if (r.get<std::uint8_t>()) {
    if (!mu.generator) throw ParseError("atoms", "cell-index encoding without a generator");
    const auto centers = axis_centers(*mu.generator);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t a = 0; a < n; ++a) {
        const auto c = r.get<std::uint32_t>();
        if (c >= centers[a].size()) throw ParseError("atoms", "cell index out of range");
        mu.points[i * n + a] = centers[a][c];
      }
    }
  } else {
    for (double& x : mu.points) x = r.get<double>();
  }
  if (r.get<std::uint8_t>()) {
    mu.weights.assign(count, r.get<double>());
  } else {
    mu.weights.resize(count);
    for (double& x : mu.weights) x = r.get<double>();
  }
  if (!r.done()) throw ParseError("end", "trailing bytes");
  try {
    mu.validate();
  } catch (const DomainError& e) {
    throw ParseError("atoms", e.what());
  }
  return mu;
}

void write_measure_file(const DiscreteMeasure& mu, const std::filesystem::path& path) {
  write_new_file(path, path.extension() == ".msrb" ? measure_to_binary(mu) : measure_to_text(mu));
}

DiscreteMeasure read_measure_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string s = ss.str();
  if (s.size() >= 4 && s.compare(0, 4, "LTMS") == 0) return measure_from_binary(s);
  return parse_measure(s);
}

}  // namespace ltrace
