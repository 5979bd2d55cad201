#include "ltrace/symbol_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ltrace/errors.hpp"

namespace ltrace {

using nlohmann::json;

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

int positive_int(const json& v, const std::string& path, int min_value) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  const long long x = v.get<long long>();
  if (x < min_value || x > 1'000'000) throw ParseError(path, "value " + std::to_string(x) + " out of range");
  return static_cast<int>(x);
}

Rational rational_entry(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected a rational string \"p/q\" or an integer");
}

}  // namespace

HomogeneousSymbol parse_symbol(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("(root)", "expected an object");

  const int n = positive_int(field(doc, "n", ""), "n", 1);
  const int k = positive_int(field(doc, "k", ""), "k", 1);
  const int dim_v = positive_int(field(doc, "dimV", ""), "dimV", 1);
  const int dim_w = positive_int(field(doc, "dimW", ""), "dimW", 1);
  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("name", "expected a string");
    name = it->get<std::string>();
  }
  std::vector<Rational> weights;
  if (auto it = doc.find("w_weights"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("w_weights", "expected an array");
    if (static_cast<int>(it->size()) != dim_w) {
      throw ParseError("w_weights", "expected " + std::to_string(dim_w) + " entries, got " + std::to_string(it->size()));
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = "w_weights[" + std::to_string(i) + "]";
      Rational w = rational_entry((*it)[i], path);
      if (w <= 0) throw ParseError(path, "weights must be positive");
      weights.push_back(w);
    }
  }

  const json& terms = field(doc, "terms", "");
  if (!terms.is_array()) throw ParseError("terms", "expected an array");
  HomogeneousSymbol::Terms out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string base = "terms[" + std::to_string(t) + "]";
    const json& term = terms[t];
    if (!term.is_object()) throw ParseError(base, "expected an object");
    const json& alpha_j = field(term, "alpha", base);
    if (!alpha_j.is_array() || static_cast<int>(alpha_j.size()) != n) {
      throw ParseError(base + ".alpha", "expected an array of " + std::to_string(n) + " nonnegative integers");
    }
    std::vector<int> e;
    int order = 0;
    for (std::size_t i = 0; i < alpha_j.size(); ++i) {
      const int a = positive_int(alpha_j[i], base + ".alpha[" + std::to_string(i) + "]", 0);
      e.push_back(a);
      order += a;
    }
    if (order != k) {
      throw ParseError(base + ".alpha", "|alpha| = " + std::to_string(order) + " but k = " + std::to_string(k));
    }
    const json& mat = field(term, "matrix", base);
    if (!mat.is_array() || static_cast<int>(mat.size()) != dim_w) {
      throw ParseError(base + ".matrix", "expected " + std::to_string(dim_w) + " rows (dimW)");
    }
    RationalMatrix m(dim_w, dim_v);
    for (int r = 0; r < dim_w; ++r) {
      const json& row = mat[static_cast<std::size_t>(r)];
      const std::string rpath = base + ".matrix[" + std::to_string(r) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != dim_v) {
        throw ParseError(rpath, "expected " + std::to_string(dim_v) + " entries (dimV)");
      }
      for (int c = 0; c < dim_v; ++c) {
        m(r, c) = rational_entry(row[static_cast<std::size_t>(c)], rpath + "[" + std::to_string(c) + "]");
      }
    }
    MultiIndex alpha(std::move(e));
    auto [it, inserted] = out.try_emplace(alpha, m);
    if (!inserted) throw ParseError(base + ".alpha", "duplicate multi-index " + to_string(alpha));
  }
  try {
    return HomogeneousSymbol(n, k, dim_v, dim_w, std::move(out), std::move(name), std::move(weights));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("terms", e.what());
  }
}

HomogeneousSymbol read_symbol_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_symbol(ss.str());
}

std::string symbol_to_json(const HomogeneousSymbol& a) {
  json doc = json::object();
  doc["name"] = a.name();
  doc["n"] = a.n();
  doc["k"] = a.order();
  doc["dimV"] = a.dim_v();
  doc["dimW"] = a.dim_w();
  if (!a.has_unit_weights()) {
    json w = json::array();
    for (const auto& q : a.w_weights()) w.push_back(to_string(q));
    doc["w_weights"] = w;
  }
  json terms = json::array();
  for (const auto& [alpha, m] : a.terms()) {
    json mat = json::array();
    for (int r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
      mat.push_back(row);
    }
    terms.push_back({{"alpha", alpha.e}, {"matrix", mat}});
  }
  doc["terms"] = terms;
  return doc.dump(2) + "\n";
}

void write_symbol_file(const HomogeneousSymbol& a, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << symbol_to_json(a);
}

}  // namespace ltrace
