#include "ltrace/report_io.hpp"

#include <fstream>
#include <sstream>

#include "ltrace/errors.hpp"

namespace ltrace {

using nlohmann::json;

namespace {

json complex_list(const std::vector<std::complex<double>>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

json config_json(const ClassifyConfig& c) {
  return {{"grid_density", c.grid_density},
          {"polish_starts", c.polish_starts},
          {"ellipticity_tol", c.ellipticity_tol},
          {"stabilization_rounds", c.stabilization_rounds},
          {"cancel_tol", c.cancel_tol},
          {"witness_samples", c.witness_samples},
          {"num_planes", c.num_planes},
          {"d_max", c.d_max ? json(*c.d_max) : json(nullptr)},
          {"refute_starts", c.refute_starts},
          {"refute_tol", c.refute_tol},
          {"seed", c.seed}};
}

json polynomial_json(const Polynomial& p) {
  json mons = json::array();
  for (const auto& [beta, c] : p.terms()) {
    json m = json::array();
    for (int x : beta.e) m.push_back(x);
    m.push_back(to_string(c));
    mons.push_back(std::move(m));
  }
  return mons;
}

Polynomial polynomial_from_json(const json& mons, int n, const std::string& path) {
  if (!mons.is_array()) throw ParseError(path, "expected a monomial list");
  Polynomial p(n);
  for (std::size_t i = 0; i < mons.size(); ++i) {
    const json& m = mons[i];
    const std::string mp = path + "[" + std::to_string(i) + "]";
    if (!m.is_array() || static_cast<int>(m.size()) != n + 1) throw ParseError(mp, "expected n exponents and a coefficient");
    std::vector<int> e;
    for (int a = 0; a < n; ++a) {
      if (!m[static_cast<std::size_t>(a)].is_number_integer() || m[static_cast<std::size_t>(a)].get<int>() < 0) {
        throw ParseError(mp, "exponents must be nonnegative integers");
      }
      e.push_back(m[static_cast<std::size_t>(a)].get<int>());
    }
    if (!m.back().is_string()) throw ParseError(mp, "coefficient must be a \"p/q\" string");
    try {
      p.add_term(MultiIndex(e), parse_rational(m.back().get<std::string>()));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(mp, err.what());
    }
  }
  return p;
}

int get_int(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number_integer()) throw ParseError(key, "missing or non-integer field");
  return it->get<int>();
}

}  // namespace

json certificate_to_json(const Certificate& c) {
  json blocks = json::array();
  for (std::size_t b = 0; b < c.blocks.size(); ++b) {
    json alpha = json::array();
    for (int x : c.alphas[b].e) alpha.push_back(x);
    json rows = json::array();
    for (int r = 0; r < c.blocks[b].rows(); ++r) {
      json row = json::array();
      for (int col = 0; col < c.blocks[b].cols(); ++col) row.push_back(polynomial_json(c.blocks[b](r, col)));
      rows.push_back(std::move(row));
    }
    blocks.push_back({{"alpha", alpha}, {"entries", rows}});
  }
  return {{"schema", kCertificateSchema}, {"n", c.n}, {"k", c.k}, {"d", c.d},
          {"dimV", c.dim_v}, {"dimW", c.dim_w}, {"blocks", blocks}};
}

Certificate certificate_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  if (doc.value("schema", std::string()) != kCertificateSchema) throw ParseError("schema", "expected " + std::string(kCertificateSchema));
  Certificate c;
  c.n = get_int(doc, "n");
  c.k = get_int(doc, "k");
  c.d = get_int(doc, "d");
  c.dim_v = get_int(doc, "dimV");
  c.dim_w = get_int(doc, "dimW");
  if (c.n < 1 || c.k < 1 || c.d < c.k || c.dim_v < 1 || c.dim_w < 1) throw ParseError("$", "inconsistent dimensions");
  auto it = doc.find("blocks");
  if (it == doc.end() || !it->is_array()) throw ParseError("blocks", "missing block list");
  for (std::size_t b = 0; b < it->size(); ++b) {
    const json& blk = (*it)[b];
    const std::string path = "blocks[" + std::to_string(b) + "]";
    if (!blk.contains("alpha") || !blk["alpha"].is_array() || static_cast<int>(blk["alpha"].size()) != c.n) {
      throw ParseError(path + ".alpha", "expected n entries");
    }
    MultiIndex alpha(blk["alpha"].get<std::vector<int>>());
    if (alpha.order() != c.d) throw ParseError(path + ".alpha", "|alpha| must equal d");
    const json& rows = blk.value("entries", json());
    if (!rows.is_array() || static_cast<int>(rows.size()) != c.dim_v) throw ParseError(path + ".entries", "expected dimV rows");
    PolynomialMatrix m(c.dim_v, c.dim_w, c.n);
    for (int r = 0; r < c.dim_v; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != c.dim_w) {
        throw ParseError(path + ".entries[" + std::to_string(r) + "]", "expected dimW entries");
      }
      for (int col = 0; col < c.dim_w; ++col) {
        const std::string ep = path + ".entries[" + std::to_string(r) + "][" + std::to_string(col) + "]";
        m(r, col) = polynomial_from_json(row[static_cast<std::size_t>(col)], c.n, ep);
        if (!m(r, col).is_homogeneous(c.d - c.k)) throw ParseError(ep, "entries must be homogeneous of degree d - k");
      }
    }
    c.alphas.push_back(alpha);
    c.blocks.push_back(std::move(m));
  }
  return c;
}

std::string certificate_to_text(const Certificate& c) { return certificate_to_json(c).dump(2) + "\n"; }

Certificate parse_certificate(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  return certificate_from_json(doc);
}

void write_new_file(const std::filesystem::path& path, std::string_view text) {
  if (std::filesystem::exists(path)) throw DomainError("refusing to overwrite existing file " + path.string());
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DomainError("write failed: " + path.string());
}

void write_certificate_file(const Certificate& c, const std::filesystem::path& path) {
  write_new_file(path, certificate_to_text(c));
}

Certificate read_certificate_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

json report_to_json(const ClassificationReport& r) {
  json doc;
  doc["schema"] = kClassificationSchema;
  doc["tool_version"] = LTRACE_VERSION;
  doc["operator"] = {{"name", r.name}, {"n", r.n}, {"k", r.k}, {"dimV", r.dim_v}, {"dimW", r.dim_w}};
  const auto& e = r.elliptic;
  doc["elliptic"] = {{"verdict", to_string(e.verdict)}, {"margin", e.margin}, {"scale", e.scale},
                     {"witness", e.witness}, {"witness_sigma", e.witness_sigma}, {"samples", e.samples},
                     {"tol", e.tol}};
  const auto& c = r.cancelling;
  doc["cancelling"] = {{"verdict", to_string(c.verdict)}, {"residual_dim", c.residual_dim},
                       {"witness_w", c.witness_w}, {"witness_distance", c.witness_distance},
                       {"samples", c.samples}, {"non_elliptic_input", c.non_elliptic_input}, {"tol", c.tol}};
  const auto& s = r.strongly_cancelling;
  doc["strongly_cancelling"] = {{"verdict", to_string(s.verdict)}, {"plane_e1", s.plane_e1},
                                {"plane_e2", s.plane_e2}, {"witness_w", s.witness_w},
                                {"witness_distance", s.witness_distance}, {"planes_checked", s.planes_checked},
                                {"note", s.note}};
  const auto& ce = r.c_elliptic;
  doc["c_elliptic"] = {{"verdict", to_string(ce.verdict)},
                       {"certificate_degree", ce.certificate_degree ? json(*ce.certificate_degree) : json(nullptr)},
                       {"d_max", ce.d_max}, {"eta", ce.eta}, {"nu", ce.nu}, {"kernel", complex_list(ce.kernel)},
                       {"residual", ce.residual}, {"min_sigma", ce.min_sigma}, {"starts", ce.starts},
                       {"source", ce.source}};
  doc["certificate"] = r.certificate ? certificate_to_json(*r.certificate) : json(nullptr);
  doc["config"] = config_json(r.config);
  doc["notes"] = r.notes;
  return doc;
}

std::string report_to_text(const ClassificationReport& r) { return report_to_json(r).dump(2) + "\n"; }

}  // namespace ltrace
