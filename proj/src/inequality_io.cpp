#include "ltrace/inequality_io.hpp"

#include <sstream>

#include "ltrace/errors.hpp"

namespace ltrace {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Boundedness boundedness_from(const std::string& s) {
  if (s == "bounded") return Boundedness::bounded;
  if (s == "diverging") return Boundedness::diverging;
  if (s == "inconclusive") return Boundedness::inconclusive;
  throw ParseError("verdict", "unknown verdict '" + s + "'");
}

}  // namespace

json inequality_to_json(const InequalityReport& r, const json& config) {
  json doc;
  doc["schema"] = kInequalitySchema;
  doc["tool_version"] = LTRACE_VERSION;
  doc["test"] = r.test_id;
  doc["operator"] = {{"name", r.operator_name}, {"n", r.n}, {"k", r.k}};
  doc["s"] = r.s;
  doc["q"] = r.q_exact;
  doc["beta"] = r.beta_exact.empty() ? json(nullptr) : json(r.beta_exact);
  doc["theta"] = opt(r.theta);
  doc["alpha"] = opt(r.alpha);
  doc["morrey"] = {{"value", r.morrey}, {"estimator", "lower bound"}, {"family", r.morrey_family}};
  doc["ratios"] = r.ratios;
  doc["sup_ratio"] = r.sup_ratio;
  doc["spread"] = r.spread;
  doc["verdict"] = r.exploratory ? "exploratory — open conjecture" : to_string(r.verdict);
  json g = json::array();
  for (const auto& row : r.growth) g.push_back({{"parameter", row.parameter}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"ratio", row.ratio}});
  doc["growth"] = g;
  doc["resolutions"] = r.resolutions;
  doc["box_sizes"] = r.box_sizes;
  doc["seeds"] = r.seeds;
  doc["metrics"] = r.metrics;
  doc["notes"] = r.notes;
  doc["exploratory"] = r.exploratory;
  doc["config"] = config;
  return doc;
}

InequalityReport inequality_from_json(const json& doc) {
  try {
    if (doc.value("schema", "") != kInequalitySchema) throw ParseError("schema", "expected " + std::string(kInequalitySchema));
    InequalityReport r;
    r.test_id = doc.at("test").get<std::string>();
    r.operator_name = doc.at("operator").at("name").get<std::string>();
    r.n = doc.at("operator").at("n").get<int>();
    r.k = doc.at("operator").at("k").get<int>();
    r.s = doc.at("s").get<double>();
    r.q_exact = doc.at("q").get<std::string>();
    if (!doc.at("beta").is_null()) r.beta_exact = doc.at("beta").get<std::string>();
    if (!doc.at("theta").is_null()) r.theta = doc.at("theta").get<double>();
    if (!doc.at("alpha").is_null()) r.alpha = doc.at("alpha").get<double>();
    r.morrey = doc.at("morrey").at("value").get<double>();
    r.morrey_family = doc.at("morrey").at("family").get<std::string>();
    r.ratios = doc.at("ratios").get<std::vector<double>>();
    r.sup_ratio = doc.at("sup_ratio").get<double>();
    r.spread = doc.at("spread").get<double>();
    r.exploratory = doc.at("exploratory").get<bool>();
    if (!r.exploratory) r.verdict = boundedness_from(doc.at("verdict").get<std::string>());
    for (const auto& row : doc.at("growth")) {
      r.growth.push_back({row.at("parameter").get<double>(), row.at("lhs").get<double>(), row.at("rhs").get<double>(),
                          row.at("ratio").get<double>()});
    }
    r.resolutions = doc.at("resolutions").get<std::vector<int>>();
    r.box_sizes = doc.at("box_sizes").get<std::vector<double>>();
    r.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    r.metrics = doc.at("metrics").get<std::map<std::string, double>>();
    r.notes = doc.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError("inequality report", e.what());
  }
}

std::string growth_csv(const std::vector<GrowthRow>& rows) {
  std::string out = "parameter,LHS,RHS,ratio\n";
  for (const auto& r : rows) {
    out += csv_number(r.parameter) + "," + csv_number(r.lhs) + "," + csv_number(r.rhs) + "," + csv_number(r.ratio) + "\n";
  }
  return out;
}

json discontinuity_to_json(const DiscontinuityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"j", row.j}, {"total_variation", row.total_variation}, {"exact", row.exact},
                    {"trace", row.trace}, {"limit_trace", row.limit_trace}});
  }
  return {{"schema", kDemoSchema},
          {"tool_version", LTRACE_VERSION},
          {"demo", "strict-discontinuity"},
          {"rows", rows},
          {"limit_total_variation", r.limit_total_variation},
          {"inner_trace", r.inner_trace},
          {"outer_trace", r.outer_trace},
          {"limit_trace", r.limit_trace}};
}

std::string discontinuity_csv(const DiscontinuityReport& r) {
  std::string out = "j,total_variation,exact,trace,limit_trace\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.j) + "," + csv_number(row.total_variation) + "," + csv_number(row.exact) + "," +
           csv_number(row.trace) + "," + csv_number(row.limit_trace) + "\n";
  }
  return out;
}

json strict_to_json(const StrictReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"eps", row.eps}, {"mass", row.mass}, {"rel_error", row.rel_error}});
  return {{"schema", kDemoSchema}, {"tool_version", LTRACE_VERSION}, {"demo", "mollification-strict"},
          {"rows", rows},          {"target", opt(r.target)},        {"monotone", r.monotone}};
}

std::string strict_csv(const StrictReport& r) {
  std::string out = "eps,mass,rel_error\n";
  for (const auto& row : r.rows) out += csv_number(row.eps) + "," + csv_number(row.mass) + "," + csv_number(row.rel_error) + "\n";
  return out;
}

}  // namespace ltrace
