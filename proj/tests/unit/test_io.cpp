#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "ltrace/catalog.hpp"
#include "ltrace/errors.hpp"
#include "ltrace/field_io.hpp"
#include "ltrace/inequality_io.hpp"
#include "ltrace/measure_io.hpp"
#include "ltrace/report_io.hpp"
#include "ltrace/symbol_io.hpp"

using namespace ltrace;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "ltrace_test_io";
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove(p);
  return p;
}
}  // namespace

TEST(SymbolIo, RoundTripCatalog) {
  for (const auto& name : catalog_names()) {
    auto a = catalog(name, name == "wirtinger" ? 2 : 3);
    auto b = parse_symbol(symbol_to_json(a));
    EXPECT_EQ(b.n(), a.n());
    EXPECT_EQ(b.order(), a.order());
    EXPECT_EQ(b.terms(), a.terms()) << name;
    EXPECT_EQ(b.w_weights(), a.w_weights()) << name;
  }
}

TEST(SymbolIo, ParsesHandWrittenSpec) {
  auto a = parse_symbol(R"({"name": "d1", "n": 2, "k": 1, "dimV": 1, "dimW": 1,
    "terms": [{"alpha": [1, 0], "matrix": [["1/2"]]}]})");
  EXPECT_EQ(a.name(), "d1");
  std::vector<double> xi{2.0, 5.0};
  EXPECT_DOUBLE_EQ(a.eval_real(xi)(0, 0), 1.0);
}

TEST(SymbolIo, SyntaxErrorHasLineAndColumn) {
  try {
    parse_symbol("{\n  \"n\": 2,\n  oops\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.location().find("line 3"), std::string::npos) << e.location();
  }
}

TEST(SymbolIo, SemanticErrorHasJsonPath) {
  try {
    parse_symbol(R"({"n": 2, "k": 1, "dimV": 1, "dimW": 1,
      "terms": [{"alpha": [1, 0], "matrix": [["1"]]}, {"alpha": [1], "matrix": [["1"]]}]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(e.location().find("terms[1].alpha"), std::string::npos) << e.location();
  }
  EXPECT_THROW(parse_symbol(R"({"n": 2})"), ParseError);
}

TEST(ReportIo, ClassificationDocument) {
  auto r = classify_full(catalog("sym_gradient", 2));
  auto j = report_to_json(r);
  EXPECT_EQ(j["schema"], kClassificationSchema);
  EXPECT_EQ(j["elliptic"]["verdict"], "yes");
  EXPECT_EQ(j["c_elliptic"]["certificate_degree"], 2);
  EXPECT_FALSE(j["certificate"].is_null());
  EXPECT_FALSE(report_to_text(r).empty());
}

TEST(CertificateIo, RoundTripExact) {
  auto a = catalog("sym_gradient", 3);
  auto cert = *search_certificate(a, 4).certificate;
  auto back = parse_certificate(certificate_to_text(cert));
  EXPECT_EQ(back.d, cert.d);
  ASSERT_EQ(back.blocks.size(), cert.blocks.size());
  for (std::size_t i = 0; i < cert.blocks.size(); ++i) EXPECT_TRUE(back.blocks[i] == cert.blocks[i]);
  EXPECT_TRUE(verify_certificate(a, back, false).exact);
}

TEST(MeasureIo, TextAndBinaryBitwise) {
  auto mu = build_cantor_product(1.5, 2, 5);
  for (const auto& back : {parse_measure(measure_to_text(mu)), measure_from_binary(measure_to_binary(mu))}) {
    EXPECT_EQ(back.points, mu.points);
    EXPECT_EQ(back.weights, mu.weights);
    EXPECT_EQ(back.level, mu.level);
    EXPECT_EQ(back.dimension_alpha, mu.dimension_alpha);
  }
  Cone c{{0.0, 0.0}, {0.0, 1.0}, 0.5};
  auto cone = build_cone_cantor(1.5, 2, 5, c, 0.5);
  auto back = measure_from_binary(measure_to_binary(cone));
  EXPECT_EQ(back.points, cone.points);
  EXPECT_EQ(back.support.kind, SupportDescriptor::Kind::cone);
}

TEST(MeasureIo, TruncatedBinaryRejected) {
  auto bytes = measure_to_binary(build_cantor_product(1.5, 2, 4));
  EXPECT_THROW(measure_from_binary(bytes.substr(0, bytes.size() / 2)), ParseError);
  EXPECT_THROW(measure_from_binary("XXXX"), ParseError);
}

TEST(FieldIo, BinaryRoundTripAndCsv) {
  auto g = Grid::centered(2, 8, 2.0);
  auto f = random_band_limited(g, 3, 2, 4);
  auto back = field_from_binary(field_to_binary(f));
  EXPECT_EQ(back.values(), f.values());
  EXPECT_TRUE(back.grid() == f.grid());
  auto csv = field_to_csv(f);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x1,x2,u1,u2,u3");
}

TEST(InequalityIo, RoundTripAndCsv) {
  InequalityReport r;
  r.test_id = "blowup_nonelliptic";
  r.operator_name = "d1";
  r.n = 2;
  r.k = 1;
  r.s = 0.5;
  r.q_exact = "3/2";
  r.beta_exact = "1/3";
  r.growth = {{0.125, 1.0, 2.0, 0.5}, {0.0078125, 1.5, 2.0, 0.75}};
  r.verdict = Boundedness::diverging;
  r.metrics["witness_residual"] = 0.0;
  auto j = inequality_to_json(r);
  EXPECT_EQ(j["schema"], kInequalitySchema);
  auto back = inequality_from_json(j);
  EXPECT_EQ(back.verdict, Boundedness::diverging);
  EXPECT_EQ(back.growth.size(), 2u);
  EXPECT_EQ(back.growth[1].lhs, 1.5);
  EXPECT_EQ(back.q_exact, "3/2");
  auto csv = growth_csv(r.growth);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "parameter,LHS,RHS,ratio");

  r.exploratory = true;
  r.verdict = Boundedness::inconclusive;
  EXPECT_EQ(inequality_to_json(r)["verdict"], "exploratory — open conjecture");
}

TEST(Files, WriteNewFileRefusesOverwrite) {
  auto p = scratch("once.txt");
  write_new_file(p, "a");
  EXPECT_THROW(write_new_file(p, "b"), Error);
  std::ifstream in(p);
  std::string s;
  in >> s;
  EXPECT_EQ(s, "a");
}

TEST(Files, MeasureFileByExtension) {
  auto mu = build_cantor_product(0.5, 1, 6);
  auto pt = scratch("m.msr"), pb = scratch("m.msrb");
  write_measure_file(mu, pt);
  write_measure_file(mu, pb);
  EXPECT_EQ(read_measure_file(pt).points, mu.points);
  EXPECT_EQ(read_measure_file(pb).points, mu.points);
  EXPECT_LT(fs::file_size(pb), fs::file_size(pt));
}
