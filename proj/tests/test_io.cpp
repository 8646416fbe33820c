#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "lpocv/ingest.hpp"
#include "lpocv/serialize.hpp"
#include "test_support.hpp"

using namespace lpocv;
using lpocv_test::error_code_of;

namespace {

std::string message_of(const std::string& text, const ColumnSelector& col = {}) {
  try {
    (void)parse_samples(text, col);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("one value per line") {
  const Sample s = parse_samples("0.1\n0.2\n0.7\n");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == 0.1);
  CHECK(s[2] == 0.7);
  for (const char* variant : {"0.1\n0.2\n0.7", "0.1\r\n0.2\r\n0.7\r\n", "0.1\r\n0.2\r\n0.7", "\n0.1\n\n0.2\n0.7\n\n",
                              "  0.1 \n\t0.2\n0.7  \r\n"}) {
    const Sample v = parse_samples(variant);
    REQUIRE(v.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(v[i] == s[i]);
  }
  CHECK(parse_samples("1e-1\n1\n0\n")[0] == 0.1);
}

TEST_CASE("errors name the line") {
  CHECK(error_code_of([] { (void)parse_samples("1.5\n"); }) == ErrorCode::OutOfRange);
  CHECK(message_of("1.5\n").find("line 1") != std::string::npos);
  CHECK(message_of("0.1\n\n0.3\n-0.2\n").find("line 4") != std::string::npos);
  CHECK(error_code_of([] { (void)parse_samples("0.1\nabc\n"); }) == ErrorCode::Parse);
  CHECK(message_of("0.1\nabc\n").find("line 2") != std::string::npos);
  CHECK(error_code_of([] { (void)parse_samples("0.1 0.2\n"); }) == ErrorCode::Parse);
  CHECK(error_code_of([] { (void)parse_samples("nan\n"); }) != ErrorCode::Internal);
  CHECK(error_code_of([] { (void)parse_samples(""); }) == ErrorCode::EmptySample);
  CHECK(error_code_of([] { (void)parse_samples("\n\r\n\n"); }) == ErrorCode::EmptySample);
}

TEST_CASE("CSV columns") {
  const std::string csv = "id,x,y\n1,0.25,0.9\n2,0.5,0.1\r\n3,0.75,0.2\n";
  ColumnSelector by_name;
  by_name.name = "x";
  const Sample a = parse_samples(csv, by_name);
  REQUIRE(a.size() == 3);
  CHECK(a[1] == 0.5);
  ColumnSelector by_index;
  by_index.index = 2;
  by_index.header = true;
  const Sample b = parse_samples(csv, by_index);
  CHECK(b[0] == 0.9);
  ColumnSelector missing;
  missing.name = "z";
  CHECK(error_code_of([&] { (void)parse_samples(csv, missing); }) == ErrorCode::Parse);
  CHECK(message_of(csv, missing).find("line 1") != std::string::npos);
  ColumnSelector first;
  first.index = 1;
  first.header = true;
  CHECK(message_of("h1,h2\n0.1,0.2\n0.3\n", first).find("line 3") != std::string::npos);
}

TEST_CASE("file ingestion") {
  char path[] = "/tmp/lpocv_io_XXXXXX";
  const int fd = mkstemp(path);
  REQUIRE(fd >= 0);
  {
    std::ofstream out(path);
    out << "0.1\n0.2\n0.7\n";
  }
  CHECK(ingest_samples(path).size() == 3);
  std::remove(path);
  CHECK(error_code_of([&] { (void)ingest_samples(path); }) == ErrorCode::Io);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 2.0 / 3.0, -10.0 / 9.0, 1e-300, 123456789.0, 0.0, -1.0, 5e-324}) {
    const std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(1.0) == "1.0");
  CHECK(format_number(-1.0) == "-1.0");
  CHECK(format_number(INFINITY) == "null");
  CHECK(format_number(std::nan("")) == "null");
  CHECK(format_number(2.0 / 3.0) == "0.66666666666666663");
}

TEST_CASE("dump_json is stable and sorted") {
  Json j = {{"zeta", 1.0 / 3.0}, {"alpha", 1}, {"mid", {{"b", true}, {"a", nullptr}}}, {"list", {0.5, 2}}};
  const std::string compact = dump_json(j, -1);
  CHECK(compact == R"({"alpha":1,"list":[0.5,2],"mid":{"a":null,"b":true},"zeta":0.33333333333333331})");
  CHECK(dump_json(parse_json(compact), -1) == compact);
  CHECK(dump_json(Json::object()) == "{}");
  CHECK(error_code_of([] { (void)parse_json("{bad"); }) == ErrorCode::Parse);
}

TEST_CASE("model descriptors round-trip") {
  for (const Model& m : lpocv_test::small_models()) {
    const Json j = model_to_json(m);
    CHECK(model_from_json(j) == m);
    CHECK(model_from_json(parse_json(dump_json(j))) == m);
  }
  CHECK(model_to_json(Model::histogram(4)) == Json::parse(R"({"family":"histogram","params":{"D":4}})"));
  CHECK(model_to_json(Model::piecewise_polynomial(2, 3)) ==
        Json::parse(R"({"family":"piecewise_polynomial","params":{"depth":2,"r":3}})"));
  CHECK(error_code_of([] { (void)model_from_json(Json::parse(R"({"family":"spline","params":{}})")); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { (void)model_from_json(Json::parse(R"({"family":"histogram","params":{"D":-2}})")); }) ==
        ErrorCode::InvalidArgument);
  CHECK(error_code_of([] { (void)model_from_json(Json::parse(R"({"family":"histogram","params":{"D":0}})")); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("densities and experiment configs round-trip") {
  for (const auto& d : {DensitySpec::uniform(), DensitySpec::piecewise_constant({0.5, 1.5}, {0.0, 0.5, 1.0}),
                        DensitySpec::holder_cusp(2.0, 0.5), DensitySpec::trig_smooth({0.1, 0.2}, {0.0, 0.3})}) {
    const Json j = density_to_json(d);
    const DensitySpec back = density_from_json(parse_json(dump_json(j)));
    for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) CHECK(back.pdf(x) == d.pdf(x));
  }
  ExperimentConfig c;
  c.density = DensitySpec::holder_cusp(1.0, 1.0);
  c.collection = CollectionKind::Tp;
  c.collection_params.max_dim = 9;
  c.p_rule = PRule::fixed(3);
  c.n_grid = {100, 1000};
  c.replications = 17;
  c.seed = 123;
  c.compare_loo = false;
  const Json j = experiment_to_json(c);
  const ExperimentConfig back = experiment_from_json(parse_json(dump_json(j)));
  CHECK(dump_json(experiment_to_json(back)) == dump_json(j));
  CHECK(p_rule_from_json(Json("half")).value == 0.5);
  CHECK(p_rule_from_json(Json("loo")).kind == PRule::Kind::Fixed);
  CHECK(p_rule_from_json(Json("auto")).kind == PRule::Kind::Auto);
  CHECK(collection_kind_from_string("pp") == CollectionKind::Pp);
  CHECK(error_code_of([] { (void)collection_kind_from_string("xx"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("result objects carry the schema version") {
  const Sample s({0.1, 0.2, 0.7});
  const Json r = to_json(lpo_risk_closed(Model::histogram(2), s, 2));
  CHECK(r.at("schema_version") == kSchemaVersion);
  CHECK(r.at("n") == 3);
  CHECK(std::abs(r.at("risk").get<double>() - 2.0 / 3.0) < 1e-14);
  const Collection c = make_collection({Model::histogram(1), Model::histogram(2)});
  const Json sel = to_json(select_model(c, s, 2), c);
  CHECK(sel.at("schema_version") == kSchemaVersion);
  CHECK(sel.at("chosen").at("dim") == 1);
  CHECK(sel.at("risks").size() == 2);
}
