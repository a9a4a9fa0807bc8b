#include "support.hpp"

#include <umbrella/io.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace umbrella;
using test_support::P2;
using test_support::random_poly;
using test_support::random_rational;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(PolyJson, MatchesTheDocumentedShape) {
    const Poly p = P2({{{3, 0}, -3}, {{1, 1}, Rational(1, 2)}}).with_names({"t", "s"});
    const Json j = poly_to_json(p);
    EXPECT_EQ(j.dump(), R"({"vars":["t","s"],"terms":[{"exp":[1,1],"coef":"1/2"},{"exp":[3,0],"coef":"-3"}],"text":"1/2 t s - 3t^3"})");
}

TEST(PolyJson, RoundTripsRandomPolynomials) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const Poly p = random_poly(rng, 1 + trial % 4, 6, 8);
        const Json j = Json::parse(poly_to_json(p).dump());
        EXPECT_EQ(poly_from_json<Rational>(j), p);
    }
}

TEST(PolyJson, ComplexCoefficients) {
    CPoly p(2, {"z", "w"});
    p.add_term({2, 0}, Complex(1, -1));
    p.add_term({0, 2}, Complex(Rational(0), Rational(3, 4)));
    const Json j = poly_to_json(p, false);
    EXPECT_EQ(j["terms"][1]["coef"].dump(), R"({"re":"0","im":"3/4"})");
    EXPECT_EQ(poly_from_json<Complex>(j), p);
    // plain strings are real coefficients
    const auto q = poly_from_json<Complex>(Json::parse(R"({"vars":["z"],"terms":[{"exp":[2],"coef":"2"}]})"));
    EXPECT_EQ(q.coefficient({2}), Complex(2));
}

TEST(PolyJson, ReportsSchemaPaths) {
    EXPECT_NE(error_of([] { poly_from_json<Rational>(Json::parse(R"({"vars":["t"],"terms":[{"exp":[1],"coef":"x"}]})")); })
                  .find("$.terms[0].coef"),
              std::string::npos);
    EXPECT_NE(error_of([] { poly_from_json<Rational>(Json::parse(R"({"vars":["t","s"],"terms":[{"exp":[1],"coef":"1"}]})")); })
                  .find("$.terms[0].exp"),
              std::string::npos);
    EXPECT_NE(error_of([] { poly_from_json<Rational>(Json::parse(R"({"terms":[]})")); }).find("\"vars\""),
              std::string::npos);
    EXPECT_NE(error_of([] { poly_from_json<Rational>(Json::parse(R"({"vars":["t"],"terms":[{"exp":[1],"coef":2.5}]})")); })
                  .find("$.terms[0].coef"),
              std::string::npos);
}

TEST(Json, MalformedTextReportsByteOffset) {
    const std::string msg = error_of([] { parse_json_text(R"({"vars": ["t"], })", "field.json"); });
    EXPECT_NE(msg.find("field.json"), std::string::npos);
    EXPECT_NE(msg.find("byte 17"), std::string::npos) << msg;
}

TEST(Json, MissingFile) {
    EXPECT_NE(error_of([] { read_json_file("/nonexistent/x.json"); }).find("cannot open"), std::string::npos);
}

TEST(MapJson, RoundTripsHenonMaps) {
    HenonSpec spec;
    spec.V = P2({{{2, 1}, 1}, {{0, 3}, Rational(-1, 3)}}).with_names({"y1", "y2"});
    spec.eta = {Rational(1, 2), Rational(0)};
    spec.N = 2;
    const PolyMap h = henon_map(spec);
    EXPECT_EQ(polymap_from_json(Json::parse(polymap_to_json(h).dump())), h);
    const HenonSpec back = henon_from_json(Json::parse(henon_to_json(spec).dump()));
    EXPECT_EQ(back.V, spec.V);
    EXPECT_EQ(back.eta, spec.eta);
    EXPECT_EQ(back.N, 2u);
}

TEST(MapJson, RejectsDimensionMismatch) {
    const Json j = Json::parse(R"({"source_dim":2,"target_dim":1,"components":[{"vars":["a"],"terms":[]}]})");
    EXPECT_NE(error_of([&] { polymap_from_json(j); }).find("$.components[0]"), std::string::npos);
    const Json h = Json::parse(R"({"V":{"vars":["a","b"],"terms":[]},"eta":["0","0"],"N":0})");
    EXPECT_NE(error_of([&] { henon_from_json(h); }).find("$.N"), std::string::npos);
}

TEST(MatrixJson, RowMajorStrings) {
    const RatMatrix m = matrix_from_json(Json::parse(R"([["0","-2"],["2","1/3"]])"));
    EXPECT_EQ(m(0, 1), -2);
    EXPECT_EQ(m(1, 1), Rational(1, 3));
    EXPECT_EQ(matrix_to_json(m).dump(), R"([["0","-2"],["2","1/3"]])");
    EXPECT_EQ(matrix_from_json(Json::parse(R"({"matrix":[["1"]]})"))(0, 0), 1);
    EXPECT_NE(error_of([] { matrix_from_json(Json::parse(R"([["1","2"],["3"]])")); }).find("$[1]"), std::string::npos);
}

TEST(JordanJson, RoundTrip) {
    const RealJordanSpec spec{{RealBlock{Rational(-3, 2), 2}, ComplexBlock{0, Rational(1, 2), 1}}};
    const RealJordanSpec back = jordan_from_json(Json::parse(jordan_to_json(spec).dump()));
    EXPECT_EQ(back.to_matrix(), spec.to_matrix());
    EXPECT_NE(error_of([] { jordan_from_json(Json::parse(R"({"blocks":[{"type":"odd"}]})")); }).find("$.blocks[0].type"),
              std::string::npos);
    EXPECT_NE(error_of([] { jordan_from_json(Json::parse(R"({"blocks":[{"type":"complex","s":"1","t":"0","pairs":1}]})")); })
                  .find("t != 0"),
              std::string::npos);
}

TEST(FieldJson, RoundTripAndValidation) {
    const VectorField2 x{P2({{{3, 0}, -3}, {{1, 2}, -1}}), P2({{{0, 3}, 1}})};
    EXPECT_EQ(field_from_json(Json::parse(field_to_json(x).dump())), x);
    const Json bad = Json::parse(R"({"alpha":{"vars":["t","s"],"terms":[{"exp":[0,0],"coef":"1"}]},
                                     "beta":{"vars":["t","s"],"terms":[]}})");
    EXPECT_NE(error_of([&] { field_from_json(bad); }).find("vanish"), std::string::npos);
}

TEST(CurveJson, CoefficientListsBuildHolomorphicCurves) {
    const PolyMap h = curve_from_json(Json::parse(R"({"coefficients":[["0","1"],[]]})"));
    EXPECT_TRUE(is_holomorphic_curve(h));
    EXPECT_EQ(h.target_dim(), 4u);
    EXPECT_EQ(h[0], Poly::variable(2, 0, {"xi", "eta"}));
    EXPECT_EQ(h[2], Poly::variable(2, 1, {"xi", "eta"}));
}
