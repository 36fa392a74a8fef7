#include <gtest/gtest.h>

#include <random>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/frobenius.hpp"

using namespace frobwdvv;

namespace {

const std::string kSpecDir = FROBWDVV_SPEC_DIR;
const std::vector<std::string> kBundled{"p1", "nls", "p1orb", "a2", "p2", "p1xp1", "ccc_a111", "twodim_family"};

FrobeniusSpec spec(const std::string& name) { return loadSpec(kSpecDir + "/" + name + ".json"); }

std::string failures(const Report& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.pass) s += " " + c.name + " (" + c.detail + ")";
    return s;
}

}  // namespace

class BundledSpec : public ::testing::TestWithParam<std::string> {};

TEST_P(BundledSpec, Associative) {
    auto s = spec(GetParam());
    auto t = buildTensors(s);
    auto r = checkWDVV(s, t);
    EXPECT_TRUE(r.pass()) << failures(r);
}

TEST_P(BundledSpec, EulerHomogeneity) {
    auto s = spec(GetParam());
    auto r = eulerAction(s, buildTensors(s));
    EXPECT_TRUE(r.pass()) << failures(r);
}

TEST_P(BundledSpec, MonodromyDataConsistent) {
    auto s = spec(GetParam());
    auto r = validateSpec(s, buildTensors(s));
    EXPECT_TRUE(r.pass()) << failures(r);
}

TEST_P(BundledSpec, UnityContractsToMetric) {
    auto s = spec(GetParam());
    auto t = buildTensors(s);
    for (std::size_t a = 0; a < s.n(); ++a)
        for (std::size_t b = 0; b < s.n(); ++b) EXPECT_EQ(t.c(a, b, s.unity), ClosedForm(t.eta[a][b]));
}

INSTANTIATE_TEST_SUITE_P(All, BundledSpec, ::testing::ValuesIn(kBundled));

TEST(Spec, MetricsAreAntiDiagonal) {
    for (const auto& name : kBundled) {
        auto s = spec(name);
        auto t = buildTensors(s);
        const std::size_t n = s.n();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) EXPECT_EQ(t.eta[a][b], Rational(a + b == n - 1 ? 1 : 0)) << name;
    }
}

TEST(Spec, P2EulerAndR) {
    auto s = spec("p2");
    auto e = eulerField(s);
    EXPECT_EQ(e[0], ClosedForm::var(0));
    EXPECT_EQ(e[1], ClosedForm(3));
    EXPECT_EQ(e[2], -ClosedForm::var(2));
    auto r = s.rTotal();
    EXPECT_EQ(r[1][0], 3);
    EXPECT_EQ(r[2][1], 3);
    EXPECT_EQ(s.charge, 2);
}

TEST(Spec, P2TruncationHoldsGwTerms) {
    auto s = spec("p2");
    // N_2 = 1: v3^5 e^{2 v2}/5!
    GenMonomial m = GenMonomial::power(2, 5) * GenMonomial::exp(1, 2);
    EXPECT_EQ(s.potential.coeff(m), QRad(rat(1, 120)));
    GenMonomial m4 = GenMonomial::power(2, 11) * GenMonomial::exp(1, 4);
    EXPECT_EQ(s.potential.coeff(m4), QRad(Rational(620) / factorial(11)));
}

TEST(Spec, FamilyParametersOverride) {
    auto s = loadSpec(kSpecDir + "/twodim_family.json", {{"m", 4}, {"c", rat(1, 72)}});
    auto a2 = spec("a2");
    EXPECT_EQ(s.potential, a2.potential);
    EXPECT_EQ(s.charge, a2.charge);
    EXPECT_EQ(s.mu, a2.mu);
}

TEST(Spec, FamilyChargeFormula) {
    for (Rational m : {Rational(4), Rational(5), Rational(-1), rat(3, 2), rat(7, 3)}) {
        auto s = twoDimFamily(m, 1);
        EXPECT_EQ(s.charge, (m - 3) / (m - 1));
        auto t = buildTensors(s);
        EXPECT_TRUE(checkWDVV(s, t).pass());
        EXPECT_TRUE(eulerAction(s, t).pass()) << toString(m) << failures(eulerAction(s, t));
    }
}

TEST(Spec, A2CanonicalCoordinatesAtSpecialPoint) {
    auto s = spec("a2");
    auto u = evaluateMatrix(uMatrix(s, buildTensors(s)), {0.0, 3.0});
    // U = 2 [[0,1],[1,0]] so u = -2, 2
    EXPECT_NEAR(std::abs(u[0][0]), 0.0, 1e-14);
    EXPECT_NEAR(u[0][1].real(), 2.0, 1e-14);
    EXPECT_NEAR(u[1][0].real(), 2.0, 1e-14);
    EXPECT_NEAR(std::abs(u[1][1]), 0.0, 1e-14);
}

TEST(Spec, BrokenPotentialFailsAssociativity) {
    // perturbing the quartic of the orbifold example breaks associativity
    auto s = spec("p1orb");
    s.potential += ClosedForm::power(1, 4) * QRad(rat(1, 7));
    EXPECT_FALSE(checkWDVV(s, buildTensors(s)).pass());
}

TEST(Spec, RandomQuarticsRespectAssociativityExactlyWhenExpected) {
    // F = v1^2 v2/2 + c v2^4 is associative for every c; a mixed term v1 v2^3 breaks the metric
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-20, 20);
    for (int i = 0; i < 5; ++i) {
        Rational c = rat(d(rng), 1 + std::abs(d(rng)));
        if (c == 0) continue;
        auto s = twoDimFamily(4, c);
        EXPECT_TRUE(checkWDVV(s, buildTensors(s)).pass());
        auto bad = s;
        bad.potential += ClosedForm::var(0).pow(2) * ClosedForm::var(1).pow(2) * QRad(c);
        EXPECT_THROW(buildTensors(bad), NonConstantMetricError);
    }
}

TEST(Spec, SingularMetricRejected) {
    auto s = twoDimFamily(4, 1);
    s.potential = ClosedForm::var(0).pow(3) * QRad(rat(1, 6)) + ClosedForm::var(1).pow(4);
    EXPECT_THROW(buildTensors(s), SingularMetricError);
}

TEST(Spec, ParseErrors) {
    EXPECT_THROW(parseSpec(nlohmann::json::parse(R"({"variables": []})")), SpecParseError);
    EXPECT_THROW(parseSpec(nlohmann::json::parse(R"({"variables": ["x"], "unity_index": 2})")), SpecParseError);
    EXPECT_THROW(parseSpec(nlohmann::json::parse(R"({"family": "other"})")), SpecParseError);
    EXPECT_THROW(loadSpec(kSpecDir + "/missing.json"), std::exception);
}

TEST(Spec, ValidationCatchesWrongMu) {
    auto s = spec("p1");
    s.mu = {rat(-1, 2), rat(1, 3)};
    EXPECT_FALSE(validateSpec(s, buildTensors(s)).pass());
}
