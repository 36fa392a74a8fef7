#include <gtest/gtest.h>

#include <random>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/io.hpp"
#include "frobwdvv/symfun.hpp"

using namespace frobwdvv;

namespace {

ClosedForm v(int i) { return ClosedForm::var(i); }
Rational q(long a, long b = 1) { return rat(a, b); }

// Small random ClosedForm in 2 variables mixing every factor type.
ClosedForm randomForm(std::mt19937& rng) {
    std::uniform_int_distribution<int> nt(1, 3), c(-3, 3), p(-2, 3), lg(0, 1), ex(-1, 1), half(0, 1);
    ClosedForm f;
    int terms = nt(rng);
    for (int t = 0; t < terms; ++t) {
        GenMonomial m;
        for (int var = 0; var < 2; ++var) {
            Rational e = Rational(p(rng)) + (half(rng) ? Rational(1, 2) : Rational(0));
            m.setPower(var, e);
            m.setLog(var, lg(rng));
            m.setExp(var, Rational(ex(rng)));
        }
        int cc = c(rng);
        f.addTerm(m, QRad(Rational(cc == 0 ? 1 : cc)));
    }
    return f;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parseRational("6/4"), q(3, 2));
    EXPECT_EQ(parseRational("-7"), q(-7));
    EXPECT_EQ(toString(q(-3, 6)), "-1/2");
    EXPECT_THROW(parseRational("1/0"), SpecParseError);
    EXPECT_THROW(parseRational("x"), SpecParseError);
}

TEST(QRad, RadicalArithmetic) {
    QRad s2 = QRad::sqrt(2), s3 = QRad::sqrt(3), s6 = QRad::sqrt(6);
    EXPECT_EQ(s2 * s3, s6);
    EXPECT_EQ(s2 * s2, QRad(2L));
    EXPECT_EQ(QRad::sqrt(Rational(2, 3)), s6 * QRad(Rational(1, 3)));
    EXPECT_EQ(QRad::sqrt(12), QRad(2L) * s3);
    QRad x = QRad(1L) + s2 + s3;
    EXPECT_EQ(x * x.inverse(), QRad(1L));
    EXPECT_EQ(QRad(Rational(3, 2)).pow(Rational(5, 2)),
              QRad(Rational(9, 4)) * QRad::sqrt(Rational(3, 2)));
    EXPECT_NEAR(x.toDouble(), 1 + std::sqrt(2.0) + std::sqrt(3.0), 1e-14);
    EXPECT_THROW(QRad(2L).pow(Rational(1, 3)), NotRepresentableError);
}

TEST(SymFun, DifferentiateBundledPotentials) {
    // d/dv2 (1/2 v1^2 v2 + e^{v2})
    ClosedForm f = ClosedForm(q(1, 2)) * v(0).pow(2) * v(1) + ClosedForm::expOf(1);
    EXPECT_EQ(differentiate(f, 1), ClosedForm(q(1, 2)) * v(0).pow(2) + ClosedForm::expOf(1));
    // d/dv (1/2 v^2 log v) = v log v + v/2
    ClosedForm g = ClosedForm(q(1, 2)) * v(0).pow(2) * ClosedForm::logOf(0);
    EXPECT_EQ(differentiate(g, 0), v(0) * ClosedForm::logOf(0) + ClosedForm(q(1, 2)) * v(0));
    // d/du c u^{5/2}
    ClosedForm h = ClosedForm(q(7)) * ClosedForm::power(0, q(5, 2));
    EXPECT_EQ(differentiate(h, 0), ClosedForm(q(35, 2)) * ClosedForm::power(0, q(3, 2)));
}

TEST(SymFun, EvaluateBranches) {
    using cd = std::complex<double>;
    ClosedForm a2 = ClosedForm(q(1, 72)) * v(1).pow(4);
    EXPECT_NEAR(evaluate(a2, {cd(0), cd(3)}).real(), 1.125, 1e-15);
    EXPECT_NEAR(std::abs(evaluate(ClosedForm::expOf(1), {cd(0), cd(0)}) - 1.0), 0.0, 1e-15);
    cd l = evaluate(ClosedForm::logOf(0), {cd(-1)});
    EXPECT_NEAR(l.real(), 0.0, 1e-15);
    EXPECT_NEAR(l.imag(), M_PI, 1e-15);
    EXPECT_THROW(evaluate(ClosedForm::logOf(0), {cd(0)}), BranchPointError);
    EXPECT_THROW(evaluate(ClosedForm::power(0, q(1, 2)), {cd(0)}), BranchPointError);
}

TEST(SymFun, EqualModQuadratic) {
    ClosedForm f = ClosedForm(q(1, 2)) * v(0).pow(2) * v(1) + ClosedForm::expOf(1);
    EXPECT_TRUE(equalModQuadratic(f, f + v(0) * v(1) + ClosedForm(7), 2));
    EXPECT_FALSE(equalModQuadratic(f, f + v(0).pow(3), 2));
    ClosedForm nls = ClosedForm(q(1, 2)) * v(1).pow(2) * v(0) +
                     ClosedForm(q(1, 2)) * v(0).pow(2) * ClosedForm::logOf(0);
    EXPECT_TRUE(equalModQuadratic(nls, nls - ClosedForm(q(3, 4)) * v(0).pow(2), 2));
}

TEST(SymFun, RingLawsProperty) {
    std::mt19937 rng(7);
    for (int it = 0; it < 60; ++it) {
        ClosedForm a = randomForm(rng), b = randomForm(rng), c = randomForm(rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_TRUE((a - a).isZero());
        EXPECT_EQ(differentiate(differentiate(a, 0), 1), differentiate(differentiate(a, 1), 0));
        // Leibniz
        EXPECT_EQ(differentiate(a * b, 0), differentiate(a, 0) * b + a * differentiate(b, 0));
    }
}

TEST(SymFun, DerivativeMatchesFiniteDifference) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (int it = 0; it < 40; ++it) {
        ClosedForm a = randomForm(rng);
        std::vector<std::complex<double>> p{u(rng), u(rng)};
        const double h = 1e-5;
        for (int var = 0; var < 2; ++var) {
            auto pp = p, pm = p;
            pp[var] += h;
            pm[var] -= h;
            auto fd = (evaluate(a, pp) - evaluate(a, pm)) / (2 * h);
            auto ex = evaluate(differentiate(a, var), p);
            EXPECT_LE(std::abs(fd - ex), 1e-6 * std::max(1.0, std::abs(ex)));
        }
    }
}

TEST(SymFun, IntegrateInvertsDifferentiate) {
    std::vector<ClosedForm> cases = {
        v(0).pow(3) * ClosedForm::expOf(0, q(2)),
        ClosedForm::power(0, q(-1)) * ClosedForm::logOf(0),
        ClosedForm::power(0, q(5, 2)) * ClosedForm::logOf(0).pow(2) * ClosedForm::expOf(1),
        ClosedForm::power(0, q(-1)),
    };
    for (const auto& f : cases) EXPECT_EQ(differentiate(integrate(f, 0), 0), f);
    EXPECT_THROW(integrate(ClosedForm::power(0, q(1, 2)) * ClosedForm::expOf(0), 0), IntegrationError);
}

TEST(SymFun, Substitute) {
    // e^{v2} F with v2 = log w1  ->  w1
    ClosedForm f = ClosedForm::expOf(1) * v(0);
    ClosedForm r = substitute(f, {v(1), ClosedForm::logOf(0)});
    EXPECT_EQ(r, v(0) * v(1));
    // (v2)^4 with v2 = sqrt(6) w^{1/2} -> 36 w^2
    ClosedForm g = v(1).pow(4);
    ClosedForm s = substitute(g, {v(1), ClosedForm(GenMonomial::power(0, q(1, 2)), QRad::sqrt(6))});
    EXPECT_EQ(s, ClosedForm(q(36)) * v(0).pow(2));
    EXPECT_THROW(substitute(ClosedForm::logOf(0), {v(0) + v(1)}), SubstitutionError);
}

TEST(SymFun, JsonRoundTrip) {
    std::vector<std::string> names{"v1", "v2"};
    ClosedForm f = ClosedForm(QRad::sqrt(6) * QRad(Rational(4, 15))) * ClosedForm::power(0, q(5, 2)) +
                   ClosedForm(q(1, 2)) * v(1).pow(2) * v(0) + ClosedForm::expOf(1, q(-2)) * ClosedForm::logOf(0);
    auto j = closedFormToJson(f, names);
    EXPECT_EQ(closedFormFromJson(j, names), f);
}
