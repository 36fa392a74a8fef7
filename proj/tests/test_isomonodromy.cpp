#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "frobwdvv/errors.hpp"
#include "frobwdvv/isomonodromy.hpp"

using namespace frobwdvv;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1(0.0, 1.0);

FrobeniusSpec spec(const std::string& name) { return loadSpec(std::string(FROBWDVV_SPEC_DIR) + "/" + name + ".json"); }

double maxAbs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

std::string failing(const Report& r) {
    std::string s;
    for (const auto& c : r.checks)
        if (!c.pass) s += c.name + " (" + std::to_string(c.maxResidual) + ") ";
    return s;
}

CMat mat2(cplx a, cplx b, cplx c, cplx d) {
    CMat m(2, 2);
    m << a, b, c, d;
    return m;
}

CMat diag2(int a, int b) { return mat2(a, 0, 0, b); }

const AdmissibleLine kLine{3 * kPi / 4, 0.05};

/// Displayed A2 connection matrix, theta = e^{2 pi i / 3} with theta^{k/2} = e^{k pi i / 3}.
CMat a2DisplayedC() {
    const double th = 2 * kPi / 3;
    const cplx pre = -I1 / std::sqrt(2 * kPi);
    const double g23 = std::tgamma(2.0 / 3), g13 = std::tgamma(1.0 / 3);
    return pre * mat2(g23, g23 * std::polar(1.0, 2.5 * th), g13 * std::polar(1.0, 1.5 * th), g13 * std::polar(1.0, 2 * th));
}

MonodromyData p1Exact() {
    MonodromyData md;
    md.eta = mat2(0, 1, 1, 0);
    md.mu = mat2(-0.5, 0, 0, 0.5);
    md.R = mat2(0, 0, 2, 0);
    md.S = mat2(1, 2, 0, 1);
    md.C = CMat::Identity(2, 2);
    return md;
}

}  // namespace

TEST(Semisimple, A2CanonicalCoordinates) {
    const SemisimplePoint ss = semisimpleAt(spec("a2"), {0.0, 3.0});
    EXPECT_NEAR(std::abs(ss.u[0] - cplx(-2)), 0, 1e-12);
    EXPECT_NEAR(std::abs(ss.u[1] - cplx(2)), 0, 1e-12);
    EXPECT_LT(maxAbs(ss.V + ss.V.transpose()), 1e-12);
    const Report r = checkSemisimple(ss);
    EXPECT_TRUE(r.pass()) << failing(r);
}

TEST(Semisimple, P1CanonicalCoordinates) {
    // U = [[0, 2], [2, 0]] at the origin
    const SemisimplePoint ss = semisimpleAt(spec("p1"), {0.0, 0.0});
    EXPECT_NEAR(std::abs(ss.u[0] - cplx(-2)), 0, 1e-12);
    EXPECT_NEAR(std::abs(ss.u[1] - cplx(2)), 0, 1e-12);
    EXPECT_TRUE(checkSemisimple(ss).pass());
}

TEST(Semisimple, InvariantsAtScatteredPoints) {
    const auto a2 = spec("a2"), p1 = spec("p1"), p2 = spec("p2");
    for (double s : {-1.3, 0.2, 0.7, 2.1}) {
        EXPECT_TRUE(checkSemisimple(semisimpleAt(a2, {s, 3.0 + s})).pass()) << s;
        EXPECT_TRUE(checkSemisimple(semisimpleAt(p1, {s, 0.5 * s})).pass()) << s;
        EXPECT_TRUE(checkSemisimple(semisimpleAt(p2, {0.1 * s, 0.3 - s, 0.2 * s})).pass()) << s;
    }
}

TEST(Semisimple, RepeatedEigenvaluesThrow) {
    EXPECT_THROW(semisimpleFrom(CMat::Identity(2, 2), mat2(0, 1, 1, 0), {-0.5, 0.5}, 0), NonSemisimpleError);
}

TEST(Semisimple, SignFlipConjugatesFrame) {
    const auto a2 = spec("a2");
    const SemisimplePoint s0 = semisimpleAt(a2, {0.0, 3.0});
    const SemisimplePoint s1 = semisimpleAt(a2, {0.0, 3.0}, {1, -1});
    const CMat D = diag2(1, -1);
    EXPECT_LT(maxAbs(s1.Psi - D * s0.Psi), 1e-15);
    EXPECT_LT(maxAbs(s1.V - D * s0.V * D), 1e-15);
}

TEST(PhiRecursion, LeadingTermAndOrthogonality) {
    for (const auto& [name, pt] : std::vector<std::pair<std::string, std::vector<cplx>>>{
             {"a2", {0.0, 3.0}}, {"p1", {0.0, 0.0}}, {"p2", {0.3, 0.2, -0.1}}}) {
        const SemisimplePoint ss = semisimpleAt(spec(name), pt);
        const auto phi = phiRecursion(ss, 8);
        ASSERT_EQ(phi.size(), 9u);
        EXPECT_LT(maxAbs(phi[0] - CMat::Identity(ss.n(), ss.n())), 1e-15) << name;
        EXPECT_LT(phiOrthogonalityResidual(phi), 1e-10) << name;
    }
}

TEST(PhiRecursion, SolvesTheOdeOrderByOrder) {
    // Phi(z) e^{zU} solves dY/dz = (U + V/z) Y iff [U, Phi_{k+1}] = -(V + k) Phi_k for every k
    for (const auto& [name, pt] : std::vector<std::pair<std::string, std::vector<cplx>>>{
             {"a2", {0.0, 3.0}}, {"p2", {0.3, 0.2, -0.1}}}) {
        const SemisimplePoint ss = semisimpleAt(spec(name), pt);
        const CMat U = ss.u.asDiagonal();
        const auto phi = phiRecursion(ss, 8);
        for (int k = 0; k < 8; ++k) {
            const CMat lhs = U * phi[k + 1] - phi[k + 1] * U;
            const CMat rhs = -(ss.V + double(k) * CMat::Identity(ss.n(), ss.n())) * phi[k];
            EXPECT_LT(maxAbs(lhs - rhs), 1e-10 * std::max(1.0, maxAbs(rhs))) << name << " k=" << k;
        }
    }
}

TEST(PhiRecursion, FirstCorrectionA2) {
    const SemisimplePoint ss = semisimpleAt(spec("a2"), {0.0, 3.0});
    const auto phi = phiRecursion(ss, 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (i != j) EXPECT_LT(std::abs(phi[1](i, j) - ss.V(i, j) / (ss.u[j] - ss.u[i])), 1e-14);
        }
}

TEST(Stokes, A2MatchesDisplayedData) {
    const auto a2 = spec("a2");
    const SemisimplePoint ss = semisimpleAt(a2, {0.0, 3.0}, {1, -1});
    const MonodromyData md = stokesAndConnection(a2, ss, kLine);
    EXPECT_LT(maxAbs(md.S - mat2(1, 0, -1, 1)), 1e-6);
    EXPECT_LT(maxAbs(md.C - a2DisplayedC()), 1e-6);
    EXPECT_LT(maxAbs(md.R), 1e-15);
    EXPECT_LT(md.residual, 1e-6);
    EXPECT_LT(md.piMinusResidual, 1e-6);
    const Report r = monodromyIdentities(md);
    EXPECT_TRUE(r.pass()) << failing(r);
    EXPECT_EQ(md.conventions["signs"], nlohmann::json({1, -1}));
}

TEST(Stokes, SignFlipConjugatesMonodromy) {
    const auto a2 = spec("a2");
    const MonodromyData m0 = stokesAndConnection(a2, semisimpleAt(a2, {0.0, 3.0}), kLine);
    const MonodromyData m1 = stokesAndConnection(a2, semisimpleAt(a2, {0.0, 3.0}, {1, -1}), kLine);
    const CMat D = diag2(1, -1);
    EXPECT_LT(maxAbs(m1.S - D * m0.S * D), 1e-8);
    EXPECT_LT(maxAbs(m1.C - m0.C * D), 1e-8);
}

TEST(Stokes, P1Invariant) {
    const auto p1 = spec("p1");
    const MonodromyData md = stokesAndConnection(p1, semisimpleAt(p1, {0.0, 0.0}), kLine);
    EXPECT_LT(std::abs(stokesInvariant2(md.S) - 4.0), 1e-6);
    EXPECT_LT(std::abs(stokesInvariant2(mat2(1, 2, 0, 1)) - 4.0), 1e-15);
    const Report r = monodromyIdentities(md);
    EXPECT_TRUE(r.pass()) << failing(r);
    EXPECT_LT(md.piMinusResidual, 1e-6);
}

TEST(Stokes, P1ExactDataConjugacy) {
    // S^T S^{-1} for S = [[1, 2], [0, 1]] is a Jordan block at -1, as is e^{2 pi i mu} e^{2 pi i R} = -(I + 2 pi i R);
    // the matrix exponential of 2 pi i (mu + R) is -I, which no Jordan block is conjugate to.
    const MonodromyData md = p1Exact();
    const CMat X = md.S.transpose() * md.S.inverse();
    const CMat M0 = -(CMat::Identity(2, 2) + 2 * kPi * I1 * md.R);
    EXPECT_LT(std::abs(X.trace() - M0.trace()), 1e-14);
    EXPECT_LT(std::abs(X.determinant() - M0.determinant()), 1e-14);
    EXPECT_GT(maxAbs(X + CMat::Identity(2, 2)), 1.0);
    EXPECT_GT(maxAbs(M0 + CMat::Identity(2, 2)), 1.0);
    const CMat literal = (2 * kPi * I1 * (md.mu + md.R)).exp();
    EXPECT_LT(maxAbs(literal + CMat::Identity(2, 2)), 1e-12);
}

TEST(Stokes, LegendreTransformReproducesA2Data) {
    const auto a2 = spec("a2");
    const auto hs = fixtures::s2OfA2();
    const SemisimplePoint m = semisimpleAt(a2, {0.0, 3.0}, {1, -1});
    const SemisimplePoint h = hatSemisimpleAt(m, a2, hs, 1);
    EXPECT_NEAR(h.v[0].real(), 1.5, 1e-14);
    EXPECT_NEAR(std::abs(h.v[1]), 0.0, 1e-14);
    const MonodromyData mm = stokesAndConnection(a2, m, kLine);
    const MonodromyData mh = stokesAndConnection(hs, h, kLine);
    EXPECT_LT(maxAbs(mh.S - mm.S), 1e-6);
    EXPECT_LT(maxAbs(mh.C - mm.C), 1e-6);
    EXPECT_TRUE(monodromyIdentities(mh).pass());
}

TEST(Stokes, NonAdmissibleLineThrows) {
    const auto a2 = spec("a2");
    const SemisimplePoint ss = semisimpleAt(a2, {0.0, 3.0});
    EXPECT_FALSE(isAdmissible({kPi / 2, 0.05}, ss.u));
    EXPECT_TRUE(isAdmissible(kLine, ss.u));
    EXPECT_THROW(stokesAndConnection(a2, ss, {kPi / 2, 0.05}), MatchingError);
}

TEST(MonodromyIdentities, ToyWithTrivialStokes) {
    // R = 0, S = I: C C^T = e^{-pi i mu} eta^{-1}, and mu integral
    MonodromyData md;
    md.eta = mat2(0, 1, 1, 0);
    md.mu = diag2(-1, 1);
    md.R = CMat::Zero(2, 2);
    md.S = CMat::Identity(2, 2);
    md.C = I1 * mat2(1, I1, 1, -I1) / std::sqrt(2.0);
    EXPECT_TRUE(monodromyIdentities(md).pass()) << failing(monodromyIdentities(md));
    md.S(1, 0) = 0.1;
    EXPECT_FALSE(monodromyIdentities(md).pass());
}

TEST(Tensor, P1xP1DisplayedData) {
    const MonodromyData t = tensorMonodromy(p1Exact(), p1Exact());
    CMat mu = CMat::Zero(4, 4), R(4, 4), S(4, 4);
    mu.diagonal() << -1, 0, 0, 1;
    R << 0, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 0, 2, 2, 0;
    S << 1, 2, 2, 4, 0, 1, 0, 2, 0, 0, 1, 2, 0, 0, 0, 1;
    EXPECT_EQ(maxAbs(t.mu - mu), 0.0);
    EXPECT_EQ(maxAbs(t.R - R), 0.0);
    EXPECT_EQ(maxAbs(t.S - S), 0.0);
    EXPECT_EQ(t.marked, 0);
}

TEST(Tensor, IdentitiesSurviveKroneckerProducts) {
    const auto a2 = spec("a2"), p1 = spec("p1");
    const MonodromyData ma = stokesAndConnection(a2, semisimpleAt(a2, {0.0, 3.0}), kLine);
    const MonodromyData mp = stokesAndConnection(p1, semisimpleAt(p1, {0.0, 0.0}), kLine);
    for (const auto& t : {tensorMonodromy(ma, ma), tensorMonodromy(ma, mp), tensorMonodromy(mp, mp)}) {
        const Report r = monodromyIdentities(t);
        EXPECT_TRUE(r.pass()) << failing(r);
    }
}

TEST(LegendreFrame, SeriesTransform) {
    const auto p1 = spec("p1"), a2 = spec("a2");
    for (const auto& pt : std::vector<std::vector<Rational>>{{0, 0}, {rat(1, 2), 0}, {rat(-3, 2), 0}}) {
        const Report r = verifyLegendreFrameInvariance(p1, 1, pt);
        EXPECT_TRUE(r.pass()) << failing(r);
    }
    const Report r = verifyLegendreFrameInvariance(a2, 1, {Rational(0), Rational(3)});
    EXPECT_TRUE(r.pass()) << failing(r);
}

TEST(LegendreFrame, AgainstStandaloneHatSpecs) {
    const auto p1 = spec("p1"), a2 = spec("a2");
    for (double s : {0.0, 0.4, -0.7}) {
        const Report r1 = verifyLegendreFrameInvariance(p1, spec("nls"), 1, {s, 0.3 * s});
        EXPECT_TRUE(r1.pass()) << failing(r1);
        const Report r2 = verifyLegendreFrameInvariance(a2, fixtures::s2OfA2(), 1, {s, 3.0 - s});
        EXPECT_TRUE(r2.pass()) << failing(r2);
    }
    EXPECT_THROW(verifyLegendreFrameInvariance(a2, fixtures::s2OfA2(), 0, {0.0, 3.0}), SpecValidationError);
}

TEST(LegendreFrame, UnityDirectionIsTrivial) {
    const Report r = verifyLegendreFrameInvariance(spec("a2"), 0, {Rational(0), Rational(3)});
    EXPECT_TRUE(r.pass()) << failing(r);
    EXPECT_EQ(r.data["hat_point"], nlohmann::json({0.0, 3.0}));
}

TEST(Hamiltonians, ClosednessAndEquations) {
    for (const auto& [name, pt] : std::vector<std::pair<std::string, std::vector<cplx>>>{
             {"a2", {0.0, 3.0}}, {"p1", {0.0, 0.0}}, {"p2", {0.0, 0.0, 0.0}}, {"p2", {0.3, 0.2, -0.1}}}) {
        const Report r = hamiltoniansAndClosedness(spec(name), pt, 1e-4, 1e-6);
        EXPECT_TRUE(r.pass()) << name << ": " << failing(r);
    }
}

TEST(Hamiltonians, TwoByTwoFormula) {
    const CMat V = mat2(0, 0.3, -0.3, 0);
    Eigen::VectorXcd u(2);
    u << -1.0, 2.0;
    const Eigen::VectorXcd H = hamiltonians(V, u);
    EXPECT_NEAR(std::abs(H[0] - 0.5 * 0.09 / -3.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(H[1] - 0.5 * 0.09 / 3.0), 0.0, 1e-15);
}

TEST(Hamiltonians, OneDimensionalIsZero) {
    const Report r = hamiltoniansAndClosedness(fixtures::trivial1(), {0.5});
    EXPECT_TRUE(r.pass()) << failing(r);
    EXPECT_EQ(r.data["H"], nlohmann::json::array({{0.0, 0.0}}));
}

TEST(Report, MonodromyJsonCarriesConventions) {
    const auto a2 = spec("a2");
    const MonodromyData md = stokesAndConnection(a2, semisimpleAt(a2, {0.0, 3.0}), kLine);
    const auto j = monodromyJson(md);
    for (const char* k : {"phi", "ordering", "u", "signs", "branch"}) EXPECT_TRUE(j["conventions"].contains(k)) << k;
    EXPECT_EQ(j["S"].size(), 2u);
    EXPECT_EQ(j["marked"], 1);
}
