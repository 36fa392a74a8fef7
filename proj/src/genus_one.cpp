#include "frobwdvv/genus_one.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

namespace {

constexpr int kJetOrder = 3;

JetPoly base(const ClosedForm& c) { return JetPoly::constant(2, kJetOrder, c); }
JetPoly jet1(int a) { return JetPoly::jet(2, kJetOrder, a, 1); }

/// 1/24 log(x1^2 - coef * y1^2)
std::pair<Rational, JetPoly> quadraticLog(int x, int y, const ClosedForm& coef) {
    return {rat(1, 24), jet1(x).pow(2) - jet1(y).pow(2) * coef};
}

}  // namespace

std::vector<ClosedForm> hatCoordinateMap(const FrobeniusSpec& spec, const Tensors& t, int kappa) {
    const std::size_t n = spec.n();
    std::vector<ClosedForm> map(n);
    const ClosedForm dk = differentiate(spec.potential, kappa);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (t.etaInv[a][b] != 0)
                map[a] += ClosedForm(t.etaInv[a][b]) * differentiate(dk, static_cast<int>(b));
    return map;
}

GenusOneCase genusOneCase(const FrobeniusSpec& spec, int kappa) {
    if (spec.n() != 2 || spec.unity != 0 || kappa != 1)
        throw MatchingError("genus-one identity is implemented for two-dimensional F = v^2 u/2 + f(u), kappa = 2");
    const ClosedForm f = spec.potential - ClosedForm(rat(1, 2)) * ClosedForm::var(0).pow(2) * ClosedForm::var(1);
    if (f.size() != 1) throw MatchingError("potential is not of the form v^2 u/2 + f(u)");
    const auto& [mono, coef] = *f.terms().begin();
    if (!coef.isRational()) throw MatchingError("irrational coefficient in f(u)");
    const Rational c = coef.toRational();

    GenusOneCase out;
    out.name = spec.name;
    out.spec = spec;
    out.kappa = kappa;
    out.hatMap = hatCoordinateMap(spec, buildTensors(spec), kappa);
    out.fM.rest = base(ClosedForm());
    out.fHat.rest = base(ClosedForm());
    const ClosedForm u = ClosedForm::var(1);

    if (mono.powers.empty() && mono.logs.empty() && mono.exps.size() == 1 && mono.exps[0].first == 1 &&
        mono.exps[0].second == 1) {
        if (c != 1) throw MatchingError("exponential case needs f(u) = e^u");
        // f''' = e^u; rho = e^u, phi = v
        out.fM.logs.push_back(quadraticLog(0, 1, ClosedForm::expOf(1)));
        out.fM.rest = base(ClosedForm(rat(-1, 24)) * u);
        out.fHat.logs.push_back(quadraticLog(1, 0, ClosedForm::power(0, -1)));
        out.fHat.logs.emplace_back(rat(-1, 12), base(ClosedForm::var(0)));
        return out;
    }
    if (mono.exps.empty() && mono.logs.empty() && mono.powers.size() == 1 && mono.powers[0].first == 1) {
        const Rational m = mono.powers[0].second;
        if (m == 0 || m == 1 || m == 2) throw MatchingError("power family needs m != 0, 1, 2");
        out.m = m;
        const Rational f3 = c * m * (m - 1) * (m - 2);
        out.fM.logs.push_back(quadraticLog(0, 1, ClosedForm(f3) * ClosedForm::power(1, m - 3)));
        const Rational logU = -(m - 3) * (m - 4) / (24 * (m - 1));
        if (logU != 0) out.fM.logs.emplace_back(logU, base(u));

        QRad k;
        try {
            k = QRad(c * m * (m - 1)).pow(-1 / (m - 2)) / QRad(m - 2);
        } catch (const NotRepresentableError&) {
            throw NotRepresentableError("(c m (m-1))^(-1/(m-2)) is not representable for m = " + m.get_str() +
                                        ", c = " + c.get_str() + "; pick c with c m (m-1) a perfect power");
        }
        out.fHat.logs.push_back(quadraticLog(1, 0, ClosedForm(k) * ClosedForm::power(0, -(m - 3) / (m - 2))));
        const Rational logRho = -(m - 3) * (2 * m - 5) / (24 * (m - 1) * (m - 2));
        if (logRho != 0) out.fHat.logs.emplace_back(logRho, base(ClosedForm::var(0)));
        return out;
    }
    throw MatchingError("f(u) is neither e^u nor c u^m");
}

RatFun familyLogResidual() {
    const RatFun m = RatFun::m();
    // F1^M: -(m-3)(m-4)/(24(m-1)) log u
    // F1^S: 1/24 log(-f''') + (m-3)(2m-5)/(24(m-1)(m-2)) log rho, rho ~ u^{m-2}, f''' ~ u^{m-3}
    const RatFun fromM = -(m - 3) * (m - 4) / (RatFun(24) * (m - 1));
    const RatFun fromS = (m - 3) / RatFun(24) - (m - 3) * (2 * m - 5) / (RatFun(24) * (m - 1) * (m - 2)) * (m - 2);
    return fromM - fromS;
}

Report verifyGenusOneIdentity(const GenusOneCase& c) {
    Report rep;
    rep.command = "genus-one";
    const Tensors t = buildTensors(c.spec);
    const JetLogSum hatInM = flowSubstitute(c.fHat, t, c.kappa, c.hatMap);
    const JetLogSum diff = c.fM - hatInM;

    int order = diff.rest.order();
    for (const auto& lp : diff.logs) order = std::max(order, lp.second.order());
    int nonzero = 0;
    std::ostringstream bad;
    for (int k = 0; k <= order; ++k)
        for (int a = 0; a < 2; ++a)
            if (!gradientNumerator(diff, a, k).isZero()) {
                ++nonzero;
                bad << " v" << a + 1 << "_" << k;
            }
    rep.add("difference_is_constant", nonzero == 0, nonzero,
            nonzero ? "depends on" + bad.str() : "no base or jet dependence");

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> jetDist(0.3, 1.7);
    std::vector<std::complex<double>> pt0;
    std::complex<double> d0;
    double spread = 0.0;
    for (int s = 0; s < 6; ++s) {
        std::vector<std::complex<double>> pt{0.2 + 0.3 * s, 0.8 + 0.25 * s};
        std::vector<std::vector<std::complex<double>>> jets(2);
        for (auto& j : jets)
            for (int k = 0; k < kJetOrder; ++k) j.emplace_back(jetDist(rng));
        const std::complex<double> d = diff.evaluate(pt, jets);
        if (s == 0) d0 = d;
        spread = std::max(spread, std::abs(d.real() - d0.real()));
    }
    rep.add("numeric_constancy", std::isfinite(spread) && spread < 1e-9, spread, "real part at 6 sample jets");
    rep.data["constant"] = {{"re", d0.real()}, {"im", d0.imag()}};

    if (c.m) {
        const RatFun r = familyLogResidual();
        rep.add("exponent_identity", r.isZero(), r.isZero() ? 0.0 : 1.0, "log u coefficient " + r.str());
        rep.data["m"] = toString(*c.m);
    }
    std::vector<std::string> names = c.spec.variables;
    rep.data["hat_map"] = {toString(c.hatMap[0], names), toString(c.hatMap[1], names)};
    rep.data["case"] = c.name;
    return rep;
}

}  // namespace frobwdvv
