#include "frobwdvv/calibration.hpp"

#include <sstream>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

Cutoff::Cutoff(const FrobeniusSpec& spec) {
    if (spec.truncated()) grading = spec.grading;
}

ClosedForm Cutoff::mul(const ClosedForm& a, const ClosedForm& b) const {
    if (a.isZero() || b.isZero()) return {};
    return grading ? mulTruncated(a, b, *grading) : a * b;
}

ClosedForm Cutoff::cut(const ClosedForm& f) const { return grading ? truncate(f, *grading) : f; }

namespace {

std::optional<QRad> constantValue(const ClosedForm& f) {
    QRad c;
    for (const auto& [m, v] : f.terms()) {
        if (!m.isOne()) return std::nullopt;
        c = v;
    }
    return c;
}

std::string label(int a, int m) { return "theta_{" + std::to_string(a + 1) + "," + std::to_string(m) + "}"; }

}  // namespace

ClosedForm integrateClosedForm(const std::vector<ClosedForm>& w, const Cutoff& cut) {
    ClosedForm phi;
    const int n = static_cast<int>(w.size());
    for (int g = 0; g < n; ++g) {
        ClosedForm r = cut.cut(w[g] - differentiate(phi, g));
        for (int h = 0; h < g; ++h)
            if (!cut.isZero(differentiate(r, h)))
                throw IntegrationError("1-form is not closed in directions " + std::to_string(h + 1) + "," +
                                       std::to_string(g + 1));
        phi += integrate(r, g);
    }
    return cut.cut(phi);
}

ClosedForm Calibration::grad(int alpha, int m, int beta) const { return differentiate(at(alpha, m), beta); }

ClosedForm Calibration::pairing(int a, int ma, int b, int mb) const {
    Cutoff cut(spec);
    const std::size_t n = spec.n();
    std::vector<ClosedForm> ga(n), gb(n);
    for (std::size_t r = 0; r < n; ++r) {
        ga[r] = grad(a, ma, static_cast<int>(r));
        gb[r] = grad(b, mb, static_cast<int>(r));
    }
    ClosedForm s;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t)
            if (tensors.etaInv[r][t] != 0) s += cut.mul(ga[r], gb[t]) * QRad(tensors.etaInv[r][t]);
    return s;
}

Calibration solveCalibration(const FrobeniusSpec& spec, int mMax) {
    if (mMax < 0) throw OrderExceededError("calibration order must be nonnegative");
    Calibration cal;
    cal.spec = spec;
    cal.tensors = buildTensors(spec);
    cal.mMax = mMax;
    const Cutoff cut(spec);
    const int n = static_cast<int>(spec.n());
    const auto& t = cal.tensors;
    const int iota = spec.unity;
    auto rTable = [&](int k) { return spec.rMatrix(k); };

    cal.theta.assign(n, {});
    for (int a = 0; a < n; ++a) {
        // theta_{a,0} = v_a = eta_{a b} v^b
        ClosedForm v;
        for (int b = 0; b < n; ++b)
            if (t.eta[a][b] != 0) v += ClosedForm::var(b) * QRad(t.eta[a][b]);
        cal.theta[a].push_back(v);
    }
    for (int m = 0; m < mMax; ++m) {
        for (int a = 0; a < n; ++a) {
            const ClosedForm& th = cal.theta[a][m];
            std::vector<ClosedForm> dth(n);
            for (int s = 0; s < n; ++s) dth[s] = differentiate(th, s);
            const Rational level = m + 1 + spec.mu[a];
            std::vector<ClosedForm> G(n);
            for (int b = 0; b < n; ++b) {
                std::vector<ClosedForm> H(n);
                for (int g = 0; g < n; ++g)
                    for (int s = 0; s < n; ++s) H[g] += cut.mul(t.cUp(s, b, g), dth[s]);
                ClosedForm gb = integrateClosedForm(H, cut);
                if (b == iota) {
                    auto k = constantValue(cut.cut(th - gb));
                    if (!k) throw ObstructionError(label(a, m + 1) + ": unity derivative is not a shift of the integral");
                    G[b] = gb + ClosedForm(*k);
                    continue;
                }
                // E(G_b) = (m+1+mu_a+mu_b) G_b + sum_k sum_g (R_k)^g_a d_b theta_{g,m+1-k}
                ClosedForm rhs = applyEuler(spec, gb) - gb * QRad(level + spec.mu[b]);
                for (int k = 1; k <= m + 1; ++k) {
                    auto Rk = rTable(k);
                    for (int g = 0; g < n; ++g)
                        if (Rk[g][a] != 0) {
                            ClosedForm d = k == m + 1 ? ClosedForm(t.eta[g][b]) : differentiate(cal.theta[g][m + 1 - k], b);
                            rhs -= d * QRad(Rk[g][a]);
                        }
                }
                auto c = constantValue(cut.cut(rhs));
                if (!c) {
                    std::ostringstream os;
                    os << label(a, m + 1) << ": homogeneity defect in direction " << b + 1
                       << " is not constant: " << toString(cut.cut(rhs), spec.variables);
                    throw ObstructionError(os.str());
                }
                Rational coef = level + spec.mu[b];
                if (coef == 0) {
                    if (!c->isZero())
                        throw ObstructionError(label(a, m + 1) + ": homogeneity cannot hold in direction " +
                                               std::to_string(b + 1) + " with the given R");
                    G[b] = gb;
                } else {
                    G[b] = gb + ClosedForm(*c * QRad(1 / coef));
                }
            }
            cal.theta[a].push_back(integrateClosedForm(G, cut));
        }
    }
    return cal;
}

Report checkCalibration(const Calibration& cal) {
    Report rep;
    rep.command = "calibrate";
    const int n = static_cast<int>(cal.spec.n());
    const Cutoff cut(cal.spec);
    const auto& t = cal.tensors;
    bool base = true;
    for (int a = 0; a < n; ++a) {
        ClosedForm v;
        for (int b = 0; b < n; ++b)
            if (t.eta[a][b] != 0) v += ClosedForm::var(b) * QRad(t.eta[a][b]);
        base = base && cal.at(a, 0) == v;
    }
    rep.add("theta_0_is_v_lower", base);
    std::size_t bad = 0;
    std::string first;
    for (int a = 0; a < n; ++a)
        for (int m = 0; m < cal.mMax; ++m)
            if (!cut.isZero(differentiate(cal.at(a, m + 1), cal.spec.unity) - cal.at(a, m))) {
                if (!bad) first = label(a, m + 1);
                ++bad;
            }
    rep.add("unity_normalization", bad == 0, static_cast<double>(bad), bad ? "fails at " + first : "m <= " + std::to_string(cal.mMax));
    bad = 0;
    for (int k = 0; k <= cal.mMax; ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                ClosedForm s;
                for (int i = 0; i <= k; ++i) {
                    ClosedForm p = cal.pairing(a, i, b, k - i);
                    s += (k - i) % 2 ? -p : p;
                }
                if (k == 0) s -= ClosedForm(t.eta[a][b]);
                if (!cut.isZero(s)) {
                    if (!bad) first = "z^" + std::to_string(k) + " (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
                    ++bad;
                }
            }
    rep.add("orthogonality", bad == 0, static_cast<double>(bad), bad ? "fails at " + first : "z-orders <= " + std::to_string(cal.mMax));
    return rep;
}

const ClosedForm& TwoPointTable::at(int a, int m1, int b, int m2) const {
    auto it = omega.find({a, m1, b, m2});
    if (it == omega.end())
        throw OrderExceededError("Omega_{" + std::to_string(a + 1) + "," + std::to_string(m1) + ";" +
                                 std::to_string(b + 1) + "," + std::to_string(m2) + "} needs a higher calibration order");
    return it->second;
}

TwoPointTable twoPoint(const Calibration& cal) {
    TwoPointTable tab;
    tab.mMax = cal.mMax;
    const int n = static_cast<int>(cal.spec.n());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int m1 = 0; m1 + 1 <= cal.mMax; ++m1)
                for (int m2 = 0; m1 + m2 + 1 <= cal.mMax; ++m2) {
                    ClosedForm s;
                    for (int m = 0; m <= m2; ++m) {
                        ClosedForm p = cal.pairing(a, m1 + m + 1, b, m2 - m);
                        s += m % 2 ? -p : p;
                    }
                    tab.omega[{a, m1, b, m2}] = s;
                }
    return tab;
}

Report checkTwoPoint(const Calibration& cal, const TwoPointTable& om) {
    Report rep;
    rep.command = "verify-omega";
    const int n = static_cast<int>(cal.spec.n());
    const Cutoff cut(cal.spec);
    const auto& t = cal.tensors;
    std::size_t asym = 0, deriv = 0, unity = 0, hess = 0;
    for (const auto& [key, w] : om.omega) {
        auto [a, m1, b, m2] = key;
        if (!cut.isZero(w - om.at(b, m2, a, m1))) ++asym;
        for (int g = 0; g < n; ++g) {
            // d_g Omega = sum grad theta_{a,m1}^rho c^{rho sigma}_g grad theta_{b,m2}^sigma
            ClosedForm rhs;
            for (int r = 0; r < n; ++r) {
                ClosedForm gr = cal.grad(a, m1, r);
                if (gr.isZero()) continue;
                for (int s = 0; s < n; ++s) {
                    ClosedForm cup;
                    for (int x = 0; x < n; ++x)
                        if (t.etaInv[r][x] != 0) cup += t.cUp(s, x, g) * QRad(t.etaInv[r][x]);
                    if (cup.isZero()) continue;
                    rhs += cut.mul(cut.mul(gr, cup), cal.grad(b, m2, s));
                }
            }
            if (!cut.isZero(differentiate(w, g) - rhs)) ++deriv;
        }
        if (b == cal.spec.unity && m2 == 0 && !cut.isZero(w - cal.at(a, m1))) ++unity;
        if (m1 == 0 && m2 == 0 &&
            !cut.isZero(w - differentiate(differentiate(cal.spec.potential, a), b)))
            ++hess;
    }
    auto add = [&](const std::string& name, std::size_t bad) {
        rep.add(name, bad == 0, static_cast<double>(bad), std::to_string(om.omega.size()) + " entries");
    };
    add("omega_symmetric", asym);
    add("omega_derivative_formula", deriv);
    add("omega_unity_is_theta", unity);
    add("omega00_is_hessian", hess);
    return rep;
}

Report checkHomogeneity(const Calibration& cal, const TwoPointTable& om) {
    Report rep;
    rep.command = "verify-omega";
    const Cutoff cut(cal.spec);
    const auto& spec = cal.spec;
    const int n = static_cast<int>(spec.n());
    std::size_t bad = 0;
    std::string first;
    for (const auto& [key, w] : om.omega) {
        auto [a, m1, b, m2] = key;
        ClosedForm rhs = w * QRad(Rational(m1 + m2 + 1) + spec.mu[a] + spec.mu[b]);
        for (int r = 1; r <= m1; ++r) {
            auto R = spec.rMatrix(r);
            for (int g = 0; g < n; ++g)
                if (R[g][a] != 0) rhs += om.at(g, m1 - r, b, m2) * QRad(R[g][a]);
        }
        for (int r = 1; r <= m2; ++r) {
            auto R = spec.rMatrix(r);
            for (int g = 0; g < n; ++g)
                if (R[g][b] != 0) rhs += om.at(a, m1, g, m2 - r) * QRad(R[g][b]);
        }
        auto R = spec.rMatrix(m1 + m2 + 1);
        Rational c;
        for (int g = 0; g < n; ++g) c += R[g][a] * cal.tensors.eta[g][b];
        rhs += ClosedForm(m2 % 2 ? -c : c);
        if (!cut.isZero(applyEuler(spec, w) - rhs)) {
            if (!bad)
                first = "(" + std::to_string(a + 1) + "," + std::to_string(m1) + ";" + std::to_string(b + 1) + "," +
                        std::to_string(m2) + ")";
            ++bad;
        }
    }
    rep.add("omega_homogeneity", bad == 0, static_cast<double>(bad),
            bad ? "fails at " + first : std::to_string(om.omega.size()) + " entries");
    return rep;
}

}  // namespace frobwdvv
