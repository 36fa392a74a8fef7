#include "frobwdvv/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

namespace {

std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

Series localizeAt(const ClosedForm& f, const std::vector<QRad>& center, const Rational& order) {
    return localize<QRad>(f, center, ones(center.size()), order);
}

Series constantLike(const Series& like, const QRad& c) {
    return Series::constant(c, like.center(), like.weights(), like.order());
}

/// Coordinate function of the series' own variables: center[i] + x_i.
Series coordinate(const Series& like, int i) {
    return Series::offset(i, like.center(), like.weights(), like.order()) +
           constantLike(like, like.center()[i]);
}

Series d(const Series& f, int i) { return differentiate(f, i); }

void addExact(Report& rep, const std::string& name, double residual, const std::string& detail = {}) {
    rep.add(name, residual == 0.0, residual, detail);
}

int toInt(const Rational& q) { return static_cast<int>(toLong(q)); }

}  // namespace

double seriesDistance(const Series& a, const Series& b, int minDegree, int maxDegree) {
    const Rational top = std::min({a.order(), b.order(), Rational(maxDegree)});
    double worst = 0.0;
    auto visit = [&](const MultiIndex& k) {
        Rational deg = a.degree(k);
        if (deg < minDegree || deg > top) return;
        QRad diff = a.coeff(k) - b.coeff(k);
        if (!diff.isZero()) worst = std::max(worst, std::max(std::abs(diff.toDouble()), 1e-300));
    };
    for (const auto& [k, c] : a.coeffs()) visit(k);
    for (const auto& [k, c] : b.coeffs()) visit(k);
    return worst;
}

SeriesLegendre transformSeries(const Series& potential, const Matrix<Rational>& eta, int kappa) {
    const std::size_t n = potential.nvars();
    if (eta.size() != n) throw CenterMismatchError("metric size differs from the number of variables");
    if (kappa < 0 || kappa >= static_cast<int>(n)) throw SingularJacobianError("direction out of range");
    SeriesLegendre s;
    s.kappa = kappa;
    s.eta = eta;
    s.etaInv = inverse(eta);
    s.potential = potential;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) s.hessian.push_back(d(d(potential, a), b));

    for (std::size_t a = 0; a < n; ++a) {
        Series y = s.hessian[0].zeroLike();
        for (std::size_t b = 0; b < n; ++b)
            if (s.etaInv[a][b] != 0) y += s.hessian[kappa * n + b] * QRad(s.etaInv[a][b]);
        s.hatCoords.push_back(std::move(y));
    }
    try {
        s.inverseMap = invertMap(s.hatCoords);
    } catch (const SingularJacobianError&) {
        throw SingularJacobianError("multiplication by d/dv^" + std::to_string(kappa + 1) +
                                    " is not invertible at the center");
    }
    for (const auto& h : s.hessian) s.hatHessian.push_back(compose(h, s.inverseMap));

    // F(x) = sum_ab x_a x_b int_0^1 (1 - t) H_ab(t x) dt, degree by degree
    const Series& h0 = s.hatHessian[0];
    Series f(h0.center(), h0.weights(), h0.order() + 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (const auto& [k, c] : s.hatHessian[a * n + b].coeffs()) {
                Rational deg = h0.degree(k);
                MultiIndex m = k;
                ++m[a];
                ++m[b];
                f.add(m, c * QRad(Rational(1) / ((deg + 1) * (deg + 2))));
            }
    s.hatPotential = std::move(f);
    return s;
}

LegendreResult transform(const FrobeniusSpec& spec, int kappa, const std::vector<QRad>& center, int order) {
    if (center.size() != spec.n()) throw CenterMismatchError("center has the wrong dimension");
    if (order < 3) throw OrderExceededError("the hat potential needs order at least 3");
    Tensors t = buildTensors(spec);
    LegendreResult r;
    r.spec = spec;
    r.series = transformSeries(localizeAt(spec.potential, center, order), t.eta, kappa);
    r.hatCharge = -2 * spec.mu.at(kappa);
    Matrix<Rational> r1 = spec.rMatrix(1);
    for (std::size_t b = 0; b < spec.n(); ++b) r.hatShifts.push_back(r1[b][kappa]);
    return r;
}

namespace {

// c^g_{ab} of M composed with the inverse map, at (g*n + a)*n + b
std::vector<Series> hatStructureOfM(const SeriesLegendre& s) {
    const std::size_t n = s.n();
    std::vector<Series> low;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t g = 0; g < n; ++g) low.push_back(d(s.hessian[a * n + b], g));
    std::vector<Series> out;
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Series c = low[0].zeroLike();
                for (std::size_t l = 0; l < n; ++l)
                    if (s.etaInv[g][l] != 0) c += low[(l * n + a) * n + b] * QRad(s.etaInv[g][l]);
                out.push_back(compose(c, s.inverseMap));
            }
    return out;
}

// dv^r / dvhat^a at r*n + a
std::vector<Series> inverseJacobian(const SeriesLegendre& s) {
    std::vector<Series> j;
    for (std::size_t r = 0; r < s.n(); ++r)
        for (std::size_t a = 0; a < s.n(); ++a) j.push_back(d(s.inverseMap[r], a));
    return j;
}

double wdvvDistance(const Series& f, const Matrix<Rational>& etaInv) {
    const std::size_t n = etaInv.size();
    std::vector<Series> c;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t g = 0; g < n; ++g) c.push_back(d(d(d(f, a), b), g));
    auto at = [&](std::size_t a, std::size_t b, std::size_t g) -> const Series& { return c[(a * n + b) * n + g]; };
    double worst = 0.0;
    for (const auto& [a, b, cc, dd] : wdvvIndexTuples(n)) {
        Series res = c[0].zeroLike();
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s) {
                if (etaInv[r][s] == 0) continue;
                QRad e(etaInv[r][s]);
                res += (at(a, b, r) * at(s, cc, dd) - at(dd, b, r) * at(s, cc, a)) * e;
            }
        worst = std::max(worst, seriesDistance(res, res.zeroLike(), 0));
    }
    return worst;
}

// Ehat^b = (1 - Dhat/2 - mu_b) vhat^b + rhat^b as series in hat offsets
std::vector<Series> expectedHatEuler(const LegendreResult& r) {
    const Series& like = r.series.inverseMap[0];
    std::vector<Series> e;
    for (std::size_t b = 0; b < r.spec.n(); ++b) {
        Rational lin = 1 - r.hatCharge / 2 - r.spec.mu[b];
        Series x = Series::offset(b, like.center(), like.weights(), like.order());
        e.push_back((x + constantLike(like, like.center()[b])) * QRad(lin) + constantLike(like, QRad(r.hatShifts[b])));
    }
    return e;
}

Series applyField(const std::vector<Series>& field, const Series& f) {
    Series out = f.zeroLike();
    bool first = true;
    for (std::size_t g = 0; g < field.size(); ++g) {
        Series t = field[g] * d(f, g);
        if (first) {
            out = t;
            first = false;
        } else {
            out += t;
        }
    }
    return out;
}

}  // namespace

Report checkTransform(const LegendreResult& r) {
    const SeriesLegendre& s = r.series;
    const std::size_t n = s.n();
    const int k = s.kappa;
    Report rep;
    rep.command = "legendre";

    double jac = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        Series lower = s.hessian[0].zeroLike();
        for (std::size_t b = 0; b < n; ++b)
            if (s.eta[a][b] != 0) lower += s.hatCoords[b] * QRad(s.eta[a][b]);
        for (std::size_t g = 0; g < n; ++g)
            jac = std::max(jac, seriesDistance(d(lower, g), d(s.hessian[k * n + a], g), 0));
    }
    addExact(rep, "jacobian_identity", jac, "d vhat_a / d v^g = c_{kappa a g}");

    double unity = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        Series dv = d(s.hatCoords[b], r.spec.unity);
        unity = std::max(unity, seriesDistance(dv, constantLike(dv, QRad(b == static_cast<std::size_t>(k) ? 1 : 0)), 0));
    }
    addExact(rep, "unity_is_d_vhat_kappa", unity);

    const auto cHat = hatStructureOfM(s);
    const auto jinv = inverseJacobian(s);
    auto cM = [&](std::size_t g, std::size_t a, std::size_t b) -> const Series& { return cHat[(g * n + a) * n + b]; };

    // P^s_b = sum_r (dv^r/dvhat^b) c^s_{kappa r}: the product identity says P = 1
    std::vector<Series> p;
    double prod = 0.0;
    for (std::size_t sg = 0; sg < n; ++sg)
        for (std::size_t b = 0; b < n; ++b) {
            Series acc = jinv[b] * cM(sg, k, 0);
            for (std::size_t rr = 1; rr < n; ++rr) acc += jinv[rr * n + b] * cM(sg, k, rr);
            prod = std::max(prod, seriesDistance(acc, constantLike(acc, QRad(sg == b ? 1 : 0)), 0));
            p.push_back(std::move(acc));
        }
    addExact(rep, "product_identity", prod, "d/dv^kappa . d/dvhat_a = d/dv_a");

    double metric = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Series g = p[0].zeroLike();
            for (std::size_t sg = 0; sg < n; ++sg)
                for (std::size_t l = 0; l < n; ++l)
                    if (s.eta[sg][l] != 0) g += p[sg * n + a] * p[l * n + b] * QRad(s.eta[sg][l]);
            metric = std::max(metric, seriesDistance(g, constantLike(g, QRad(s.eta[a][b])), 0));
        }
    addExact(rep, "metric_transport", metric, "<d/dvhat^a, d/dvhat^b>^ = eta_ab");

    double hess = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            hess = std::max(hess, seriesDistance(d(d(s.hatPotential, a), b), s.hatHessian[a * n + b], 0));
    addExact(rep, "hat_hessian", hess, "d^2 Fhat = d^2 F o v(vhat)");

    double ct = 0.0;
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Series tilde = jinv[a] * cM(g, 0, b);
                for (std::size_t rr = 1; rr < n; ++rr) tilde += jinv[rr * n + a] * cM(g, rr, b);
                Series hat = tilde.zeroLike();
                bool first = true;
                for (std::size_t l = 0; l < n; ++l) {
                    if (s.etaInv[g][l] == 0) continue;
                    Series t = d(d(d(s.hatPotential, a), b), l) * QRad(s.etaInv[g][l]);
                    hat = first ? t : hat + t;
                    first = false;
                }
                ct = std::max(ct, seriesDistance(tilde, hat, 0));
            }
    addExact(rep, "structure_transport", ct, "ctilde^g_ab = chat^g_ab");

    addExact(rep, "hat_wdvv", wdvvDistance(s.hatPotential, s.etaInv));
    return rep;
}

Report verifyEulerHat(const LegendreResult& r) {
    const SeriesLegendre& s = r.series;
    const std::size_t n = s.n();
    Report rep;
    rep.command = "legendre";
    auto ef = eulerField(r.spec);
    std::vector<Series> e;
    for (const auto& c : ef) e.push_back(localizeAt(c, s.center(), s.hessian[0].order()));
    const auto expected = expectedHatEuler(r);
    double push = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
        Series eb = compose(applyField(e, s.hatCoords[b]), s.inverseMap);
        push = std::max(push, seriesDistance(eb, expected[b], 0));
    }
    std::ostringstream det;
    det << "Dhat = " << toString(r.hatCharge);
    addExact(rep, "euler_pushforward", push, det.str());

    const Matrix<Rational> r1 = r.spec.rMatrix(1);
    double homog = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const Series& h = s.hatHessian[a * n + b];
            Rational rterm = 0;
            for (std::size_t g = 0; g < n; ++g) rterm += r1[g][a] * s.eta[g][b];
            Series rhs = h * QRad(1 + r.spec.mu[a] + r.spec.mu[b]) + constantLike(h, QRad(rterm));
            homog = std::max(homog, seriesDistance(applyField(expected, h), rhs, 0));
        }
    addExact(rep, "hat_hessian_homogeneity", homog);
    rep.data["charge_hat"] = toString(r.hatCharge);
    return rep;
}

Report roundTrip(const LegendreResult& r) {
    const SeriesLegendre& s = r.series;
    Report rep;
    rep.command = "legendre";
    SeriesLegendre back = transformSeries(s.hatPotential, s.eta, r.spec.unity);
    double coords = 0.0;
    for (std::size_t a = 0; a < s.n(); ++a)
        coords = std::max(coords, seriesDistance(back.hatCoords[a], s.inverseMap[a], 1));
    addExact(rep, "coordinates_recovered", coords, "vhathat = v + const");
    addExact(rep, "potential_recovered", seriesDistance(back.hatPotential, s.potential, 3),
             "precision " + toString(std::min(back.hatPotential.order(), s.potential.order())));
    return rep;
}

Report compareHatPotential(const LegendreResult& r, const ClosedForm& candidate, int maxDegree) {
    const Series& f = r.series.hatPotential;
    Series c = localizeAt(candidate, f.center(), f.order());
    Report rep;
    rep.command = "legendre";
    const int top = std::min(maxDegree, toInt(f.order()));
    addExact(rep, "hat_potential_matches", seriesDistance(f, c, 3, top),
             "degrees 3.." + std::to_string(top) + " about the hat center");
    return rep;
}

HatCalibration transportCalibration(const LegendreResult& r, const Calibration& cal) {
    if (cal.mMax < 1) throw OrderExceededError("transport needs a calibration with mMax >= 1");
    const SeriesLegendre& s = r.series;
    const Rational o = s.hessian[0].order();
    TwoPointTable om = twoPoint(cal);
    HatCalibration hat;
    hat.mMax = cal.mMax - 1;
    hat.theta.resize(s.n());
    for (std::size_t a = 0; a < s.n(); ++a)
        for (int m = 0; m <= hat.mMax; ++m)
            hat.theta[a].push_back(compose(localizeAt(om.at(a, m, s.kappa, 0), s.center(), o), s.inverseMap));
    return hat;
}

Report checkHatCalibration(const LegendreResult& r, const Calibration& cal, const HatCalibration& hat) {
    const SeriesLegendre& s = r.series;
    const std::size_t n = s.n();
    const Rational o = s.hessian[0].order();
    Report rep;
    rep.command = "legendre";

    double t0 = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const Series& th = hat.at(a, 0);
        Series lower = th.zeroLike();
        for (std::size_t b = 0; b < n; ++b)
            if (s.eta[a][b] != 0) lower += coordinate(th, b) * QRad(s.eta[a][b]);
        t0 = std::max(t0, seriesDistance(th, lower, 0));
    }
    addExact(rep, "theta0_is_vhat_lower", t0);

    double grad = 0.0;
    for (std::size_t g = 0; g < n; ++g)
        for (int m = 0; m <= hat.mMax; ++m)
            for (std::size_t b = 0; b < n; ++b) {
                Series rhs = compose(localizeAt(cal.grad(g, m, b), s.center(), o), s.inverseMap);
                grad = std::max(grad, seriesDistance(d(hat.at(g, m), b), rhs, 0));
            }
    addExact(rep, "gradient_identity", grad, "d thetahat / d vhat^b = d theta / d v^b");

    double kr = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (int m = 0; m < hat.mMax; ++m)
            kr = std::max(kr, seriesDistance(d(hat.at(a, m + 1), s.kappa), hat.at(a, m), 0));
    addExact(rep, "kappa_derivative_rule", kr);

    double orth = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (int k = 0; k <= hat.mMax; ++k) {
                Series acc = hat.at(0, 0).zeroLike();
                for (int i = 0; i <= k; ++i) {
                    const int j = k - i;
                    for (std::size_t p = 0; p < n; ++p)
                        for (std::size_t q = 0; q < n; ++q) {
                            if (s.etaInv[p][q] == 0) continue;
                            Series t = d(hat.at(a, i), p) * d(hat.at(b, j), q) * QRad(s.etaInv[p][q]);
                            acc += j % 2 ? -t : t;
                        }
                }
                Rational target = k == 0 ? s.eta[a][b] : Rational(0);
                orth = std::max(orth, seriesDistance(acc, constantLike(acc, QRad(target)), 0));
            }
    addExact(rep, "hat_orthogonality", orth);
    return rep;
}

HatTwoPoint hatTwoPoint(const LegendreResult& r, const HatCalibration& hat) {
    const SeriesLegendre& s = r.series;
    const std::size_t n = s.n();
    std::vector<std::vector<std::vector<Series>>> grads(n);
    for (std::size_t a = 0; a < n; ++a)
        for (int m = 0; m <= hat.mMax; ++m) {
            std::vector<Series> g;
            for (std::size_t b = 0; b < n; ++b) g.push_back(d(hat.at(a, m), b));
            grads[a].push_back(std::move(g));
        }
    auto pairing = [&](int a, int ma, int b, int mb) {
        Series acc = grads[a][ma][0].zeroLike();
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (s.etaInv[p][q] != 0) acc += grads[a][ma][p] * grads[b][mb][q] * QRad(s.etaInv[p][q]);
        return acc;
    };
    HatTwoPoint out;
    out.mMax = hat.mMax;
    for (int a = 0; a < static_cast<int>(n); ++a)
        for (int b = 0; b < static_cast<int>(n); ++b)
            for (int m1 = 0; m1 + 1 <= hat.mMax; ++m1)
                for (int m2 = 0; m1 + m2 + 1 <= hat.mMax; ++m2) {
                    Series acc = pairing(a, m1 + 1, b, m2);
                    for (int m = 1; m <= m2; ++m) {
                        Series t = pairing(a, m1 + m + 1, b, m2 - m);
                        acc += m % 2 ? -t : t;
                    }
                    out.omega.emplace(std::make_tuple(a, m1, b, m2), std::move(acc));
                }
    return out;
}

Report verifyOmegaTransport(const LegendreResult& r, const TwoPointTable& omegaM, const HatTwoPoint& omegaHat) {
    const SeriesLegendre& s = r.series;
    const Rational o = s.hessian[0].order();
    Report rep;
    rep.command = "legendre";
    double worst = 0.0;
    int compared = 0;
    for (const auto& [key, hat] : omegaHat.omega) {
        const auto& [a, m1, b, m2] = key;
        if (!omegaM.has(a, m1, b, m2)) continue;
        Series pulled = compose(localizeAt(omegaM.at(a, m1, b, m2), s.center(), o), s.inverseMap);
        worst = std::max(worst, seriesDistance(hat, pulled, 0));
        ++compared;
    }
    addExact(rep, "omega_transport", worst, std::to_string(compared) + " entries");

    double ke = 0.0;
    for (std::size_t a = 0; a < s.n(); ++a) {
        auto it = omegaHat.omega.find({static_cast<int>(a), 0, s.kappa, 0});
        if (it == omegaHat.omega.end()) continue;
        Series lower = it->second.zeroLike();
        for (std::size_t b = 0; b < s.n(); ++b)
            if (s.eta[a][b] != 0) lower += coordinate(it->second, b) * QRad(s.eta[a][b]);
        ke = std::max(ke, seriesDistance(it->second, lower, 0));
    }
    addExact(rep, "omega_kappa_entry", ke, "Omega_{a,0;kappa,0} = vhat_a");
    return rep;
}

Report checkHatHomogeneity(const LegendreResult& r, const HatTwoPoint& omegaHat) {
    const std::size_t n = r.spec.n();
    const auto e = expectedHatEuler(r);
    const auto& mu = r.spec.mu;
    const Matrix<Rational>& eta = r.series.eta;
    Report rep;
    rep.command = "legendre";
    double worst = 0.0;
    for (const auto& [key, om] : omegaHat.omega) {
        const auto& [a, m1, b, m2] = key;
        Series rhs = om * QRad(m1 + m2 + 1 + mu[a] + mu[b]);
        for (int s = 1; s <= m1; ++s) {
            Matrix<Rational> rs = r.spec.rMatrix(s);
            for (std::size_t g = 0; g < n; ++g)
                if (rs[g][a] != 0) rhs += omegaHat.omega.at({static_cast<int>(g), m1 - s, b, m2}) * QRad(rs[g][a]);
        }
        for (int s = 1; s <= m2; ++s) {
            Matrix<Rational> rs = r.spec.rMatrix(s);
            for (std::size_t g = 0; g < n; ++g)
                if (rs[g][b] != 0) rhs += omegaHat.omega.at({a, m1, static_cast<int>(g), m2 - s}) * QRad(rs[g][b]);
        }
        Matrix<Rational> top = r.spec.rMatrix(m1 + m2 + 1);
        Rational c = 0;
        for (std::size_t g = 0; g < n; ++g) c += top[g][a] * eta[g][b];
        if (m2 % 2) c = -c;
        rhs += constantLike(om, QRad(c));
        worst = std::max(worst, seriesDistance(applyField(e, om), rhs, 0));
    }
    addExact(rep, "hat_omega_homogeneity", worst, std::to_string(omegaHat.omega.size()) + " entries");
    return rep;
}

Report verifyPointwise(const FrobeniusSpec& spec, const ClosedForm& candidate, int kappa,
                       const std::vector<std::vector<double>>& points, double tolerance, bool moduloQuadratic) {
    const std::size_t n = spec.n();
    Tensors t = buildTensors(spec);
    std::vector<ClosedForm> h, hh;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            h.push_back(differentiate(differentiate(spec.potential, a), b));
            hh.push_back(differentiate(differentiate(candidate, a), b));
        }
    Report rep;
    rep.command = "legendre-pointwise";
    rep.tolerance = tolerance;
    std::vector<std::complex<double>> offset(n * n, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != n) throw CenterMismatchError("sample point has the wrong dimension");
        std::vector<std::complex<double>> v(points[i].begin(), points[i].end());
        std::vector<std::complex<double>> low(n), hatv(n, 0.0);
        for (std::size_t b = 0; b < n; ++b) low[b] = evaluate(h[kappa * n + b], v);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) hatv[a] += t.etaInv[a][b].get_d() * low[b];
        double scale = 0.0, diff = 0.0;
        for (std::size_t ab = 0; ab < n * n; ++ab) {
            std::complex<double> rhs = evaluate(h[ab], v);
            std::complex<double> delta = evaluate(hh[ab], hatv) - rhs;
            if (moduloQuadratic && i == 0) offset[ab] = delta;
            scale = std::max(scale, std::abs(rhs));
            diff = std::max(diff, std::abs(delta - offset[ab]));
        }
        std::ostringstream det;
        det << "vhat = (";
        for (std::size_t a = 0; a < n; ++a) det << (a ? ", " : "") << hatv[a].real();
        det << ")";
        if (moduloQuadratic && i == 0) {
            det << ", reference point";
            rep.add("point_1", true, 0.0, det.str());
            continue;
        }
        double rel = diff / std::max(scale, 1e-300);
        rep.add("point_" + std::to_string(i + 1), rel <= tolerance, rel, det.str());
    }
    return rep;
}

nlohmann::json legendreJson(const LegendreResult& r, const Report& checks) {
    nlohmann::json j;
    j["kappa"] = r.kappa() + 1;
    j["charge_hat"] = toString(r.hatCharge);
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks.checks)
        j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"max_residual", c.maxResidual}});
    return j;
}

}  // namespace frobwdvv
