#include "frobwdvv/frobenius.hpp"

#include <array>
#include <mutex>
#include <set>
#include <sstream>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/io.hpp"

namespace frobwdvv {

Matrix<Rational> FrobeniusSpec::rMatrix(int s) const {
    auto it = R.find(s);
    return it == R.end() ? zeroMatrix<Rational>(n(), n()) : it->second;
}

Matrix<Rational> FrobeniusSpec::rTotal() const {
    auto m = zeroMatrix<Rational>(n(), n());
    for (const auto& [s, r] : R)
        for (std::size_t a = 0; a < n(); ++a)
            for (std::size_t b = 0; b < n(); ++b) m[a][b] += r[a][b];
    return m;
}

// --- loading ----------------------------------------------------------------

namespace {

std::vector<Rational> rationalList(const json& j, std::size_t n, const std::string& what) {
    if (!j.is_array() || j.size() != n)
        throw SpecParseError(what + " must be a list of " + std::to_string(n) + " rationals");
    std::vector<Rational> r;
    for (const auto& x : j) r.push_back(rationalFromJson(x));
    return r;
}

int varIndex(const std::vector<std::string>& names, const std::string& v) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == v) return static_cast<int>(i);
    throw SpecParseError("unknown variable '" + v + "'");
}

Grading parseGrading(const json& j, const std::vector<std::string>& names) {
    Grading g;
    g.weights.assign(names.size(), Rational(0));
    g.expWeights.assign(names.size(), Rational(0));
    if (j.contains("weights"))
        for (const auto& [k, v] : j["weights"].items()) g.weights[varIndex(names, k)] = rationalFromJson(v);
    if (j.contains("exp_weights"))
        for (const auto& [k, v] : j["exp_weights"].items())
            g.expWeights[varIndex(names, k)] = rationalFromJson(v);
    if (j.contains("order")) g.order = rationalFromJson(j["order"]);
    return g;
}

}  // namespace

FrobeniusSpec twoDimFamily(const Rational& m, const Rational& c) {
    if (m == 1) throw SpecValidationError("the two-dimensional family needs m != 1");
    FrobeniusSpec s;
    s.name = "twodim_family";
    s.variables = {"v1", "v2"};
    s.unity = 0;
    s.potential = ClosedForm(rat(1, 2)) * ClosedForm::var(0).pow(2) * ClosedForm::var(1) +
                  ClosedForm(c) * ClosedForm::power(1, m);
    s.charge = (m - 3) / (m - 1);
    s.eulerLinear = zeroMatrix<Rational>(2, 2);
    s.eulerLinear[0][0] = 1;
    s.eulerLinear[1][1] = 2 / (m - 1);
    s.eulerShifts = {0, 0};
    s.mu = {-s.charge / 2, s.charge / 2};
    s.params = {{"m", m}, {"c", c}};
    return s;
}

FrobeniusSpec parseSpec(const json& j, const std::map<std::string, Rational>& params) {
    FrobeniusSpec s;
    if (j.contains("family")) {
        if (j["family"] != "twodim") throw SpecParseError("unknown family " + j["family"].dump());
        std::map<std::string, Rational> p;
        if (j.contains("parameters"))
            for (const auto& [k, v] : j["parameters"].items()) p[k] = rationalFromJson(v);
        for (const auto& [k, v] : params) p[k] = v;
        if (!p.count("m") || !p.count("c")) throw SpecParseError("family needs parameters m and c");
        s = twoDimFamily(p["m"], p["c"]);
        if (j.contains("name")) s.name = j["name"].get<std::string>();
        for (const auto& key : {"legendre", "monodromy", "notes", "genus_one"})
            if (j.contains(key)) s.extra[key] = j[key];
        return s;
    }
    try {
        s.name = j.value("name", std::string("unnamed"));
        for (const auto& v : j.at("variables")) s.variables.push_back(v.get<std::string>());
        const std::size_t n = s.variables.size();
        if (n == 0) throw SpecParseError("no variables");
        s.unity = j.at("unity_index").get<int>() - 1;
        if (s.unity < 0 || s.unity >= static_cast<int>(n)) throw SpecParseError("unity_index out of range");
        if (j.contains("potential")) s.potential = closedFormFromJson(j["potential"], s.variables);
        const json& e = j.at("euler");
        const json& lin = e.at("linear");
        s.eulerLinear = zeroMatrix<Rational>(n, n);
        if (lin.size() == n && lin[0].is_array()) {
            for (std::size_t a = 0; a < n; ++a) {
                auto row = rationalList(lin[a], n, "euler.linear row");
                s.eulerLinear[a] = row;
            }
        } else {
            auto d = rationalList(lin, n, "euler.linear");
            for (std::size_t a = 0; a < n; ++a) s.eulerLinear[a][a] = d[a];
        }
        s.eulerShifts = e.contains("shifts") ? rationalList(e["shifts"], n, "euler.shifts")
                                             : std::vector<Rational>(n, Rational(0));
        s.charge = rationalFromJson(j.at("charge"));
        s.mu = rationalList(j.at("mu"), n, "mu");
        if (j.contains("R"))
            for (const auto& blk : j["R"]) {
                int sIdx = blk.at("s").get<int>();
                if (sIdx < 1) throw SpecParseError("R block index s must be >= 1");
                auto m = zeroMatrix<Rational>(n, n);
                for (const auto& ent : blk.at("entries")) {
                    int r = ent.at(0).get<int>() - 1, c = ent.at(1).get<int>() - 1;
                    if (r < 0 || c < 0 || r >= static_cast<int>(n) || c >= static_cast<int>(n))
                        throw SpecParseError("R entry index out of range");
                    m[r][c] = rationalFromJson(ent.at(2));
                }
                s.R[sIdx] = m;
            }
        if (j.contains("grading")) s.grading = parseGrading(j["grading"], s.variables);
        if (j.contains("truncated")) {
            if (!s.truncated()) throw SpecParseError("truncated spec needs a grading with an order");
            const json& t = j["truncated"];
            s.potential += materializePotential(t.at("generator").get<std::string>(),
                                                t.value("args", json::object()), *s.grading);
        }
        for (const auto& key : {"legendre", "monodromy", "notes", "genus_one", "derived_not_printed"})
            if (j.contains(key)) s.extra[key] = j[key];
    } catch (const json::exception& ex) {
        throw SpecParseError(std::string("malformed spec: ") + ex.what());
    }
    return s;
}

FrobeniusSpec loadSpec(const std::string& path, const std::map<std::string, Rational>& params) {
    json j;
    try {
        j = json::parse(readFile(path));
    } catch (const json::parse_error& e) {
        throw SpecParseError(path + ": " + e.what());
    }
    try {
        return parseSpec(j, params);
    } catch (const SpecParseError& e) {
        throw SpecParseError(path + ": " + e.what());
    }
}

// --- tensors ----------------------------------------------------------------

Tensors buildTensors(const FrobeniusSpec& spec) {
    Tensors t;
    const std::size_t n = spec.n();
    t.n = n;
    t.cLow.assign(n * n * n, ClosedForm());
    std::vector<ClosedForm> d1(n);
    for (std::size_t a = 0; a < n; ++a) d1[a] = differentiate(spec.potential, static_cast<int>(a));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            ClosedForm d2 = differentiate(d1[a], static_cast<int>(b));
            for (std::size_t c = b; c < n; ++c) {
                ClosedForm d3 = differentiate(d2, static_cast<int>(c));
                const std::size_t perm[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                                                {b, c, a}, {c, a, b}, {c, b, a}};
                for (const auto& p : perm) t.cLow[(p[0] * n + p[1]) * n + p[2]] = d3;
            }
        }
    t.eta = zeroMatrix<Rational>(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const ClosedForm& e = t.c(spec.unity, static_cast<int>(a), static_cast<int>(b));
            if (!e.isConstant() || !e.constantTerm().isRational())
                throw NonConstantMetricError("d_unity d_a d_b F is not a rational constant at (" +
                                             std::to_string(a + 1) + "," + std::to_string(b + 1) + ")");
            t.eta[a][b] = e.constantTerm().toRational();
        }
    try {
        t.etaInv = inverse(t.eta);
    } catch (const SingularJacobianError&) {
        throw SingularMetricError("metric eta is degenerate");
    }
    t.cMixed.assign(n * n * n, ClosedForm());
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                ClosedForm s;
                for (std::size_t r = 0; r < n; ++r)
                    if (t.etaInv[g][r] != 0) s += t.c(r, a, b) * QRad(t.etaInv[g][r]);
                t.cMixed[(g * n + a) * n + b] = s;
            }
    return t;
}

std::vector<ClosedForm> thirdDerivatives(const ClosedForm& f, std::size_t n) {
    std::vector<ClosedForm> c(n * n * n);
    for (std::size_t a = 0; a < n; ++a) {
        ClosedForm d1 = differentiate(f, static_cast<int>(a));
        for (std::size_t b = a; b < n; ++b) {
            ClosedForm d2 = differentiate(d1, static_cast<int>(b));
            for (std::size_t cc = b; cc < n; ++cc) {
                ClosedForm d3 = differentiate(d2, static_cast<int>(cc));
                const std::size_t perm[6][3] = {{a, b, cc}, {a, cc, b}, {b, a, cc},
                                                {b, cc, a}, {cc, a, b}, {cc, b, a}};
                for (const auto& p : perm) c[(p[0] * n + p[1]) * n + p[2]] = d3;
            }
        }
    }
    return c;
}

const std::vector<std::array<std::size_t, 4>>& wdvvIndexTuples(std::size_t n) {
    static std::map<std::size_t, std::vector<std::array<std::size_t, 4>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto pairIdx = [n](std::size_t a, std::size_t b) { return a <= b ? a * n + b : b * n + a; };
    std::vector<std::array<std::size_t, 4>> out;
    std::set<std::array<std::size_t, 4>> seen;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    // A(ab,cd) = A(db,ca) with A symmetric in its two pairs
                    std::size_t p1 = pairIdx(a, b), p2 = pairIdx(c, d);
                    std::size_t q1 = pairIdx(d, b), q2 = pairIdx(c, a);
                    std::array<std::size_t, 2> k1{std::min(p1, p2), std::max(p1, p2)};
                    std::array<std::size_t, 2> k2{std::min(q1, q2), std::max(q1, q2)};
                    if (k1 == k2) continue;
                    auto key = k1 < k2 ? std::array<std::size_t, 4>{k1[0], k1[1], k2[0], k2[1]}
                                       : std::array<std::size_t, 4>{k2[0], k2[1], k1[0], k1[1]};
                    if (seen.insert(key).second) out.push_back({a, b, c, d});
                }
    return cache.emplace(n, std::move(out)).first->second;
}

namespace {

std::optional<Rational> lowest(const std::vector<ClosedForm>& c, const Grading& g) {
    std::optional<Rational> low;
    for (const auto& x : c)
        if (auto l = lowestDegree(x, g); l && (!low || *l < *low)) low = l;
    return low;
}

}  // namespace

std::vector<ClosedForm> wdvvBilinear(const std::vector<ClosedForm>& x, const std::vector<ClosedForm>& y,
                                     std::size_t n, const Matrix<Rational>& etaInv, const Grading* g) {
    const bool cut = g && g->order;
    std::vector<ClosedForm> xc = x, yc = y;
    if (cut) {
        // a product of degree <= order needs each factor below order minus the other's lowest degree
        auto lx = lowest(x, *g), ly = lowest(y, *g);
        Grading gx = *g, gy = *g;
        gx.order = *g->order - ly.value_or(Rational(0));
        gy.order = *g->order - lx.value_or(Rational(0));
        for (auto& e : xc) e = truncate(e, gx);
        for (auto& e : yc) e = truncate(e, gy);
    }
    auto at = [n](const std::vector<ClosedForm>& c, std::size_t a, std::size_t b, std::size_t r) -> const ClosedForm& {
        return c[(a * n + b) * n + r];
    };
    // A(ab,cd) = sum_{rs} x_{abr} eta^{rs} y_{scd}
    std::map<std::array<std::size_t, 4>, ClosedForm> memo;
    auto A = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) -> const ClosedForm& {
        std::array<std::size_t, 4> key{std::min(a, b), std::max(a, b), std::min(c, d), std::max(c, d)};
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        ClosedForm s;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t t = 0; t < n; ++t) {
                if (etaInv[r][t] == 0) continue;
                const ClosedForm& u = at(xc, a, b, r);
                const ClosedForm& v = at(yc, t, c, d);
                if (u.isZero() || v.isZero()) continue;
                s += (cut ? mulTruncated(u, v, *g) : u * v) * QRad(etaInv[r][t]);
            }
        return memo.emplace(key, std::move(s)).first->second;
    };
    std::vector<ClosedForm> out;
    for (const auto& [a, b, c, d] : wdvvIndexTuples(n)) {
        ClosedForm r = A(a, b, c, d) - A(d, b, c, a);
        if (cut) r = truncate(r, *g);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ClosedForm> wdvvResiduals(const ClosedForm& potential, std::size_t n,
                                      const Matrix<Rational>& etaInv, const Grading* g) {
    auto c = thirdDerivatives(potential, n);
    return wdvvBilinear(c, c, n, etaInv, g);
}

Report checkWDVV(const FrobeniusSpec& spec, const Tensors& t) {
    Report rep;
    rep.command = "wdvv-check";
    const Grading* g = spec.truncated() ? &*spec.grading : nullptr;
    std::vector<ClosedForm> res;
    for (auto& r : wdvvResiduals(spec.potential, spec.n(), t.etaInv, g))
        if (!r.isZero()) res.push_back(std::move(r));
    std::string detail = spec.truncated() ? "to grading cutoff " + toString(*spec.grading->order) : "exact";
    if (!res.empty()) detail += "; first discrepancy: " + toString(res.front(), spec.variables);
    rep.add("wdvv", res.empty(), static_cast<double>(res.size()), detail);
    bool unity = true;
    for (std::size_t a = 0; a < spec.n(); ++a)
        for (std::size_t b = 0; b < spec.n(); ++b)
            unity = unity && t.c(static_cast<int>(a), static_cast<int>(b), spec.unity) == ClosedForm(t.eta[a][b]);
    rep.add("c_unity_equals_eta", unity);
    bool sym = true;
    const std::size_t n = spec.n();
    for (std::size_t g2 = 0; g2 < n; ++g2)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                ClosedForm low;
                for (std::size_t s = 0; s < n; ++s)
                    if (t.eta[g2][s] != 0) low += t.cUp(static_cast<int>(s), static_cast<int>(a), static_cast<int>(b)) * QRad(t.eta[g2][s]);
                sym = sym && low == t.c(static_cast<int>(g2), static_cast<int>(a), static_cast<int>(b));
            }
    rep.add("c_lowered_symmetric", sym);
    return rep;
}

// --- Euler field ------------------------------------------------------------

std::vector<ClosedForm> eulerField(const FrobeniusSpec& spec) {
    std::vector<ClosedForm> e(spec.n());
    for (std::size_t a = 0; a < spec.n(); ++a) {
        e[a] = ClosedForm(spec.eulerShifts[a]);
        for (std::size_t b = 0; b < spec.n(); ++b)
            if (spec.eulerLinear[a][b] != 0)
                e[a] += ClosedForm::var(static_cast<int>(b)) * QRad(spec.eulerLinear[a][b]);
    }
    return e;
}

ClosedForm applyEuler(const FrobeniusSpec& spec, const ClosedForm& f) {
    auto e = eulerField(spec);
    ClosedForm r;
    for (std::size_t b = 0; b < spec.n(); ++b) r += e[b] * differentiate(f, static_cast<int>(b));
    return r;
}

Report eulerAction(const FrobeniusSpec& spec, const Tensors& t) {
    Report rep;
    rep.command = "euler-action";
    const std::size_t n = spec.n();
    auto cut = [&](const ClosedForm& f) { return spec.truncated() ? truncate(f, *spec.grading) : f; };
    ClosedForm ef = cut(applyEuler(spec, spec.potential) - spec.potential * QRad(Rational(3) - spec.charge));
    rep.add("euler_homogeneity", equalModQuadratic(ef, ClosedForm(), static_cast<int>(n)),
            0.0, "E(F) = (3-D)F + quadratic");
    // conformal identity on coordinate fields
    bool conf = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Rational lhs = 0;
            for (std::size_t g = 0; g < n; ++g)
                lhs += spec.eulerLinear[g][a] * t.eta[g][b] + spec.eulerLinear[g][b] * t.eta[g][a];
            conf = conf && lhs == (2 - spec.charge) * t.eta[a][b];
        }
    rep.add("euler_conformal_metric", conf);
    // [E, X.Y] - [E,X].Y - X.[E,Y] = X.Y on coordinate fields
    auto e = eulerField(spec);
    bool prod = true;
    for (std::size_t s = 0; s < n && prod; ++s)
        for (std::size_t a = 0; a < n && prod; ++a)
            for (std::size_t b = a; b < n && prod; ++b) {
                const ClosedForm& cab = t.cUp(static_cast<int>(s), static_cast<int>(a), static_cast<int>(b));
                ClosedForm lhs = applyEuler(spec, cab) - cab;
                for (std::size_t g = 0; g < n; ++g) {
                    if (spec.eulerLinear[s][g] != 0)
                        lhs -= t.cUp(static_cast<int>(g), static_cast<int>(a), static_cast<int>(b)) * QRad(spec.eulerLinear[s][g]);
                    if (spec.eulerLinear[g][a] != 0)
                        lhs += t.cUp(static_cast<int>(s), static_cast<int>(g), static_cast<int>(b)) * QRad(spec.eulerLinear[g][a]);
                    if (spec.eulerLinear[g][b] != 0)
                        lhs += t.cUp(static_cast<int>(s), static_cast<int>(a), static_cast<int>(g)) * QRad(spec.eulerLinear[g][b]);
                }
                prod = cut(lhs).isZero();
            }
    rep.add("euler_product_rule", prod);
    return rep;
}

Report validateSpec(const FrobeniusSpec& spec, const Tensors& t) {
    Report rep;
    rep.command = "validate";
    const std::size_t n = spec.n();
    const int iota = spec.unity;
    rep.add("mu_unity", spec.mu[iota] == -spec.charge / 2, 0.0, "mu_iota = -D/2");
    rep.add("shift_unity_zero", spec.eulerShifts[iota] == 0, 0.0, "r^iota = 0");
    bool diag = true, diagMatch = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && spec.eulerLinear[a][b] != 0) diag = false;
    if (diag)
        for (std::size_t a = 0; a < n; ++a)
            diagMatch = diagMatch && spec.eulerLinear[a][a] == 1 - spec.charge / 2 - spec.mu[a];
    rep.add("euler_linear_matches_mu", !diag || diagMatch, 0.0, "E^b = (1 - D/2 - mu_b) v^b + r^b");
    bool pairing = true;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (t.eta[a][b] != 0)
                pairing = pairing && (1 - spec.charge / 2 - spec.mu[a]) + (1 - spec.charge / 2 - spec.mu[b]) ==
                                         2 - spec.charge;
    rep.add("mu_eta_pairing", pairing);
    bool tri = true, skew = true;
    for (const auto& [s, r] : spec.R) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (r[a][b] != 0 && spec.mu[a] - spec.mu[b] != s) tri = false;
        auto lhs = matmul(matmul(t.etaInv, transpose(r)), t.eta);
        Rational sign = (s % 2 == 1) ? 1 : -1;  // (-1)^{s+1}
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (lhs[a][b] != sign * r[a][b]) skew = false;
    }
    rep.add("R_mu_triangular", tri, 0.0, "(R_s)^a_b != 0 only if mu_a - mu_b = s");
    rep.add("R_eta_skew", skew, 0.0, "eta^-1 R_s^T eta = (-1)^{s+1} R_s");
    // r^b = (R_1)^b_iota
    auto r1 = spec.rMatrix(1);
    bool shifts = true;
    for (std::size_t b = 0; b < n; ++b) shifts = shifts && spec.eulerShifts[b] == r1[b][iota];
    rep.add("shifts_match_R1", shifts, 0.0, "r^b = (R_1)^b_iota");
    return rep;
}

Matrix<ClosedForm> uMatrix(const FrobeniusSpec& spec, const Tensors& t) {
    const std::size_t n = spec.n();
    auto e = eulerField(spec);
    Matrix<ClosedForm> u(n, std::vector<ClosedForm>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t r = 0; r < n; ++r)
                u[a][b] += e[r] * t.cUp(static_cast<int>(a), static_cast<int>(r), static_cast<int>(b));
    return u;
}

CMatrix evaluateMatrix(const Matrix<ClosedForm>& m, const std::vector<std::complex<double>>& point) {
    CMatrix r(m.size());
    for (std::size_t a = 0; a < m.size(); ++a)
        for (const auto& x : m[a]) r[a].push_back(evaluate(x, point));
    return r;
}

}  // namespace frobwdvv
