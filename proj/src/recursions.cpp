#include "frobwdvv/recursions.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/frobenius.hpp"
#include "frobwdvv/io.hpp"

namespace frobwdvv {

Integer sigma(long m) {
    Integer s = 0;
    for (long d = 1; d * d <= m; ++d)
        if (m % d == 0) {
            s += d;
            if (d != m / d) s += m / d;
        }
    return s;
}

namespace {

using CF = ClosedForm;

CF var(int i) { return CF::var(i); }
CF pw(int i, const Rational& q) { return CF::power(i, q); }
CF ex(int i, const Rational& c) { return CF::expOf(i, c); }
CF num(const Rational& q) { return CF(q); }

std::string lbl(const std::string& p, long k) { return p + std::to_string(k); }
std::string lbl(const std::string& p, long k, long l) {
    return p + std::to_string(k) + "," + std::to_string(l);
}

Matrix<Rational> antiDiagonal(std::size_t n) {
    auto m = zeroMatrix<Rational>(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][n - 1 - i] = 1;
    return m;
}

/// One-component residual of a single-variable equation, computed in full and then cut.
Residual odeResidual(std::function<CF(const CF&)> eq, Grading g) {
    Residual r;
    r.value = [eq, g](const CF& f, const std::optional<Rational>& cut) {
        CF v = eq(f);
        if (cut) {
            Grading gg = g;
            gg.order = cut;
            v = truncate(v, gg);
        }
        return std::vector<CF>{v};
    };
    return r;
}

CF d(const CF& f) { return differentiate(f, 0); }
/// x d/dx in the single variable
CF th(const CF& f) { return var(0) * differentiate(f, 0); }

Grading oneVar(bool expGraded) {
    Grading g;
    g.weights = {expGraded ? Rational(0) : Rational(1)};
    g.expWeights = {expGraded ? Rational(1) : Rational(0)};
    return g;
}

void addAudit(RecursionOutput& out, const std::string& name, bool holds, const std::string& detail) {
    out.report.data["audits"].push_back({{"name", name}, {"holds", holds}, {"detail", detail}});
}

bool isPowerOfTwo(Integer d) {
    while (d > 1 && d % 2 == 0) d /= 2;
    return d == 1;
}

long indexOf(const std::string& label, std::size_t prefix) { return std::stol(label.substr(prefix)); }

}  // namespace

// --- plane curves ----------------------------------------------------------

RecursionOutput recursionNd(int maxD) {
    RecursionOutput out;
    out.name = "nd";
    out.report.command = "recursion nd";
    std::vector<Integer> n(maxD + 1, 0);
    if (maxD >= 1) n[1] = 1;
    for (int dd = 2; dd <= maxD; ++dd) {
        Integer s = 0;
        for (int d1 = 1; d1 < dd; ++d1) {
            int d2 = dd - d1;
            Rational t = Rational(d1 * d1 * d2 * d2) * binomial(Rational(3 * dd - 4), 3 * d1 - 2) -
                         Rational(d1 * d1 * d1 * d2) * binomial(Rational(3 * dd - 4), 3 * d1 - 1);
            s += n[d1] * n[d2] * t.get_num();
        }
        n[dd] = s;
    }
    for (int dd = 1; dd <= maxD; ++dd) out.values.emplace_back(lbl("N", dd), QRad(Rational(n[dd])));
    out.report.add("computed", true, 0.0, "N_1..N_" + std::to_string(maxD));
    return out;
}

RecursionOutput solveP2Fs(int maxD) {
    Ansatz a;
    a.name = "nd-ode";
    a.variables = {"s"};
    a.grading = oneVar(true);
    a.fixed = ex(0, 1) * QRad(Rational(1) / factorial(2));
    a.firstOrder = 2;
    a.slots = [](int dd) {
        return std::vector<Slot>{{dd, lbl("N", dd), ex(0, dd) * QRad(Rational(1) / factorial(3 * dd - 1))}};
    };
    a.residual = odeResidual(
        [](const CF& f) {
            CF f1 = d(f), f2 = d(f1), f3 = d(f2);
            return f3 * QRad(27L) - f2 * f3 * QRad(3L) + f1 * f3 * QRad(2L) - f2 * f2 - f2 * QRad(54L) +
                   f1 * QRad(33L) - f * QRad(6L);
        },
        a.grading);
    auto out = solveOrderByOrder(a, maxD);
    out.values.insert(out.values.begin(), {"N1", QRad(1L)});
    return out;
}

RecursionOutput solveP2Wdvv(int maxD) {
    Ansatz a;
    a.name = "nd-wdvv";
    a.variables = {"v1", "v2", "v3"};
    a.grading.weights = {0, 0, 0};
    a.grading.expWeights = {0, 1, 0};
    a.fixed = num(rat(1, 2)) * var(0).pow(2) * var(2) + num(rat(1, 2)) * var(0) * var(1).pow(2) +
              num(rat(1, 2)) * var(2).pow(2) * ex(1, 1);
    a.firstOrder = 2;
    a.slots = [](int dd) {
        return std::vector<Slot>{
            {dd, lbl("N", dd), pw(2, 3 * dd - 1) * ex(1, dd) * QRad(Rational(1) / factorial(3 * dd - 1))}};
    };
    a.residual = wdvvResidual(3, antiDiagonal(3), a.grading);
    auto out = solveOrderByOrder(a, maxD);
    out.values.insert(out.values.begin(), {"N1", QRad(1L)});
    return out;
}

RecursionOutput recursionCk(int maxK) {
    Ansatz a;
    a.name = "ck";
    a.variables = {"t"};
    a.grading = oneVar(false);
    a.fixed = num(1);
    a.slots = [](int k) { return std::vector<Slot>{{k, lbl("C", k), pw(0, k) * QRad(Rational(1) / factorial(3 * k))}}; };
    a.residual = odeResidual(
        [](const CF& p) {
            CF p1 = d(p), p2 = d(p1), p3 = d(p2), t = var(0);
            return pw(0, 4) * p3 * p2 * QRad(144L) + pw(0, 3) * (p3 * p1 + p2 * p2 * QRad(12L)) * QRad(24L) +
                   pw(0, 2) * (p3 * p + p1 * p2 * QRad(3L)) * QRad(27L) +
                   t * (p * p2 * QRad(9L) + p1 * p1) * QRad(6L) + p * p1 * QRad(6L) - num(1);
        },
        a.grading);
    auto out = solveOrderByOrder(a, maxK);
    out.values.insert(out.values.begin(), {"C0", QRad(1L)});
    bool allInt = true;
    std::string bad;
    for (const auto& [l, v] : out.values)
        if (!isInteger(v.toRational())) allInt = false, bad += " " + l;
    addAudit(out, "C_k integral", allInt, allInt ? "k <= " + std::to_string(maxK) : "non-integral:" + bad);
    return out;
}

RecursionOutput recursionMk(int maxK) {
    Ansatz a;
    a.name = "mk";
    a.variables = {"r"};
    a.grading = oneVar(false);
    a.fixed = CF();
    a.slots = [](int k) {
        return std::vector<Slot>{
            {k, lbl("M", k), pw(0, k) * QRad(pow(Rational(4), k - 1) / factorial(3 * k + 1))}};
    };
    a.residual = odeResidual(
        [](const CF& m) {
            CF m1 = th(m), m2 = th(m1), m3 = th(m2), r = var(0);
            return (num(3) + m1 * QRad(2L) + m2 * QRad(6L)) * m3 * QRad(9L) -
                   (m1 * QRad(4L) + m2 * QRad(3L)) * m2 * QRad(3L) - (num(1) + m1) * m1 * QRad(3L) -
                   r * (m3 * QRad(8L) - m1 * QRad(2L) + num(1));
        },
        a.grading);
    auto out = solveOrderByOrder(a, maxK);
    bool ok = true;
    std::string bad;
    for (const auto& [l, v] : out.values)
        if (!isPowerOfTwo(v.toRational().get_den())) ok = false, bad += " " + l;
    addAudit(out, "M_k integral away from 2", ok, ok ? "k <= " + std::to_string(maxK) : "odd denominators:" + bad);
    bool allInt = true;
    for (const auto& [l, v] : out.values) allInt = allInt && isInteger(v.toRational());
    addAudit(out, "M_k integral", allInt, "k <= " + std::to_string(maxK));
    return out;
}

RecursionOutput recursionQk(int maxK) {
    Ansatz a;
    a.name = "qk";
    a.variables = {"t"};
    a.grading = oneVar(false);
    a.fixed = pw(0, -1) * QRad(rat(1, 24)) + CF::logOf(0) * QRad(rat(1, 2)) - num(rat(3, 4));
    a.slots = [](int k) { return std::vector<Slot>{{k, lbl("Q", k), pw(0, k)}}; };
    a.residual = odeResidual(
        [](const CF& p) {
            CF p1 = th(p), p2 = th(p1), p3 = th(p2);
            return var(0) * (p1 + p2 * QRad(3L)) * (p1 * QRad(2L) + p2 * QRad(3L) + p3) * QRad(12L) - num(1);
        },
        a.grading);
    auto out = solveOrderByOrder(a, maxK);
    bool ok = true;
    std::string bad;
    for (const auto& [l, v] : out.values)
        if (!isInteger(v.toRational() * indexOf(l, 1))) ok = false, bad += " " + l;
    addAudit(out, "k Q_k integral", ok, ok ? "k <= " + std::to_string(maxK) : "non-integral:" + bad);
    return out;
}

RecursionOutput recursionWk(int maxK) {
    Ansatz a;
    a.name = "wk";
    a.variables = {"r"};
    a.grading = oneVar(false);
    a.fixed = CF::logOf(0) * QRad(rat(1, 2));
    a.slots = [](int k) { return std::vector<Slot>{{k, lbl("W", k), pw(0, k)}}; };
    a.residual = odeResidual(
        [](const CF& m) {
            CF m1 = th(m), m2 = th(m1), m3 = th(m2);
            CF lhs = m1 * (m2 + m3) * QRad(32L) - m2 * (m2 * QRad(13L) - m3 * QRad(12L)) * QRad(16L);
            CF rhs = var(0) * (m3 * QRad(27L) - m2 * QRad(27L) + m1 * QRad(6L));
            return lhs - rhs;
        },
        a.grading);
    auto out = solveOrderByOrder(a, maxK);
    bool ok = true;
    std::string bad;
    for (const auto& [l, v] : out.values) {
        long k = indexOf(l, 1);
        if (!isInteger(pow(Rational(2), 6 * k) * k * v.toRational() / 6)) ok = false, bad += " " + l;
    }
    addAudit(out, "2^{6k} k W_k / 6 integral", ok, ok ? "k <= " + std::to_string(maxK) : "non-integral:" + bad);
    return out;
}

RecursionOutput solveP2S2Wdvv(int maxK) {
    Ansatz a;
    a.name = "ck-wdvv";
    a.variables = {"w1", "w2", "w3"};
    a.grading.weights = {1, 0, 0};
    a.grading.expWeights = {0, 0, 0};
    a.fixed = var(1).pow(3) * QRad(rat(1, 6)) + var(0) * var(1) * var(2) + ex(2, 1);
    a.slots = [](int k) {
        return std::vector<Slot>{{k, lbl("C", k), pw(0, 3 * k) * ex(2, 1 - 2 * k) * QRad(Rational(1) / factorial(3 * k))}};
    };
    a.residual = wdvvResidual(3, antiDiagonal(3), a.grading);
    auto out = solveOrderByOrder(a, maxK);
    out.values.insert(out.values.begin(), {"C0", QRad(1L)});
    return out;
}

RecursionOutput solveP2S3Wdvv(int maxK) {
    Ansatz a;
    a.name = "mk-wdvv";
    a.variables = {"w1", "w2", "w3"};
    a.grading.weights = {0, 1, 0};
    a.grading.expWeights = {0, 0, 0};
    a.fixed = var(2).pow(2) * var(0) * QRad(rat(1, 2)) + var(1).pow(2) * var(2) * QRad(rat(1, 2)) +
              (CF::logOf(0) - num(1)) * var(0) * var(1);
    a.slots = [](int k) {
        return std::vector<Slot>{{k, lbl("M", k),
                                  pw(0, 1 - 2 * k) * pw(1, 1 + 3 * k) *
                                      QRad(pow(Rational(4), k - 1) / factorial(3 * k + 1))}};
    };
    a.residual = wdvvResidual(3, antiDiagonal(3), a.grading);
    auto out = solveOrderByOrder(a, maxK);
    return out;
}

// --- quadric ---------------------------------------------------------------

RecursionOutput recursionNkl(int maxDeg) {
    Ansatz a;
    a.name = "nkl";
    a.variables = {"v11", "v12", "v21", "v22"};
    a.grading.weights = {0, 0, 0, 0};
    a.grading.expWeights = {0, 1, 1, 0};
    a.fixed = var(0).pow(2) * var(3) * QRad(rat(1, 2)) + var(0) * var(1) * var(2) + var(3) * ex(1, 1) +
              var(3) * ex(2, 1);
    a.firstOrder = 2;
    a.slots = [](int j) {
        std::vector<Slot> s;
        for (int k = 0; k <= j; ++k)
            s.push_back({j, lbl("N", k, j - k),
                         pw(3, 2 * j - 1) * ex(1, k) * ex(2, j - k) * QRad(Rational(1) / factorial(2 * j - 1))});
        return s;
    };
    a.residual = wdvvResidual(4, antiDiagonal(4), a.grading);
    auto out = solveOrderByOrder(a, maxDeg);
    out.values.insert(out.values.begin(), {{"N0,1", QRad(1L)}, {"N1,0", QRad(1L)}});
    bool sym = true;
    for (const auto& [l, v] : out.values) {
        auto comma = l.find(',');
        std::string mirror = "N" + l.substr(comma + 1) + "," + l.substr(1, comma - 1);
        sym = sym && out.value(mirror) == v;
    }
    out.report.add("symmetric", sym, 0.0, "N_{k,l} = N_{l,k}");
    return out;
}

RecursionOutput solveCkl(int maxJ) {
    Ansatz a;
    a.name = "ckl";
    a.variables = {"w1", "w2", "w3", "w4"};
    a.grading.weights = {1, 0, 0, 0};
    a.grading.expWeights = {0, 0, 0, 0};
    CF w1 = var(0), w2 = var(1), w3 = var(2), w4 = var(3);
    a.fixed = w4.pow(2) * w1 * QRad(rat(1, 2)) + w2 * w3 * w4 + w1 * w2 * CF::logOf(1) + w1 * w3 * CF::logOf(2) -
              w1 * w2 - w1 * w3;
    a.firstOrder = 0;
    a.slots = [](int j) {
        std::vector<Slot> s;
        Rational e = Rational(5 + 2 * j) / 3;
        for (int k = 0; k <= j; ++k) {
            CF m = pw(0, e) * pw(1, -k) * pw(2, -(j - k));
            if (isInteger(e)) s.push_back({j, lbl("C", k, j - k), m * QRad(Rational(1) / factorial(toLong(e)))});
            else s.push_back({j, lbl("c", k, j - k), m});
        }
        return s;
    };
    a.residual = wdvvResidual(4, antiDiagonal(4), a.grading);
    auto out = solveOrderByOrder(a, maxJ);
    bool pattern = true;
    std::string bad;
    for (const auto& [l, v] : out.values) {
        auto comma = l.find(',');
        long k = std::stol(l.substr(1, comma - 1)), m = std::stol(l.substr(comma + 1));
        bool expectZero = (k + m) % 3 != 2 || 2 * k < m + 1 || 2 * m < k + 1;
        Rational q = v.toRational();
        bool ok = expectZero ? q == 0 : (q > 0 && isInteger(q));
        if (!ok) pattern = false, bad += " " + l + "=" + toString(q);
    }
    addAudit(out, "C_{k,l} vanishing/positivity pattern", pattern,
             pattern ? "k+l <= " + std::to_string(maxJ) : "exceptions:" + bad);
    return out;
}

RecursionOutput solveAmm(int maxOrder) {
    Ansatz a;
    a.name = "amm";
    a.variables = {"w1", "w2", "w3", "w4"};
    a.grading.weights = {0, 1, 0, 0};
    a.grading.expWeights = {0, 0, 0, 2};
    CF w1 = var(0), w2 = var(1), w3 = var(2), w4 = var(3);
    a.fixed = w3.pow(2) * w2 * QRad(rat(1, 2)) + w1 * w3 * w4 + w1 * w2 * (CF::logOf(0) - num(1)) + w2 * ex(3, 1);
    // a_{m1,m2} is ordered by m1 + 2 m2; small m1 is fixed late, so overshoot
    a.firstOrder = 4;
    a.trailingFree = true;
    a.lookahead = 4;
    a.slots = [](int o) {
        std::vector<Slot> s;
        for (int m2 = 1; o - 2 * m2 >= 1; ++m2) {
            int m1 = o - 2 * m2;
            s.push_back({o, lbl("a", m1, m2), pw(0, rat(3 - m1 - 2 * m2, 2)) * pw(1, m1) * ex(3, m2)});
        }
        return s;
    };
    // unity is the third coordinate: eta pairs (1,4) and (2,3)
    a.residual = wdvvResidual(4, antiDiagonal(4), a.grading);
    auto full = solveOrderByOrder(a, 2 * maxOrder + 1);
    RecursionOutput out = full;
    out.values.clear();
    out.values.emplace_back("a1,1", QRad(1L));
    for (const auto& [l, v] : full.values) {
        auto comma = l.find(',');
        if (std::stol(l.substr(1, comma - 1)) + std::stol(l.substr(comma + 1)) <= maxOrder) out.values.emplace_back(l, v);
    }
    for (int m1 = 1; m1 < maxOrder; ++m1)
        for (int m2 = 1; m1 + m2 <= maxOrder; ++m2)
            if (!out.has(lbl("a", m1, m2)))
                throw UnderdeterminedError("amm: " + lbl("a", m1, m2) + " not fixed by order " +
                                           std::to_string(2 * maxOrder + 1));
    bool pattern = true;
    std::string bad;
    for (const auto& [l, v] : out.values) {
        auto comma = l.find(',');
        long m1 = std::stol(l.substr(1, comma - 1)), m2 = std::stol(l.substr(comma + 1));
        Rational q = v.toRational();
        bool ok;
        if (m1 % 2 == 0) ok = q == 0;
        else {
            long k = (m1 - 1) / 2;
            Rational s = q * factorial(m1);
            ok = (m2 <= k || (k == 0 && m2 == 1)) ? (s > 0 && isInteger(s)) : s == 0;
        }
        if (!ok) pattern = false, bad += " " + l + "=" + toString(q);
    }
    addAudit(out, "a_{m1,m2} vanishing/positivity pattern", pattern,
             pattern ? "m1+m2 <= " + std::to_string(maxOrder) : "exceptions:" + bad);
    return out;
}

RecursionOutput solveChazy(int maxM) {
    Ansatz a;
    a.name = "chazy";
    a.variables = {"s"};
    a.grading = oneVar(true);
    a.fixed = num(rat(1, 6)) - ex(0, 1) * QRad(4L);
    a.firstOrder = 2;
    a.slots = [](int m) { return std::vector<Slot>{{m, lbl("g", m), ex(0, m)}}; };
    a.residual = odeResidual(
        [](const CF& g) {
            CF g1 = d(g), g2 = d(g1), g3 = d(g2);
            return g3 - g * g2 * QRad(6L) + g1 * g1 * QRad(9L);
        },
        a.grading);
    auto out = solveOrderByOrder(a, maxM);
    out.values.insert(out.values.begin(), {{"g0", QRad(rat(1, 6))}, {"g1", QRad(-4L)}});
    bool ok = true;
    for (const auto& [l, v] : out.values) {
        long m = indexOf(l, 1);
        if (m >= 1) ok = ok && v == QRad(Rational(-4 * sigma(m)));
    }
    out.report.add("divisor_sums", ok, 0.0, "g_m = -4 sigma(m) for 1 <= m <= " + std::to_string(maxM));
    return out;
}

std::vector<std::string> recursionNames() {
    return {"nd", "nd-ode", "nd-wdvv", "ck", "ck-wdvv", "mk", "mk-wdvv", "qk", "wk", "nkl", "ckl", "amm", "chazy"};
}

RecursionOutput runRecursion(const std::string& name, int maxIndex) {
    if (name == "nd") return recursionNd(maxIndex);
    if (name == "nd-ode") return solveP2Fs(maxIndex);
    if (name == "nd-wdvv") return solveP2Wdvv(maxIndex);
    if (name == "ck") return recursionCk(maxIndex);
    if (name == "ck-wdvv") return solveP2S2Wdvv(maxIndex);
    if (name == "mk") return recursionMk(maxIndex);
    if (name == "mk-wdvv") return solveP2S3Wdvv(maxIndex);
    if (name == "qk") return recursionQk(maxIndex);
    if (name == "wk") return recursionWk(maxIndex);
    if (name == "nkl") return recursionNkl(maxIndex);
    if (name == "ckl") return solveCkl(maxIndex);
    if (name == "amm") return solveAmm(maxIndex);
    if (name == "chazy") return solveChazy(maxIndex);
    throw SpecParseError("unknown recursion '" + name + "'");
}

// --- generator-backed potentials --------------------------------------------

namespace {

int indexArg(const nlohmann::json& args, const std::string& key) {
    if (!args.contains(key)) throw SpecParseError("generator argument '" + key + "' missing");
    return args[key].get<int>() - 1;
}

const RecursionOutput& cached(const std::string& name, int maxIndex) {
    static std::map<std::pair<std::string, int>, RecursionOutput> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(name, maxIndex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, runRecursion(name, maxIndex)).first;
    return it->second;
}

}  // namespace

ClosedForm materializePotential(const std::string& generator, const nlohmann::json& args, const Grading& grading) {
    if (!grading.order) throw SpecParseError("generator needs a grading order");
    const long n = toLong(Rational(grading.order->get_num() / grading.order->get_den()));
    CF f;
    if (generator == "p2_gw") {
        int e = indexArg(args, "exp_index"), p = indexArg(args, "power_index");
        if (n < 1) return f;
        const auto& nd = cached("nd", static_cast<int>(n));
        for (long dd = 1; dd <= n; ++dd)
            f += pw(p, 3 * dd - 1) * ex(e, dd) * (nd.value(lbl("N", dd)) * QRad(Rational(1) / factorial(3 * dd - 1)));
    } else if (generator == "p1xp1_gw") {
        int e1 = indexArg(args, "exp_index_1"), e2 = indexArg(args, "exp_index_2"), p = indexArg(args, "power_index");
        if (n < 1) return f;
        const auto& nkl = cached("nkl", static_cast<int>(std::max(2L, n)));
        for (long j = 1; j <= n; ++j)
            for (long k = 0; k <= j; ++k) {
                const QRad& v = nkl.value(lbl("N", k, j - k));
                if (!v.isZero())
                    f += pw(p, 2 * j - 1) * ex(e1, k) * ex(e2, j - k) * (v * QRad(Rational(1) / factorial(2 * j - 1)));
            }
    } else if (generator == "ccc_chazy") {
        int p = indexArg(args, "power_index"), e = indexArg(args, "exp_index");
        CF gamma = num(rat(1, 6));
        for (long m = 1; m <= n; ++m) gamma -= ex(e, m) * QRad(Rational(4 * sigma(m)));
        f = pw(p, 4) * gamma * QRad(rat(-1, 16));
    } else {
        throw SpecParseError("unknown generator '" + generator + "'");
    }
    return f;
}

}  // namespace frobwdvv
