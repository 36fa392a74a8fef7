#include "frobwdvv/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

Grading Grading::total(std::size_t n, std::optional<Rational> order) {
    Grading g;
    g.weights.assign(n, Rational(1));
    g.order = std::move(order);
    return g;
}

// --- GenMonomial ------------------------------------------------------------

namespace {

template <class T>
void setEntry(std::vector<std::pair<int, T>>& v, int var, const T& val) {
    auto it = std::lower_bound(v.begin(), v.end(), var,
                               [](const auto& a, int k) { return a.first < k; });
    bool present = it != v.end() && it->first == var;
    if (val == 0) {
        if (present) v.erase(it);
    } else if (present) {
        it->second = val;
    } else {
        v.insert(it, {var, val});
    }
}

template <class T>
T getEntry(const std::vector<std::pair<int, T>>& v, int var) {
    auto it = std::lower_bound(v.begin(), v.end(), var,
                               [](const auto& a, int k) { return a.first < k; });
    return (it != v.end() && it->first == var) ? it->second : T(0);
}

template <class T>
std::vector<std::pair<int, T>> mergeAdd(const std::vector<std::pair<int, T>>& a,
                                        const std::vector<std::pair<int, T>>& b) {
    std::vector<std::pair<int, T>> r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            T s = a[i].second + b[j].second;
            if (s != 0) r.emplace_back(a[i].first, s);
            ++i;
            ++j;
        }
    }
    return r;
}

template <class T>
int cmpVec(const std::vector<std::pair<int, T>>& a, const std::vector<std::pair<int, T>>& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].first != b[i].first) return a[i].first < b[i].first ? -1 : 1;
        if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

}  // namespace

GenMonomial GenMonomial::power(int v, const Rational& q) {
    GenMonomial m;
    m.setPower(v, q);
    return m;
}

GenMonomial GenMonomial::log(int v, int k) {
    GenMonomial m;
    m.setLog(v, k);
    return m;
}

GenMonomial GenMonomial::exp(int v, const Rational& c) {
    GenMonomial m;
    m.setExp(v, c);
    return m;
}

Rational GenMonomial::power(int v) const { return getEntry(powers, v); }
int GenMonomial::logPower(int v) const { return getEntry(logs, v); }
Rational GenMonomial::expCoef(int v) const { return getEntry(exps, v); }
void GenMonomial::setPower(int v, const Rational& q) {
    Rational c = q;
    c.canonicalize();
    setEntry(powers, v, c);
}
void GenMonomial::setLog(int v, int k) {
    if (k < 0) throw NotRepresentableError("negative log power");
    setEntry(logs, v, k);
}
void GenMonomial::setExp(int v, const Rational& c) {
    Rational k = c;
    k.canonicalize();
    setEntry(exps, v, k);
}

bool GenMonomial::isPolynomial() const {
    if (!logs.empty() || !exps.empty()) return false;
    return std::all_of(powers.begin(), powers.end(),
                       [](const auto& p) { return isInteger(p.second) && p.second > 0; });
}

int GenMonomial::maxVar() const {
    int m = -1;
    if (!powers.empty()) m = std::max(m, powers.back().first);
    if (!logs.empty()) m = std::max(m, logs.back().first);
    if (!exps.empty()) m = std::max(m, exps.back().first);
    return m;
}

Rational GenMonomial::degree(const Grading& g) const {
    Rational d = 0;
    for (const auto& [v, q] : powers) d += g.weight(v) * q;
    for (const auto& [v, c] : exps) d += g.expWeight(v) * c;
    return d;
}

GenMonomial operator*(const GenMonomial& a, const GenMonomial& b) {
    GenMonomial r;
    r.powers = mergeAdd(a.powers, b.powers);
    r.logs = mergeAdd(a.logs, b.logs);
    r.exps = mergeAdd(a.exps, b.exps);
    return r;
}

bool operator==(const GenMonomial& a, const GenMonomial& b) {
    return a.powers == b.powers && a.logs == b.logs && a.exps == b.exps;
}

bool operator<(const GenMonomial& a, const GenMonomial& b) {
    if (int c = cmpVec(a.powers, b.powers)) return c < 0;
    if (int c = cmpVec(a.logs, b.logs)) return c < 0;
    return cmpVec(a.exps, b.exps) < 0;
}

// --- ClosedForm -------------------------------------------------------------

ClosedForm::ClosedForm(const QRad& c) {
    if (!c.isZero()) terms_.emplace(GenMonomial::one(), c);
}

ClosedForm::ClosedForm(const Rational& c) : ClosedForm(QRad(c)) {}

ClosedForm::ClosedForm(const GenMonomial& m, const QRad& c) {
    if (!c.isZero()) terms_.emplace(m, c);
}

bool ClosedForm::isConstant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.isOne());
}

QRad ClosedForm::constantTerm() const { return coeff(GenMonomial::one()); }

QRad ClosedForm::coeff(const GenMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? QRad() : it->second;
}

int ClosedForm::maxVar() const {
    int m = -1;
    for (const auto& [mono, c] : terms_) m = std::max(m, mono.maxVar());
    return m;
}

void ClosedForm::addTerm(const GenMonomial& m, const QRad& c) {
    if (c.isZero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.isZero()) terms_.erase(it);
    }
}

ClosedForm ClosedForm::operator-() const {
    ClosedForm r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

ClosedForm& ClosedForm::operator+=(const ClosedForm& o) {
    for (const auto& [m, c] : o.terms_) addTerm(m, c);
    return *this;
}

ClosedForm& ClosedForm::operator-=(const ClosedForm& o) {
    for (const auto& [m, c] : o.terms_) addTerm(m, -c);
    return *this;
}

ClosedForm& ClosedForm::operator*=(const ClosedForm& o) {
    *this = *this * o;
    return *this;
}

ClosedForm& ClosedForm::operator*=(const QRad& c) {
    if (c.isZero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, x] : terms_) x *= c;
    return *this;
}

ClosedForm operator*(const ClosedForm& a, const ClosedForm& b) {
    ClosedForm r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.addTerm(ma * mb, ca * cb);
    return r;
}

ClosedForm ClosedForm::pow(unsigned k) const {
    ClosedForm r(1), base = *this;
    while (k) {
        if (k & 1) r *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return r;
}

ClosedForm mulTruncated(const ClosedForm& a, const ClosedForm& b, const Grading& g) {
    if (!g.order) return a * b;
    std::vector<std::pair<Rational, const std::pair<const GenMonomial, QRad>*>> tb;
    tb.reserve(b.size());
    for (const auto& t : b.terms()) tb.emplace_back(t.first.degree(g), &t);
    std::sort(tb.begin(), tb.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    ClosedForm r;
    for (const auto& [ma, ca] : a.terms()) {
        Rational budget = *g.order - ma.degree(g);
        for (const auto& [db, t] : tb) {
            if (db > budget) break;
            r.addTerm(ma * t->first, ca * t->second);
        }
    }
    return r;
}

ClosedForm truncate(const ClosedForm& f, const Grading& g) {
    if (!g.order) return f;
    ClosedForm r;
    for (const auto& [m, c] : f.terms())
        if (m.degree(g) <= *g.order) r.addTerm(m, c);
    return r;
}

ClosedForm homogeneousPart(const ClosedForm& f, const Grading& g, const Rational& deg) {
    ClosedForm r;
    for (const auto& [m, c] : f.terms())
        if (m.degree(g) == deg) r.addTerm(m, c);
    return r;
}

std::optional<Rational> lowestDegree(const ClosedForm& f, const Grading& g) {
    std::optional<Rational> best;
    for (const auto& [m, c] : f.terms()) {
        Rational d = m.degree(g);
        if (!best || d < *best) best = d;
    }
    return best;
}

ClosedForm differentiate(const ClosedForm& f, int v) {
    ClosedForm r;
    for (const auto& [m, c] : f.terms()) {
        Rational q = m.power(v);
        int k = m.logPower(v);
        Rational e = m.expCoef(v);
        if (q != 0) {
            GenMonomial n = m;
            n.setPower(v, q - 1);
            r.addTerm(n, c * QRad(q));
        }
        if (k != 0) {
            GenMonomial n = m;
            n.setPower(v, q - 1);
            n.setLog(v, k - 1);
            r.addTerm(n, c * QRad(static_cast<long>(k)));
        }
        if (e != 0) r.addTerm(m, c * QRad(e));
    }
    return r;
}

namespace {

// Antiderivative of v^q (log v)^k.
ClosedForm integratePowLog(int v, const Rational& q, int k) {
    if (q == -1) {
        GenMonomial m = GenMonomial::log(v, k + 1);
        return {m, QRad(Rational(1, k + 1))};
    }
    GenMonomial m = GenMonomial::power(v, q + 1);
    m.setLog(v, k);
    ClosedForm r(m, QRad(Rational(1) / (q + 1)));
    if (k > 0) r -= integratePowLog(v, q, k - 1) * QRad(Rational(k) / (q + 1));
    return r;
}

// Antiderivative of v^n e^{cv}, n >= 0.
ClosedForm integratePowExp(int v, long n, const Rational& c) {
    ClosedForm r;
    Rational coef = 1 / c;  // (-1)^j n!/(n-j)! / c^{j+1}
    for (long j = 0; j <= n; ++j) {
        GenMonomial m = GenMonomial::exp(v, c);
        m.setPower(v, Rational(n - j));
        r.addTerm(m, QRad(coef));
        coef *= -Rational(n - j) / c;
    }
    return r;
}

}  // namespace

ClosedForm integrate(const ClosedForm& f, int v) {
    ClosedForm r;
    for (const auto& [m, c] : f.terms()) {
        Rational q = m.power(v);
        int k = m.logPower(v);
        Rational e = m.expCoef(v);
        GenMonomial rest = m;
        rest.setPower(v, 0);
        rest.setLog(v, 0);
        rest.setExp(v, 0);
        ClosedForm part;
        if (e == 0) {
            part = integratePowLog(v, q, k);
        } else if (k == 0 && isInteger(q) && q >= 0) {
            part = integratePowExp(v, toLong(q), e);
        } else {
            throw IntegrationError("no closed antiderivative for v^q log^k e^{cv} with q=" +
                                   q.get_str() + ", k=" + std::to_string(k));
        }
        r += part * ClosedForm(rest, c);
    }
    return r;
}

std::complex<double> evaluate(const ClosedForm& f, const std::vector<std::complex<double>>& point) {
    using cd = std::complex<double>;
    auto at = [&](int v) -> cd {
        if (v >= static_cast<int>(point.size()))
            throw BranchPointError("evaluation point has no value for variable " + std::to_string(v));
        return point[v];
    };
    cd sum = 0;
    for (const auto& [m, c] : f.terms()) {
        cd t = c.toDouble();
        for (const auto& [v, q] : m.powers) {
            cd z = at(v);
            if (isInteger(q)) {
                long n = toLong(q);
                if (z == 0.0 && n < 0) throw BranchPointError("negative power at 0");
                t *= std::pow(z, static_cast<int>(n));
            } else {
                if (z == 0.0) throw BranchPointError("fractional power at its branch point");
                t *= std::exp(q.get_d() * std::log(z));
            }
        }
        for (const auto& [v, k] : m.logs) {
            cd z = at(v);
            if (z == 0.0) throw BranchPointError("log at 0");
            t *= std::pow(std::log(z), k);
        }
        for (const auto& [v, e] : m.exps) t *= std::exp(e.get_d() * at(v));
        sum += t;
    }
    return sum;
}

bool equalModQuadratic(const ClosedForm& f, const ClosedForm& g, int nvars) {
    ClosedForm d = f - g;
    for (int a = 0; a < nvars; ++a) {
        ClosedForm da = differentiate(d, a);
        for (int b = a; b < nvars; ++b) {
            ClosedForm dab = differentiate(da, b);
            for (int c = b; c < nvars; ++c)
                if (!differentiate(dab, c).isZero()) return false;
        }
    }
    return true;
}

// --- substitution -----------------------------------------------------------

namespace {

bool singleTerm(const ClosedForm& f) { return f.size() == 1; }

ClosedForm monomialPower(const ClosedForm& f, const Rational& q) {
    const auto& [m, c] = *f.terms().begin();
    if (!m.logs.empty() && !isInteger(q))
        throw SubstitutionError("non-integer power of a log factor");
    if (!m.logs.empty()) {
        if (q < 0) throw SubstitutionError("negative power of a log factor");
        return f.pow(static_cast<unsigned>(toLong(q)));
    }
    GenMonomial r;
    for (const auto& [v, p] : m.powers) r.setPower(v, p * q);
    for (const auto& [v, e] : m.exps) r.setExp(v, e * q);
    QRad cq;
    try {
        cq = c.pow(q);
    } catch (const NotRepresentableError& e) {
        throw SubstitutionError(e.what());
    }
    return {r, cq};
}

ClosedForm logOfValue(const ClosedForm& f) {
    if (!singleTerm(f)) throw SubstitutionError("log of a multi-term value");
    const auto& [m, c] = *f.terms().begin();
    if (c != QRad(1L)) throw SubstitutionError("log of a non-unit constant is not representable");
    if (!m.logs.empty()) throw SubstitutionError("log of a log");
    ClosedForm r;
    for (const auto& [v, p] : m.powers) r.addTerm(GenMonomial::log(v), QRad(p));
    for (const auto& [v, e] : m.exps) r.addTerm(GenMonomial::power(v, 1), QRad(e));
    return r;
}

ClosedForm expOfValue(const ClosedForm& f, const Rational& mult) {
    GenMonomial r;
    for (const auto& [m, c] : f.terms()) {
        if (!c.isRational()) throw SubstitutionError("exp of an irrational multiple");
        Rational a = c.toRational() * mult;
        if (m.isOne()) throw SubstitutionError("exp of a nonzero constant is not representable");
        if (m.powers.empty() && m.exps.empty() && m.logs.size() == 1 && m.logs[0].second == 1) {
            int w = m.logs[0].first;
            r.setPower(w, r.power(w) + a);
        } else if (m.logs.empty() && m.exps.empty() && m.powers.size() == 1 &&
                   m.powers[0].second == 1) {
            int w = m.powers[0].first;
            r.setExp(w, r.expCoef(w) + a);
        } else {
            throw SubstitutionError("exp of a non-linear, non-log term");
        }
    }
    return {r};
}

}  // namespace

ClosedForm substitute(const ClosedForm& f, const std::vector<ClosedForm>& values) {
    std::vector<std::map<Rational, ClosedForm>> powCache(values.size());
    auto valueOf = [&](int v) -> const ClosedForm& {
        if (v >= static_cast<int>(values.size()))
            throw SubstitutionError("no value for variable " + std::to_string(v));
        return values[v];
    };
    auto powerOf = [&](int v, const Rational& q) -> const ClosedForm& {
        auto& cache = powCache[v];
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
        const ClosedForm& x = valueOf(v);
        ClosedForm r;
        if (x.isZero()) {
            if (q < 0 || !isInteger(q)) throw SubstitutionError("singular power of zero");
            r = ClosedForm();
        } else if (singleTerm(x)) {
            r = monomialPower(x, q);
        } else if (isInteger(q) && q >= 0) {
            r = x.pow(static_cast<unsigned>(toLong(q)));
        } else {
            throw SubstitutionError("non-integer power of a multi-term value");
        }
        return cache.emplace(q, std::move(r)).first->second;
    };
    ClosedForm out;
    for (const auto& [m, c] : f.terms()) {
        ClosedForm t(c);
        for (const auto& [v, q] : m.powers) t *= powerOf(v, q);
        for (const auto& [v, k] : m.logs) t *= logOfValue(valueOf(v)).pow(static_cast<unsigned>(k));
        for (const auto& [v, e] : m.exps) t *= expOfValue(valueOf(v), e);
        out += t;
    }
    return out;
}

// --- printing ---------------------------------------------------------------

std::string toString(const GenMonomial& m, const std::vector<std::string>& names) {
    auto name = [&](int v) {
        return v < static_cast<int>(names.size()) ? names[v] : "x" + std::to_string(v + 1);
    };
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << "*";
        first = false;
    };
    for (const auto& [v, q] : m.powers) {
        sep();
        os << name(v);
        if (q != 1) os << "^" << (isInteger(q) ? q.get_str() : "(" + q.get_str() + ")");
    }
    for (const auto& [v, k] : m.logs) {
        sep();
        os << "log(" << name(v) << ")";
        if (k != 1) os << "^" << k;
    }
    for (const auto& [v, e] : m.exps) {
        sep();
        os << "exp(";
        if (e != 1) os << e.get_str() << "*";
        os << name(v) << ")";
    }
    if (first) os << "1";
    return os.str();
}

std::string toString(const ClosedForm& f, const std::vector<std::string>& names) {
    if (f.isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.toString();
        if (m.isOne()) {
            os << cs;
        } else {
            if (c != QRad(1L)) os << "(" << cs << ")*";
            os << toString(m, names);
        }
    }
    return os.str();
}

}  // namespace frobwdvv
