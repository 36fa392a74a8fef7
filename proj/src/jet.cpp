#include "frobwdvv/jet.hpp"

#include <stdexcept>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

namespace {

std::size_t slot(std::size_t n, int a, int k) { return static_cast<std::size_t>(k - 1) * n + a; }

}  // namespace

JetPoly JetPoly::constant(std::size_t n, int K, const ClosedForm& c) {
    JetPoly p(n, K);
    p.add(JetMonomial(n * K, 0), c);
    return p;
}

JetPoly JetPoly::jet(std::size_t n, int K, int a, int k) {
    if (k == 0) return constant(n, K, ClosedForm::var(a));
    if (k < 0 || k > K) throw JetOrderOverflow("jet order " + std::to_string(k) + " outside 1.." + std::to_string(K));
    JetMonomial m(n * K, 0);
    m[slot(n, a, k)] = 1;
    JetPoly p(n, K);
    p.add(m, ClosedForm(1));
    return p;
}

int JetPoly::order() const {
    int best = 0;
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) best = std::max(best, static_cast<int>(i / n_) + 1);
    return best;
}

void JetPoly::add(const JetMonomial& m, const ClosedForm& c) {
    if (c.isZero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.isZero()) terms_.erase(it);
}

void JetPoly::requireSameSpace(const JetPoly& o) const {
    if (n_ != o.n_ || K_ != o.K_) throw std::invalid_argument("jet polynomials over different jet spaces");
}

JetPoly& JetPoly::operator+=(const JetPoly& o) {
    requireSameSpace(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

JetPoly& JetPoly::operator-=(const JetPoly& o) {
    requireSameSpace(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

JetPoly operator*(const JetPoly& a, const JetPoly& b) {
    a.requireSameSpace(b);
    JetPoly r(a.n_, a.K_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            JetMonomial m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            r.add(m, ca * cb);
        }
    return r;
}

JetPoly operator*(const JetPoly& a, const ClosedForm& c) {
    JetPoly r(a.n_, a.K_);
    for (const auto& [m, ca] : a.terms_) r.add(m, ca * c);
    return r;
}

JetPoly JetPoly::pow(unsigned e) const {
    JetPoly r = constant(n_, K_, ClosedForm(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

JetPoly JetPoly::dBase(int a) const {
    JetPoly r(n_, K_);
    for (const auto& [m, c] : terms_) r.add(m, differentiate(c, a));
    return r;
}

JetPoly JetPoly::dJet(int a, int k) const {
    if (k == 0) return dBase(a);
    JetPoly r(n_, K_);
    const std::size_t s = slot(n_, a, k);
    for (const auto& [m, c] : terms_) {
        if (m[s] == 0) continue;
        JetMonomial d = m;
        --d[s];
        r.add(d, c * QRad(static_cast<long>(m[s])));
    }
    return r;
}

std::complex<double> JetPoly::evaluate(const std::vector<std::complex<double>>& base,
                                       const std::vector<std::vector<std::complex<double>>>& jets) const {
    std::complex<double> sum = 0;
    for (const auto& [m, c] : terms_) {
        std::complex<double> t = frobwdvv::evaluate(c, base);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) t *= std::pow(jets.at(i % n_).at(i / n_), m[i]);
        sum += t;
    }
    return sum;
}

JetPoly totalX(const JetPoly& p) {
    const std::size_t n = p.nvars();
    const int K = p.maxOrder();
    JetPoly r(n, K);
    for (const auto& [m, c] : p.terms()) {
        for (std::size_t a = 0; a < n; ++a) {
            ClosedForm dc = differentiate(c, static_cast<int>(a));
            if (dc.isZero()) continue;
            JetMonomial t = m;
            ++t[slot(n, static_cast<int>(a), 1)];
            r.add(t, dc);
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            const int k = static_cast<int>(i / n) + 1;
            if (k == K) throw JetOrderOverflow("total derivative needs jets beyond order " + std::to_string(K));
            JetMonomial t = m;
            --t[i];
            ++t[i + n];
            r.add(t, c * QRad(static_cast<long>(m[i])));
        }
    }
    return r;
}

JetPoly substitute(const JetPoly& p, const std::vector<ClosedForm>& base,
                   const std::vector<std::vector<JetPoly>>& jets) {
    const std::size_t n = p.nvars();
    const int K = p.maxOrder();
    JetPoly r(n, K);
    for (const auto& [m, c] : p.terms()) {
        JetPoly t = JetPoly::constant(n, K, substitute(c, base));
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            const std::size_t a = i % n, k = i / n;
            if (a >= jets.size() || k >= jets[a].size())
                throw JetOrderOverflow("no image supplied for jet of order " + std::to_string(k + 1));
            t = t * jets[a][k].pow(static_cast<unsigned>(m[i]));
        }
        r += t;
    }
    return r;
}

JetPoly kappaFlow(const JetPoly& p, const Tensors& t, int kappa) {
    const std::size_t n = p.nvars();
    const int K = p.maxOrder();
    std::vector<JetPoly> w(n, JetPoly(n, K));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const ClosedForm& c = t.cUp(static_cast<int>(a), kappa, static_cast<int>(b));
            if (!c.isZero()) w[a] += JetPoly::jet(n, K, static_cast<int>(b), 1) * c;
        }
    const int ord = p.order();
    JetPoly r(n, K);
    for (std::size_t a = 0; a < n; ++a) {
        JetPoly wk = w[a];
        r += p.dBase(static_cast<int>(a)) * wk;
        for (int k = 1; k <= ord; ++k) {
            wk = totalX(wk);
            r += p.dJet(static_cast<int>(a), k) * wk;
        }
    }
    return r;
}

JetPoly flowSubstitute(const JetPoly& p, const Tensors& t, int kappa, const std::vector<ClosedForm>& hatMap) {
    const std::size_t n = p.nvars();
    const int K = p.maxOrder();
    const int ord = p.order();
    std::vector<std::vector<JetPoly>> jets(n);
    for (std::size_t a = 0; a < n; ++a) {
        JetPoly cur = JetPoly::constant(n, K, hatMap.at(a));
        for (int k = 1; k <= ord; ++k) {
            cur = kappaFlow(cur, t, kappa);
            jets[a].push_back(cur);
        }
    }
    return substitute(p, hatMap, jets);
}

JetLogSum JetLogSum::operator-(const JetLogSum& o) const {
    JetLogSum r = *this;
    for (const auto& [c, p] : o.logs) r.logs.emplace_back(-c, p);
    r.rest -= o.rest;
    return r;
}

std::complex<double> JetLogSum::evaluate(const std::vector<std::complex<double>>& base,
                                         const std::vector<std::vector<std::complex<double>>>& jets) const {
    std::complex<double> s = rest.evaluate(base, jets);
    for (const auto& [c, p] : logs) s += toDouble(c) * std::log(p.evaluate(base, jets));
    return s;
}

JetLogSum flowSubstitute(const JetLogSum& f, const Tensors& t, int kappa, const std::vector<ClosedForm>& hatMap) {
    JetLogSum r;
    for (const auto& [c, p] : f.logs) r.logs.emplace_back(c, flowSubstitute(p, t, kappa, hatMap));
    r.rest = flowSubstitute(f.rest, t, kappa, hatMap);
    return r;
}

namespace {

/// sum_i c_i D(P_i) prod_{j != i} P_j + D(rest) prod_j P_j for a derivation D.
template <class D>
JetFraction logDerivative(const JetLogSum& f, D&& d) {
    const std::size_t n = f.rest.nvars();
    const int K = f.rest.maxOrder();
    JetPoly all = JetPoly::constant(n, K, ClosedForm(1));
    for (const auto& lp : f.logs) all = all * lp.second;
    JetPoly r = d(f.rest) * all;
    for (std::size_t i = 0; i < f.logs.size(); ++i) {
        JetPoly others = JetPoly::constant(n, K, ClosedForm(1));
        for (std::size_t j = 0; j < f.logs.size(); ++j)
            if (j != i) others = others * f.logs[j].second;
        r += d(f.logs[i].second) * others * ClosedForm(f.logs[i].first);
    }
    return {r, all};
}

}  // namespace

JetFraction totalX(const JetLogSum& f) {
    return logDerivative(f, [](const JetPoly& p) { return totalX(p); });
}

JetPoly gradientNumerator(const JetLogSum& f, int a, int k) {
    return logDerivative(f, [&](const JetPoly& p) { return p.dJet(a, k); }).num;
}

}  // namespace frobwdvv
