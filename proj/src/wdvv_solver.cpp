#include "frobwdvv/wdvv_solver.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/frobenius.hpp"

namespace frobwdvv {

const QRad& RecursionOutput::value(const std::string& label) const {
    for (const auto& [l, v] : values)
        if (l == label) return v;
    throw std::out_of_range(name + ": no value " + label);
}

bool RecursionOutput::has(const std::string& label) const {
    for (const auto& [l, v] : values)
        if (l == label) return true;
    return false;
}

namespace {

using Residuals = std::vector<ClosedForm>;

Residuals linearPart(const Residual& r, const ClosedForm& f, const ClosedForm& m, const std::optional<Rational>& cut) {
    if (r.linear) return r.linear(f, m, cut);
    Residuals p = r.value(f + m, cut), q = r.value(f - m, cut);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (p[i] - q[i]) * QRad(rat(1, 2));
    return p;
}

Residuals quadraticPart(const Residual& r, const ClosedForm& a, const ClosedForm& b, const std::optional<Rational>& cut) {
    Residuals s = r.value(a + b, cut), d = r.value(a - b, cut), p = r.value(b, cut), q = r.value(-b, cut);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = (s[i] - d[i] - p[i] + q[i]) * QRad(rat(1, 4));
    return s;
}

std::optional<Rational> lowestOf(const Residuals& rs, const Grading& g) {
    std::optional<Rational> low;
    for (const auto& x : rs)
        if (auto l = lowestDegree(x, g); l && (!low || *l < *low)) low = l;
    return low;
}

struct Rref {
    std::vector<std::vector<QRad>> rows;  // reduced rows, augmented last column
    std::vector<int> pivot;               // pivot column per row
    int inconsistentRow = -1;
};

Rref reduce(std::vector<std::vector<QRad>> m, std::size_t cols) {
    Rref out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c].isZero()) ++p;
        if (p == m.size()) continue;
        std::swap(m[r], m[p]);
        QRad inv = m[r][c].inverse();
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].isZero()) continue;
            QRad f = m[i][c];
            for (std::size_t j = c; j <= cols; ++j)
                if (!m[r][j].isZero()) m[i][j] -= f * m[r][j];
        }
        out.pivot.push_back(static_cast<int>(c));
        ++r;
    }
    for (std::size_t i = r; i < m.size(); ++i)
        if (!m[i][cols].isZero()) {
            out.inconsistentRow = static_cast<int>(i);
            break;
        }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

}  // namespace

RecursionOutput solveOrderByOrder(const Ansatz& a, int maxOrder) {
    RecursionOutput out;
    out.name = a.name;
    out.report.command = "solve " + a.name;
    const Grading& g = a.grading;
    ClosedForm f = a.fixed;
    std::vector<Slot> pending;
    std::map<int, std::vector<Slot>> slotCache;
    auto slotsAt = [&](int o) -> const std::vector<Slot>& {
        auto it = slotCache.find(o);
        if (it == slotCache.end()) it = slotCache.emplace(o, a.slots(o)).first;
        return it->second;
    };
    auto entryOf = [&](const std::vector<Slot>& ss) {
        std::optional<Rational> e;
        for (const auto& s : ss)
            if (auto l = lowestOf(linearPart(a.residual, f, s.monomial, std::nullopt), g); l && (!e || *l < *e))
                e = l;
        return e;
    };
    std::size_t equationsUsed = 0;
    Rational hi;
    for (int o = a.firstOrder; o <= maxOrder; ++o) {
        for (const auto& s : slotsAt(o)) pending.push_back(s);
        std::optional<Rational> e;
        for (int ahead = 1; ahead <= std::max(1, a.lookahead); ++ahead)
            if (auto x = entryOf(slotsAt(o + ahead)); x && (!e || *x < *e)) e = x;
        if (!e) throw UnderdeterminedError(a.name + ": unknowns of order " + std::to_string(o + 1) +
                                           " never enter the equations");
        hi = *e;
        Rational cut = hi;
        auto below = [&](const GenMonomial& m) { return m.degree(g) < hi; };

        for (std::size_t i = 0; i < pending.size(); ++i)
            for (std::size_t j = i; j < pending.size(); ++j)
                for (const auto& q : quadraticPart(a.residual, pending[i].monomial, pending[j].monomial, cut))
                    for (const auto& [m, c] : q.terms())
                        if (below(m))
                            throw NonAffineError(a.name + ": " + pending[i].label + " * " + pending[j].label +
                                                 " appears below degree " + toString(hi));

        Residuals r0 = a.residual.value(f, cut);
        std::vector<Residuals> lin;
        for (const auto& s : pending) lin.push_back(linearPart(a.residual, f, s.monomial, cut));
        std::map<std::pair<std::size_t, GenMonomial>, std::vector<QRad>> eqs;
        const std::size_t k = pending.size();
        auto row = [&](std::size_t comp, const GenMonomial& m) -> std::vector<QRad>& {
            auto [it, ins] = eqs.try_emplace({comp, m}, std::vector<QRad>(k + 1));
            return it->second;
        };
        for (std::size_t c = 0; c < r0.size(); ++c)
            for (const auto& [m, v] : r0[c].terms())
                if (below(m)) row(c, m)[k] = -v;
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t c = 0; c < lin[j].size(); ++c)
                for (const auto& [m, v] : lin[j][c].terms())
                    if (below(m)) row(c, m)[j] = v;
        std::vector<std::vector<QRad>> mat;
        std::vector<Rational> degs;
        for (auto& [key, v] : eqs) {
            mat.push_back(std::move(v));
            degs.push_back(key.second.degree(g));
        }
        equationsUsed += mat.size();
        Rref red = reduce(mat, k);
        if (red.inconsistentRow >= 0) {
            std::ostringstream os;
            os << a.name << ": equations up to degree " << toString(hi) << " at order " << o
               << " are inconsistent";
            throw InconsistentSystemError(os.str());
        }
        std::vector<bool> fixedNow(k, false);
        for (std::size_t i = 0; i < red.rows.size(); ++i) {
            bool determined = true;
            for (std::size_t j = 0; j < k; ++j)
                if (static_cast<int>(j) != red.pivot[i] && !red.rows[i][j].isZero()) determined = false;
            if (!determined) continue;
            std::size_t p = red.pivot[i];
            fixedNow[p] = true;
            const QRad& x = red.rows[i][k];
            if (!x.isZero()) f += pending[p].monomial * x;
            out.values.emplace_back(pending[p].label, x);
        }
        std::vector<Slot> rest;
        for (std::size_t j = 0; j < k; ++j)
            if (!fixedNow[j]) rest.push_back(pending[j]);
        pending = std::move(rest);
    }
    if (!pending.empty() && a.trailingFree) {
        // free unknowns were set to zero, so only check below where they enter
        for (const auto& s : pending) {
            out.report.data["undetermined"].push_back(s.label);
            if (auto l = lowestOf(linearPart(a.residual, f, s.monomial, std::nullopt), g); l && *l < hi) hi = *l;
        }
        pending.clear();
    }
    if (!pending.empty()) {
        std::string names;
        for (const auto& s : pending) names += " " + s.label;
        throw UnderdeterminedError(a.name + ": left undetermined:" + names);
    }
    // Full (nonlinear) check of every equation the solved orders control.
    std::size_t bad = 0;
    std::string first;
    for (const auto& r : a.residual.value(f, hi))
        for (const auto& [m, c] : r.terms())
            if (m.degree(g) < hi) {
                if (!bad) first = toString(ClosedForm(m, c), a.variables);
                ++bad;
            }
    if (bad) throw InconsistentSystemError(a.name + ": solution leaves residual " + first);
    out.solution = f;
    out.report.add("solved_orders", true, 0.0,
                   std::to_string(a.firstOrder) + ".." + std::to_string(maxOrder) + ", " +
                       std::to_string(out.values.size()) + " unknowns");
    out.report.add("all_equations_satisfied", true, 0.0,
                   std::to_string(equationsUsed) + " equations below degree " + toString(hi));
    return out;
}

Residual wdvvResidual(std::size_t n, Matrix<Rational> etaInv, Grading g) {
    Residual r;
    r.value = [n, etaInv, g](const ClosedForm& f, const std::optional<Rational>& cut) {
        Grading gg = g;
        gg.order = cut;
        return wdvvResiduals(f, n, etaInv, cut ? &gg : nullptr);
    };
    r.linear = [n, etaInv, g](const ClosedForm& f, const ClosedForm& m, const std::optional<Rational>& cut) {
        Grading gg = g;
        gg.order = cut;
        const Grading* gp = cut ? &gg : nullptr;
        auto cf = thirdDerivatives(f, n), cm = thirdDerivatives(m, n);
        auto x = wdvvBilinear(cf, cm, n, etaInv, gp), y = wdvvBilinear(cm, cf, n, etaInv, gp);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
        return x;
    };
    return r;
}

}  // namespace frobwdvv
