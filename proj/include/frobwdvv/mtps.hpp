#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/linalg.hpp"
#include "frobwdvv/scalar.hpp"
#include "frobwdvv/symfun.hpp"

namespace frobwdvv {

using MultiIndex = std::vector<int>;

/// Power series in offsets x = v - center, holding every term of weighted
/// degree <= order and nothing above it. order is also the precision: all
/// stored terms are correct.
template <class S>
class TruncSeries {
public:
    using Ops = ScalarOps<S>;

    TruncSeries() = default;
    TruncSeries(std::vector<S> center, std::vector<Rational> weights, Rational order)
        : center_(std::move(center)), weights_(std::move(weights)), order_(std::move(order)) {
        if (center_.size() != weights_.size())
            throw CenterMismatchError("center and weights differ in length");
        for (const auto& w : weights_)
            if (w <= 0) throw CenterMismatchError("grading weights must be positive");
    }

    static TruncSeries constant(const S& c, std::vector<S> center, std::vector<Rational> weights,
                                Rational order) {
        TruncSeries r(std::move(center), std::move(weights), std::move(order));
        r.add(MultiIndex(r.nvars(), 0), c);
        return r;
    }
    /// The offset variable x_i.
    static TruncSeries offset(int i, std::vector<S> center, std::vector<Rational> weights,
                              Rational order) {
        TruncSeries r(std::move(center), std::move(weights), std::move(order));
        MultiIndex k(r.nvars(), 0);
        k[i] = 1;
        r.add(k, Ops::fromRational(1));
        return r;
    }
    TruncSeries zeroLike() const { return TruncSeries(center_, weights_, order_); }

    std::size_t nvars() const { return center_.size(); }
    const std::vector<S>& center() const { return center_; }
    const std::vector<Rational>& weights() const { return weights_; }
    const Rational& order() const { return order_; }
    const std::map<MultiIndex, S>& coeffs() const { return coeffs_; }
    bool isZero() const { return coeffs_.empty(); }

    Rational degree(const MultiIndex& k) const {
        Rational d = 0;
        for (std::size_t i = 0; i < k.size(); ++i) d += weights_[i] * k[i];
        return d;
    }
    S coeff(const MultiIndex& k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Ops::fromRational(0) : it->second;
    }
    S constantTerm() const { return coeff(MultiIndex(nvars(), 0)); }
    std::optional<Rational> valuation() const {
        std::optional<Rational> v;
        for (const auto& [k, c] : coeffs_) {
            Rational d = degree(k);
            if (!v || d < *v) v = d;
        }
        return v;
    }

    /// Adds c x^k unless deg k exceeds the order.
    void add(const MultiIndex& k, const S& c) {
        if (Ops::isZero(c) || degree(k) > order_) return;
        auto [it, ins] = coeffs_.try_emplace(k, c);
        if (!ins) {
            it->second += c;
            if (Ops::isZero(it->second)) coeffs_.erase(it);
        }
    }

    /// Drops terms above o and lowers the precision to o.
    TruncSeries truncated(const Rational& o) const {
        TruncSeries r(center_, weights_, std::min(o, order_));
        for (const auto& [k, c] : coeffs_)
            if (degree(k) <= r.order_) r.coeffs_.emplace(k, c);
        return r;
    }
    /// Homogeneous part of degree d.
    TruncSeries part(const Rational& d) const {
        TruncSeries r = zeroLike();
        for (const auto& [k, c] : coeffs_)
            if (degree(k) == d) r.coeffs_.emplace(k, c);
        return r;
    }

    void requireCompatible(const TruncSeries& o) const {
        if (nvars() != o.nvars() || weights_ != o.weights_)
            throw CenterMismatchError("series have different variables or gradings");
        for (std::size_t i = 0; i < nvars(); ++i)
            if (!Ops::isZero(center_[i] - o.center_[i]))
                throw CenterMismatchError("series have different centers");
    }

    TruncSeries operator-() const {
        TruncSeries r = *this;
        for (auto& [k, c] : r.coeffs_) c = -c;
        return r;
    }
    TruncSeries& operator+=(const TruncSeries& o) {
        requireCompatible(o);
        order_ = std::min(order_, o.order_);
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = degree(it->first) > order_ ? coeffs_.erase(it) : std::next(it);
        for (const auto& [k, c] : o.coeffs_) add(k, c);
        return *this;
    }
    TruncSeries& operator-=(const TruncSeries& o) { return *this += -o; }
    TruncSeries& operator*=(const S& s) {
        if (Ops::isZero(s)) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [k, c] : coeffs_) c *= s;
        return *this;
    }
    friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
    friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
    friend TruncSeries operator*(TruncSeries a, const S& s) { return a *= s; }
    friend TruncSeries operator*(const S& s, TruncSeries a) { return a *= s; }

    /// Product; precision is min(order_a + val_b, order_b + val_a).
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        a.requireCompatible(b);
        auto va = a.valuation(), vb = b.valuation();
        Rational o;
        if (!va && !vb) o = std::min(a.order_, b.order_);
        else if (!va) o = a.order_ + *vb;
        else if (!vb) o = b.order_ + *va;
        else o = std::min(a.order_ + *vb, b.order_ + *va);
        TruncSeries r(a.center_, a.weights_, o);
        auto sorted = [](const TruncSeries& s) {
            std::vector<std::pair<Rational, const std::pair<const MultiIndex, S>*>> v;
            v.reserve(s.coeffs_.size());
            for (const auto& t : s.coeffs_) v.emplace_back(s.degree(t.first), &t);
            std::sort(v.begin(), v.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            return v;
        };
        auto sa = sorted(a), sb = sorted(b);
        MultiIndex k(a.nvars());
        for (const auto& [da, ta] : sa) {
            if (da + (sb.empty() ? Rational(0) : sb.front().first) > o) break;
            for (const auto& [db, tb] : sb) {
                if (da + db > o) break;
                for (std::size_t i = 0; i < k.size(); ++i) k[i] = ta->first[i] + tb->first[i];
                r.add(k, ta->second * tb->second);
            }
        }
        return r;
    }

    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
    }

    /// Numeric value at offset x (no tail estimate).
    std::complex<double> evaluateOffset(const std::vector<std::complex<double>>& x) const {
        std::complex<double> s = 0;
        for (const auto& [k, c] : coeffs_) {
            std::complex<double> t = Ops::toComplex(c);
            for (std::size_t i = 0; i < k.size(); ++i) t *= std::pow(x[i], k[i]);
            s += t;
        }
        return s;
    }

private:
    std::vector<S> center_;
    std::vector<Rational> weights_;
    Rational order_;
    std::map<MultiIndex, S> coeffs_;
};

template <class S>
using SeriesMap = std::vector<TruncSeries<S>>;

template <class S>
TruncSeries<S> differentiate(const TruncSeries<S>& f, int i) {
    TruncSeries<S> r(f.center(), f.weights(), f.order() - f.weights()[i]);
    for (const auto& [k, c] : f.coeffs()) {
        if (k[i] == 0) continue;
        MultiIndex n = k;
        --n[i];
        r.add(n, c * ScalarOps<S>::fromRational(k[i]));
    }
    return r;
}

/// Antiderivative in x_i with zero constant of integration.
template <class S>
TruncSeries<S> integrate(const TruncSeries<S>& f, int i) {
    TruncSeries<S> r(f.center(), f.weights(), f.order() + f.weights()[i]);
    for (const auto& [k, c] : f.coeffs()) {
        MultiIndex n = k;
        ++n[i];
        r.add(n, c * ScalarOps<S>::fromRational(Rational(1, n[i])));
    }
    return r;
}

template <class S>
Matrix<S> jacobianAtCenter(const SeriesMap<S>& m) {
    const std::size_t n = m.empty() ? 0 : m[0].nvars();
    auto j = zeroMatrix<S>(m.size(), n);
    for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < n; ++b) {
            MultiIndex k(n, 0);
            k[b] = 1;
            j[a][b] = m[a].coeff(k);
        }
    return j;
}

template <class S>
std::vector<S> constants(const SeriesMap<S>& m) {
    std::vector<S> c;
    for (const auto& s : m) c.push_back(s.constantTerm());
    return c;
}

namespace detail {

// f = sum_k f_k x_last^k composed recursively, Horner in the last variable.
template <class S>
TruncSeries<S> composeRec(const std::map<MultiIndex, S>& terms, std::size_t depth,
                          const std::vector<TruncSeries<S>>& shifted, const TruncSeries<S>& zero) {
    if (terms.empty()) return zero;
    if (depth == 0) {
        TruncSeries<S> r = zero;
        for (const auto& [k, c] : terms) r.add(MultiIndex(zero.nvars(), 0), c);
        return r;
    }
    const std::size_t var = depth - 1;
    std::map<int, std::map<MultiIndex, S>> byPower;
    for (const auto& [k, c] : terms) {
        MultiIndex rest = k;
        int p = rest[var];
        rest[var] = 0;
        byPower[p].emplace(rest, c);
    }
    int top = byPower.rbegin()->first;
    TruncSeries<S> acc = zero;
    for (int p = top; p >= 0; --p) {
        if (p != top) acc = acc * shifted[var];
        auto it = byPower.find(p);
        if (it != byPower.end()) acc += composeRec(it->second, depth - 1, shifted, zero);
        acc = acc.truncated(zero.order());
    }
    return acc;
}

}  // namespace detail

/// f(m(x)). m's constant terms must equal f's center. The result carries m's
/// center and the smaller of the two orders.
template <class S>
TruncSeries<S> compose(const TruncSeries<S>& f, const SeriesMap<S>& m) {
    if (m.size() != f.nvars()) throw CenterMismatchError("map arity differs from series arity");
    if (m.empty()) return f;
    std::vector<TruncSeries<S>> shifted;
    Rational o = f.order();
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i].requireCompatible(m[0]);
        if (!ScalarOps<S>::isZero(m[i].constantTerm() - f.center()[i]))
            throw CenterMismatchError("map constants do not match the series center");
        TruncSeries<S> s = m[i];
        s.add(MultiIndex(s.nvars(), 0), -f.center()[i]);
        shifted.push_back(std::move(s));
        o = std::min(o, m[i].order());
    }
    TruncSeries<S> zero(m[0].center(), m[0].weights(), o);
    return detail::composeRec(f.coeffs(), f.nvars(), shifted, zero);
}

/// Inverse of x -> m(x) as a map of offsets y - m(0); constant terms of the
/// result are m's center. Fixed-point iteration gaining one order per step.
template <class S>
SeriesMap<S> invertMap(const SeriesMap<S>& m) {
    const std::size_t n = m.size();
    if (n == 0) return {};
    if (m[0].nvars() != n) throw SingularJacobianError("map is not square");
    Matrix<S> jinv;
    try {
        jinv = inverse(jacobianAtCenter(m));
    } catch (const SingularJacobianError&) {
        throw SingularJacobianError("Jacobian of the coordinate map is singular at the center");
    }
    const std::vector<S> y0 = constants(m);
    const std::vector<S>& x0 = m[0].center();
    const auto& w = m[0].weights();
    Rational order = m[0].order();
    for (const auto& s : m) order = std::min(order, s.order());

    // nonlinear part h = m - m(0) - J x, as series about x0
    std::vector<TruncSeries<S>> h;
    for (std::size_t a = 0; a < n; ++a) {
        TruncSeries<S> s = m[a].truncated(order);
        for (const auto& [k, c] : m[a].coeffs()) {
            int tot = 0;
            for (int e : k) tot += e;
            if (tot <= 1) s.add(k, -c);
        }
        h.push_back(std::move(s));
    }
    auto build = [&](const std::vector<TruncSeries<S>>& hComposed) {
        SeriesMap<S> r;
        for (std::size_t i = 0; i < n; ++i) {
            TruncSeries<S> s = TruncSeries<S>::constant(x0[i], y0, w, order);
            for (std::size_t j = 0; j < n; ++j) {
                if (ScalarOps<S>::isZero(jinv[i][j])) continue;
                TruncSeries<S> t = TruncSeries<S>::offset(static_cast<int>(j), y0, w, order);
                if (!hComposed.empty()) t -= hComposed[j];
                s += t * jinv[i][j];
            }
            r.push_back(std::move(s));
        }
        return r;
    };
    SeriesMap<S> cur = build({});
    Rational minW = *std::min_element(w.begin(), w.end());
    const Rational steps = order / minW;
    const long maxIter = toLong(Rational(Integer(steps.get_num() / steps.get_den()))) + 2;
    for (long it = 0; it < maxIter + 2; ++it) {
        std::vector<TruncSeries<S>> hc;
        for (std::size_t j = 0; j < n; ++j) hc.push_back(compose(h[j], cur));
        SeriesMap<S> next = build(hc);
        bool same = true;
        for (std::size_t i = 0; i < n && same; ++i) same = next[i].coeffs() == cur[i].coeffs();
        cur = std::move(next);
        if (same && ScalarOps<S>::exact) break;
    }
    return cur;
}

/// Taylor expansion of f at center (offsets x = v - center) to the given
/// weighted order. Throws SingularCenterError if f is singular there and
/// NotRepresentableError if an exact constant would be transcendental.
template <class S>
TruncSeries<S> localize(const ClosedForm& f, const std::vector<S>& center,
                        const std::vector<Rational>& weights, const Rational& order);

extern template class TruncSeries<QRad>;
extern template class TruncSeries<double>;
extern template TruncSeries<QRad> localize(const ClosedForm&, const std::vector<QRad>&,
                                           const std::vector<Rational>&, const Rational&);
extern template TruncSeries<double> localize(const ClosedForm&, const std::vector<double>&,
                                             const std::vector<Rational>&, const Rational&);
extern template TruncSeries<QRad> compose(const TruncSeries<QRad>&, const SeriesMap<QRad>&);
extern template TruncSeries<double> compose(const TruncSeries<double>&, const SeriesMap<double>&);
extern template SeriesMap<QRad> invertMap(const SeriesMap<QRad>&);
extern template SeriesMap<double> invertMap(const SeriesMap<double>&);

}  // namespace frobwdvv
