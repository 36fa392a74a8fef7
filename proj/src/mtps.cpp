#include "frobwdvv/mtps.hpp"

#include <tuple>

namespace frobwdvv {

namespace {

template <class S>
std::vector<S> mulUni(const std::vector<S>& a, const std::vector<S>& b, int d) {
    std::vector<S> r(d + 1, ScalarOps<S>::fromRational(0));
    for (int i = 0; i <= d && i < static_cast<int>(a.size()); ++i) {
        if (ScalarOps<S>::isZero(a[i])) continue;
        for (int j = 0; i + j <= d && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// Taylor coefficients of (c0+x)^q log(c0+x)^k e^{e(c0+x)} up to x^d.
template <class S>
std::vector<S> uniExpand(const S& c0, const Rational& q, int k, const Rational& e, int d) {
    using Ops = ScalarOps<S>;
    const S zero = Ops::fromRational(0), one = Ops::fromRational(1);
    std::vector<S> r(d + 1, zero);
    r[0] = one;
    const bool atZero = Ops::isZero(c0);
    if (q != 0) {
        std::vector<S> a(d + 1, zero);
        if (atZero) {
            if (!isInteger(q) || q < 0)
                throw SingularCenterError("power v^" + q.get_str() + " expanded at v = 0");
            long p = toLong(q);
            if (p <= d) a[p] = one;
        } else {
            S cq = Ops::pow(c0, q);
            S cinv = one / c0;
            S cj = cq;
            for (int j = 0; j <= d; ++j) {
                a[j] = cj * Ops::fromRational(binomial(q, static_cast<unsigned>(j)));
                cj *= cinv;
            }
        }
        r = mulUni(r, a, d);
    }
    if (k > 0) {
        if (atZero) throw SingularCenterError("log expanded at v = 0");
        std::vector<S> l(d + 1, zero);
        l[0] = Ops::log(c0);
        S cinv = one / c0, cj = cinv;
        for (int j = 1; j <= d; ++j) {
            l[j] = cj * Ops::fromRational(Rational(j % 2 ? 1 : -1, j));
            cj *= cinv;
        }
        for (int i = 0; i < k; ++i) r = mulUni(r, l, d);
    }
    if (e != 0) {
        std::vector<S> x(d + 1, zero);
        S base = Ops::exp(Ops::fromRational(e) * c0);
        Rational f = 1;
        for (int j = 0; j <= d; ++j) {
            x[j] = base * Ops::fromRational(f);
            f *= e / Rational(j + 1);
        }
        r = mulUni(r, x, d);
    }
    return r;
}

}  // namespace

template <class S>
TruncSeries<S> localize(const ClosedForm& f, const std::vector<S>& center,
                        const std::vector<Rational>& weights, const Rational& order) {
    const std::size_t n = center.size();
    if (f.maxVar() >= static_cast<int>(n))
        throw CenterMismatchError("function uses more variables than the center provides");
    using Key = std::tuple<int, Rational, int, Rational>;
    std::map<Key, TruncSeries<S>> cache;
    auto factor = [&](int v, const Rational& q, int k, const Rational& e) -> const TruncSeries<S>& {
        Key key{v, q, k, e};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Rational dq = order / weights[v];
        int d = static_cast<int>(toLong(Rational(Integer(dq.get_num() / dq.get_den()))));
        auto coeffs = uniExpand<S>(center[v], q, k, e, d);
        TruncSeries<S> s(center, weights, order);
        for (int j = 0; j <= d; ++j) {
            MultiIndex idx(n, 0);
            idx[v] = j;
            s.add(idx, coeffs[j]);
        }
        return cache.emplace(key, std::move(s)).first->second;
    };
    TruncSeries<S> out(center, weights, order);
    for (const auto& [m, c] : f.terms()) {
        TruncSeries<S> t = TruncSeries<S>::constant(ScalarOps<S>::fromQRad(c), center, weights, order);
        for (std::size_t v = 0; v < n; ++v) {
            int vi = static_cast<int>(v);
            Rational q = m.power(vi), e = m.expCoef(vi);
            int k = m.logPower(vi);
            if (q == 0 && k == 0 && e == 0) continue;
            t = (t * factor(vi, q, k, e)).truncated(order);
        }
        out += t;
    }
    return out;
}

template class TruncSeries<QRad>;
template class TruncSeries<double>;
template TruncSeries<QRad> localize(const ClosedForm&, const std::vector<QRad>&,
                                    const std::vector<Rational>&, const Rational&);
template TruncSeries<double> localize(const ClosedForm&, const std::vector<double>&,
                                      const std::vector<Rational>&, const Rational&);
template TruncSeries<QRad> compose(const TruncSeries<QRad>&, const SeriesMap<QRad>&);
template TruncSeries<double> compose(const TruncSeries<double>&, const SeriesMap<double>&);
template SeriesMap<QRad> invertMap(const SeriesMap<QRad>&);
template SeriesMap<double> invertMap(const SeriesMap<double>&);

}  // namespace frobwdvv
