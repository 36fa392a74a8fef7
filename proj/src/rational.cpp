#include "frobwdvv/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "frobwdvv/errors.hpp"

namespace frobwdvv {

Rational parseRational(const std::string& s) {
    std::string t;
    for (char ch : s)
        if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
    if (t.empty()) throw SpecParseError("empty rational literal");
    if (t.front() == '+') t.erase(t.begin());
    const auto slash = t.find('/');
    auto digits = [](const std::string& x, bool allowSign) {
        if (x.empty()) return false;
        std::size_t i = (allowSign && x[0] == '-') ? 1 : 0;
        if (i == x.size()) return false;
        return std::all_of(x.begin() + static_cast<long>(i), x.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
    };
    if (slash == std::string::npos) {
        if (!digits(t, true)) throw SpecParseError("bad rational literal '" + s + "'");
        return Rational(Integer(t));
    }
    std::string num = t.substr(0, slash), den = t.substr(slash + 1);
    if (!digits(num, true) || !digits(den, false))
        throw SpecParseError("bad rational literal '" + s + "'");
    Integer d(den);
    if (d == 0) throw SpecParseError("zero denominator in '" + s + "'");
    Rational q(Integer(num), d);
    q.canonicalize();
    return q;
}

std::string toString(const Rational& q) { return q.get_str(); }

bool isInteger(const Rational& q) { return q.get_den() == 1; }

long toLong(const Rational& q) {
    if (!isInteger(q) || !q.get_num().fits_slong_p())
        throw NotRepresentableError("not a machine integer: " + q.get_str());
    return q.get_num().get_si();
}

double toDouble(const Rational& q) { return q.get_d(); }

Rational pow(const Rational& base, long e) {
    if (e < 0) {
        if (base == 0) throw NotRepresentableError("zero to a negative power");
        Rational inv = 1 / base;
        return pow(inv, -e);
    }
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), base.get_den().get_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

Rational factorial(unsigned n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Rational(r);
}

Rational binomial(const Rational& q, unsigned k) {
    Rational r = 1;
    for (unsigned j = 0; j < k; ++j) r *= (q - j) / Rational(j + 1);
    return r;
}

std::pair<Integer, Integer> squareFreeSplit(const Integer& n0) {
    if (n0 <= 0) throw NotRepresentableError("squareFreeSplit needs a positive integer");
    Integer n = n0, s = 1, f = 1;
    for (unsigned long p = 2; p < 100000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        int k = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            ++k;
        }
        for (int j = 0; j < k / 2; ++j) s *= p;
        if (k % 2) f *= p;
    }
    if (n > 1) {
        if (mpz_perfect_square_p(n.get_mpz_t())) {
            Integer r;
            mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
            s *= r;
        } else {
            f *= n;
        }
    }
    return {s, f};
}

namespace {

std::uint64_t toRadicand(const Integer& n) {
    if (!n.fits_ulong_p()) throw NotRepresentableError("radicand too large");
    return n.get_ui();
}

std::uint64_t smallestPrimeFactor(std::uint64_t n) {
    for (std::uint64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

}  // namespace

QRad::QRad(const Rational& q) {
    if (q != 0) t_.emplace_back(1, q);
}

QRad::QRad(long n) {
    if (n != 0) t_.emplace_back(1, Rational(n));
}

QRad QRad::sqrt(const Rational& q) {
    if (q < 0) throw NotRepresentableError("square root of a negative rational");
    QRad r;
    if (q == 0) return r;
    auto [s, f] = squareFreeSplit(q.get_num() * q.get_den());
    Rational c(s, q.get_den());
    c.canonicalize();
    r.t_.emplace_back(toRadicand(f), c);
    return r;
}

Rational QRad::toRational() const {
    if (!isRational()) throw NotRepresentableError("irrational value " + toString());
    return t_.empty() ? Rational(0) : t_[0].second;
}

double QRad::toDouble() const {
    double s = 0;
    for (const auto& [n, c] : t_) s += c.get_d() * std::sqrt(static_cast<double>(n));
    return s;
}

void QRad::addTerm(std::uint64_t n, const Rational& c) {
    if (c == 0) return;
    auto it = std::lower_bound(t_.begin(), t_.end(), n,
                               [](const Term& a, std::uint64_t k) { return a.first < k; });
    if (it != t_.end() && it->first == n) {
        it->second += c;
        if (it->second == 0) t_.erase(it);
    } else {
        t_.insert(it, {n, c});
    }
}

QRad QRad::operator-() const {
    QRad r = *this;
    for (auto& [n, c] : r.t_) c = -c;
    return r;
}

QRad& QRad::operator+=(const QRad& o) {
    for (const auto& [n, c] : o.t_) addTerm(n, c);
    return *this;
}

QRad& QRad::operator-=(const QRad& o) {
    for (const auto& [n, c] : o.t_) addTerm(n, -c);
    return *this;
}

QRad& QRad::operator*=(const QRad& o) {
    if (t_.empty() || o.t_.empty()) {
        t_.clear();
        return *this;
    }
    if (t_.size() == 1 && o.t_.size() == 1 && t_[0].first == 1 && o.t_[0].first == 1) {
        t_[0].second *= o.t_[0].second;
        return *this;
    }
    QRad r;
    for (const auto& [n1, c1] : t_)
        for (const auto& [n2, c2] : o.t_) {
            std::uint64_t g = std::gcd(n1, n2);
            r.addTerm((n1 / g) * (n2 / g), c1 * c2 * Rational(static_cast<unsigned long>(g)));
        }
    *this = std::move(r);
    return *this;
}

QRad QRad::inverse() const {
    if (t_.empty()) throw NotRepresentableError("division by zero");
    if (t_.size() == 1) {
        const auto& [n, c] = t_[0];
        QRad r;
        r.t_.emplace_back(n, 1 / (c * Rational(static_cast<unsigned long>(n))));
        return r;
    }
    // Split x = a + b sqrt(p) for a prime p in the support; x * conj(x) lives in
    // a field with one radical fewer.
    std::uint64_t p = 0;
    for (const auto& [n, c] : t_)
        if (n > 1) {
            p = smallestPrimeFactor(n);
            break;
        }
    QRad conj;
    for (const auto& [n, c] : t_) conj.addTerm(n, (n % p == 0) ? Rational(-c) : c);
    QRad norm = *this * conj;
    return conj * norm.inverse();
}

QRad QRad::pow(const Rational& e) const {
    if (isInteger(e)) {
        long k = toLong(e);
        QRad base = k < 0 ? inverse() : *this;
        if (k < 0) k = -k;
        QRad r(1L);
        while (k) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }
    if (isRational() && toRational() > 0 && e.get_den().fits_ulong_p()) {
        // exact d-th root of a positive rational
        const Rational q = toRational();
        const unsigned long d = e.get_den().get_ui();
        Integer rn, rd;
        const bool exactNum = mpz_root(rn.get_mpz_t(), q.get_num().get_mpz_t(), d) != 0;
        const bool exactDen = mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), d) != 0;
        if (exactNum && exactDen) return QRad(Rational(rn, rd)).pow(Rational(e.get_num()));
    }
    if (e.get_den() == 2 && isRational()) {
        Rational q = toRational();
        if (q > 0) {
            Rational k = e - Rational(1, 2);
            return QRad(frobwdvv::pow(q, toLong(k))) * sqrt(q);
        }
    }
    throw NotRepresentableError("(" + toString() + ")^(" + e.get_str() + ") is not representable");
}

std::string QRad::toString() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [n, c] : t_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        if (n == 1) os << a.get_str();
        else {
            if (a != 1) os << a.get_str() << "*";
            os << "sqrt(" << n << ")";
        }
        first = false;
    }
    return os.str();
}

std::string toString(const QRad& x) { return x.toString(); }

}  // namespace frobwdvv
