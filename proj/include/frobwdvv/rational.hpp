#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace frobwdvv {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical a/b (mpq_class(a, b) alone does not reduce).
inline Rational rat(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

/// Accepts "p", "-p", "p/q". Throws SpecParseError otherwise.
Rational parseRational(const std::string& s);
std::string toString(const Rational& q);

bool isInteger(const Rational& q);
/// Throws NotRepresentableError if q is not an integer fitting in a long.
long toLong(const Rational& q);
double toDouble(const Rational& q);

Rational pow(const Rational& base, long e);
Rational factorial(unsigned n);
/// Generalized binomial coefficient q(q-1)...(q-k+1)/k!.
Rational binomial(const Rational& q, unsigned k);

/// n = s^2 * f with f squarefree. Trial division; a cofactor that is not a
/// perfect square is treated as squarefree.
std::pair<Integer, Integer> squareFreeSplit(const Integer& n);

/// Exact element of Q(sqrt 2, sqrt 3, ...): finite sum of c_n * sqrt(n) over
/// squarefree n, with n = 1 the rational part.
class QRad {
public:
    using Term = std::pair<std::uint64_t, Rational>;

    QRad() = default;
    QRad(const Rational& q);  // NOLINT(google-explicit-constructor)
    QRad(long n);             // NOLINT(google-explicit-constructor)
    QRad(int n) : QRad(static_cast<long>(n)) {}

    /// sqrt(q) for q >= 0.
    static QRad sqrt(const Rational& q);

    bool isZero() const { return t_.empty(); }
    bool isRational() const { return t_.empty() || (t_.size() == 1 && t_[0].first == 1); }
    Rational toRational() const;  // throws NotRepresentableError
    const std::vector<Term>& terms() const { return t_; }

    double toDouble() const;
    std::complex<double> toComplex() const { return {toDouble(), 0.0}; }

    QRad operator-() const;
    QRad& operator+=(const QRad& o);
    QRad& operator-=(const QRad& o);
    QRad& operator*=(const QRad& o);
    QRad& operator/=(const QRad& o) { return *this *= o.inverse(); }
    friend QRad operator+(QRad a, const QRad& b) { return a += b; }
    friend QRad operator-(QRad a, const QRad& b) { return a -= b; }
    friend QRad operator*(QRad a, const QRad& b) { return a *= b; }
    friend QRad operator/(QRad a, const QRad& b) { return a /= b; }
    friend bool operator==(const QRad& a, const QRad& b) { return a.t_ == b.t_; }
    friend bool operator!=(const QRad& a, const QRad& b) { return !(a == b); }

    QRad inverse() const;
    /// Integer exponents always; half-integer exponents only for a positive
    /// rational base. Anything else throws NotRepresentableError.
    QRad pow(const Rational& e) const;

    std::string toString() const;

private:
    void addTerm(std::uint64_t n, const Rational& c);
    std::vector<Term> t_;  // sorted by radicand, no zero coefficients
};

std::string toString(const QRad& x);

}  // namespace frobwdvv
