#pragma once

#include <string>
#include <vector>

#include "frobwdvv/rational.hpp"

namespace frobwdvv {

/// Univariate polynomial over Q, coefficients low to high, no trailing zeros.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
    explicit Poly(std::vector<Rational> c);
    static Poly x();

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool isZero() const { return c_.empty(); }
    const Rational& lead() const { return c_.back(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational operator()(const Rational& at) const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    /// Quotient and remainder.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
    friend Poly gcd(Poly a, Poly b);  // monic

    std::string str(const std::string& var = "m") const;

private:
    void trim();
    std::vector<Rational> c_;
};

/// Element of Q(m) kept in lowest terms with a monic denominator.
class RatFun {
public:
    RatFun() : den_(Rational(1)) {}
    RatFun(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT(google-explicit-constructor)
    RatFun(long c) : RatFun(Rational(c)) {}                      // NOLINT(google-explicit-constructor)
    RatFun(Poly num, Poly den);
    static RatFun m() { return RatFun(Poly::x(), Poly(Rational(1))); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool isZero() const { return num_.isZero(); }
    /// Throws std::domain_error at a pole.
    Rational operator()(const Rational& at) const;

    friend RatFun operator+(const RatFun& a, const RatFun& b);
    friend RatFun operator-(const RatFun& a, const RatFun& b);
    friend RatFun operator*(const RatFun& a, const RatFun& b);
    friend RatFun operator/(const RatFun& a, const RatFun& b);
    friend RatFun operator-(const RatFun& a) { return RatFun(0) - a; }
    friend bool operator==(const RatFun& a, const RatFun& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    std::string str() const;

private:
    Poly num_, den_;
};

}  // namespace frobwdvv
