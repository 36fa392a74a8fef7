#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/rational.hpp"

namespace frobwdvv {

/// Per-scalar operations used by the generic series and linear-algebra code.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
    static constexpr bool exact = true;
    static Rational fromRational(const Rational& q) { return q; }
    static Rational fromQRad(const QRad& q) { return q.toRational(); }
    static bool isZero(const Rational& x) { return x == 0; }
    static double magnitude(const Rational& x) { return std::abs(x.get_d()); }
    static std::complex<double> toComplex(const Rational& x) { return {x.get_d(), 0}; }
    static Rational pow(const Rational& c, const Rational& q) {
        if (!isInteger(q)) throw NotRepresentableError("non-integer power in exact arithmetic");
        return frobwdvv::pow(c, toLong(q));
    }
    static Rational log(const Rational& c) {
        if (c != 1) throw NotRepresentableError("log of " + c.get_str() + " is not rational");
        return 0;
    }
    static Rational exp(const Rational& a) {
        if (a != 0) throw NotRepresentableError("exp of a nonzero rational");
        return 1;
    }
    static std::string str(const Rational& x) { return x.get_str(); }
};

template <>
struct ScalarOps<QRad> {
    static constexpr bool exact = true;
    static QRad fromRational(const Rational& q) { return QRad(q); }
    static QRad fromQRad(const QRad& q) { return q; }
    static bool isZero(const QRad& x) { return x.isZero(); }
    static double magnitude(const QRad& x) { return std::abs(x.toDouble()); }
    static std::complex<double> toComplex(const QRad& x) { return x.toComplex(); }
    static QRad pow(const QRad& c, const Rational& q) { return c.pow(q); }
    static QRad log(const QRad& c) {
        if (c != QRad(1L)) throw NotRepresentableError("log of " + c.toString() + " is not exact");
        return {};
    }
    static QRad exp(const QRad& a) {
        if (!a.isZero()) throw NotRepresentableError("exp of a nonzero exact value");
        return QRad(1L);
    }
    static std::string str(const QRad& x) { return x.toString(); }
};

template <>
struct ScalarOps<double> {
    static constexpr bool exact = false;
    static inline double zeroTol = 1e-13;
    static double fromRational(const Rational& q) { return q.get_d(); }
    static double fromQRad(const QRad& q) { return q.toDouble(); }
    static bool isZero(double x) { return std::abs(x) <= zeroTol; }
    static double magnitude(double x) { return std::abs(x); }
    static std::complex<double> toComplex(double x) { return {x, 0}; }
    static double pow(double c, const Rational& q) {
        if (isInteger(q)) return std::pow(c, static_cast<double>(toLong(q)));
        if (c <= 0) throw SingularCenterError("non-integer power at a non-positive point");
        return std::pow(c, q.get_d());
    }
    static double log(double c) {
        if (c <= 0) throw SingularCenterError("log at a non-positive point");
        return std::log(c);
    }
    static double exp(double a) { return std::exp(a); }
    static std::string str(double x) { return std::to_string(x); }
};

template <>
struct ScalarOps<std::complex<double>> {
    using C = std::complex<double>;
    static constexpr bool exact = false;
    static inline double zeroTol = 1e-13;
    static C fromRational(const Rational& q) { return {q.get_d(), 0}; }
    static C fromQRad(const QRad& q) { return {q.toDouble(), 0}; }
    static bool isZero(const C& x) { return std::abs(x) <= zeroTol; }
    static double magnitude(const C& x) { return std::abs(x); }
    static C toComplex(const C& x) { return x; }
    static C pow(const C& c, const Rational& q) {
        if (isInteger(q)) return std::pow(c, static_cast<int>(toLong(q)));
        if (c == 0.0) throw SingularCenterError("non-integer power at 0");
        return std::exp(q.get_d() * std::log(c));
    }
    static C log(const C& c) {
        if (c == 0.0) throw SingularCenterError("log at 0");
        return std::log(c);
    }
    static C exp(const C& a) { return std::exp(a); }
    static std::string str(const C& x) {
        return "(" + std::to_string(x.real()) + "," + std::to_string(x.imag()) + ")";
    }
};

}  // namespace frobwdvv
