#include "frobwdvv/ratfun.hpp"

#include <sstream>
#include <stdexcept>

namespace frobwdvv {

Poly::Poly(const Rational& c) : c_{c} { trim(); }
Poly::Poly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }
Poly Poly::x() { return Poly(std::vector<Rational>{0, 1}); }

void Poly::trim() {
    for (auto& q : c_) q.canonicalize();
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Poly::operator()(const Rational& at) const {
    Rational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * at + *it;
    return r;
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + b * Poly(Rational(-1)); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.isZero() || b.isZero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.isZero()) throw std::domain_error("polynomial division by zero");
    Poly q, r = a;
    while (!r.isZero() && r.degree() >= b.degree()) {
        std::vector<Rational> t(r.degree() - b.degree() + 1, Rational(0));
        t.back() = r.lead() / b.lead();
        Poly step(std::move(t));
        q = q + step;
        r = r - step * b;
    }
    return {q, r};
}

Poly gcd(Poly a, Poly b) {
    while (!b.isZero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.isZero()) return a;
    return divmod(a, Poly(a.lead())).first;
}

std::string Poly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[i].get_str() << ")";
        if (i > 0) os << "*" << var;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

RatFun::RatFun(Poly num, Poly den) {
    if (den.isZero()) throw std::domain_error("rational function with zero denominator");
    if (num.isZero()) {
        den_ = Poly(Rational(1));
        return;
    }
    Poly g = gcd(num, den);
    num = divmod(num, g).first;
    den = divmod(den, g).first;
    Poly lead(den.lead());
    num_ = divmod(num, lead).first;
    den_ = divmod(den, lead).first;
}

Rational RatFun::operator()(const Rational& at) const {
    Rational d = den_(at);
    if (d == 0) throw std::domain_error("pole of a rational function");
    return num_(at) / d;
}

RatFun operator+(const RatFun& a, const RatFun& b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
RatFun operator-(const RatFun& a, const RatFun& b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
RatFun operator*(const RatFun& a, const RatFun& b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.isZero()) throw std::domain_error("division by the zero rational function");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

std::string RatFun::str() const {
    if (den_ == Poly(Rational(1))) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

}  // namespace frobwdvv
