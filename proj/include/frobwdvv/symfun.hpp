#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frobwdvv/rational.hpp"

namespace frobwdvv {

/// Quasi-homogeneous weights. A monomial's degree is
/// sum_v weights[v]*power(v) + sum_v expWeights[v]*expCoef(v); logs have weight 0.
/// Missing entries count as weight 0.
struct Grading {
    std::vector<Rational> weights;
    std::vector<Rational> expWeights;
    std::optional<Rational> order;

    static Grading total(std::size_t n, std::optional<Rational> order = std::nullopt);
    Rational weight(int v) const { return v < static_cast<int>(weights.size()) ? weights[v] : Rational(0); }
    Rational expWeight(int v) const {
        return v < static_cast<int>(expWeights.size()) ? expWeights[v] : Rational(0);
    }
};

/// v^q (log v)^k e^{c v} products over variables, variables given by 0-based index.
/// Entries are sorted by variable and never zero.
struct GenMonomial {
    std::vector<std::pair<int, Rational>> powers;
    std::vector<std::pair<int, int>> logs;
    std::vector<std::pair<int, Rational>> exps;

    static GenMonomial one() { return {}; }
    static GenMonomial power(int v, const Rational& q);
    static GenMonomial log(int v, int k = 1);
    static GenMonomial exp(int v, const Rational& c);

    Rational power(int v) const;
    int logPower(int v) const;
    Rational expCoef(int v) const;

    void setPower(int v, const Rational& q);
    void setLog(int v, int k);
    void setExp(int v, const Rational& c);

    bool isOne() const { return powers.empty() && logs.empty() && exps.empty(); }
    /// Nonnegative integer powers only.
    bool isPolynomial() const;
    int maxVar() const;
    Rational degree(const Grading& g) const;

    friend GenMonomial operator*(const GenMonomial& a, const GenMonomial& b);
    friend bool operator==(const GenMonomial& a, const GenMonomial& b);
    friend bool operator<(const GenMonomial& a, const GenMonomial& b);
};

class ClosedForm {
public:
    using Terms = std::map<GenMonomial, QRad>;

    ClosedForm() = default;
    ClosedForm(const QRad& c);      // NOLINT(google-explicit-constructor)
    ClosedForm(const Rational& c);  // NOLINT(google-explicit-constructor)
    ClosedForm(long c) : ClosedForm(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    ClosedForm(int c) : ClosedForm(Rational(c)) {}   // NOLINT(google-explicit-constructor)
    ClosedForm(const GenMonomial& m, const QRad& c = QRad(1L));

    static ClosedForm var(int v) { return {GenMonomial::power(v, 1)}; }
    static ClosedForm power(int v, const Rational& q) { return {GenMonomial::power(v, q)}; }
    static ClosedForm logOf(int v) { return {GenMonomial::log(v)}; }
    static ClosedForm expOf(int v, const Rational& c = 1) { return {GenMonomial::exp(v, c)}; }

    const Terms& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    bool isConstant() const;
    QRad constantTerm() const;
    /// Coefficient of monomial m (zero if absent).
    QRad coeff(const GenMonomial& m) const;
    int maxVar() const;

    void addTerm(const GenMonomial& m, const QRad& c);

    ClosedForm operator-() const;
    ClosedForm& operator+=(const ClosedForm& o);
    ClosedForm& operator-=(const ClosedForm& o);
    ClosedForm& operator*=(const ClosedForm& o);
    ClosedForm& operator*=(const QRad& c);
    friend ClosedForm operator+(ClosedForm a, const ClosedForm& b) { return a += b; }
    friend ClosedForm operator-(ClosedForm a, const ClosedForm& b) { return a -= b; }
    friend ClosedForm operator*(const ClosedForm& a, const ClosedForm& b);
    friend ClosedForm operator*(ClosedForm a, const QRad& c) { return a *= c; }
    friend ClosedForm operator*(const QRad& c, ClosedForm a) { return a *= c; }
    friend bool operator==(const ClosedForm& a, const ClosedForm& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const ClosedForm& a, const ClosedForm& b) { return !(a == b); }

    /// Integer power by repeated multiplication (k >= 0).
    ClosedForm pow(unsigned k) const;

private:
    Terms terms_;
};

/// Product that drops every monomial whose degree exceeds g.order.
ClosedForm mulTruncated(const ClosedForm& a, const ClosedForm& b, const Grading& g);
ClosedForm truncate(const ClosedForm& f, const Grading& g);
/// Terms of exactly the given degree.
ClosedForm homogeneousPart(const ClosedForm& f, const Grading& g, const Rational& deg);
/// Smallest degree among terms; nullopt for zero.
std::optional<Rational> lowestDegree(const ClosedForm& f, const Grading& g);

ClosedForm differentiate(const ClosedForm& f, int v);
/// Antiderivative in v. Supports v^q (log v)^k and v^n e^{cv} (n >= 0 integer)
/// times factors free of v; throws IntegrationError otherwise.
ClosedForm integrate(const ClosedForm& f, int v);

/// Principal branches. Only the branch points themselves (0 for a log or a
/// non-integer power, 0 to a negative power) are errors: negative reals take
/// arg = pi.
std::complex<double> evaluate(const ClosedForm& f, const std::vector<std::complex<double>>& point);

/// All third partials of f-g in variables 0..nvars-1 vanish.
bool equalModQuadratic(const ClosedForm& f, const ClosedForm& g, int nvars);

/// Replace variable v by values[v] (result lives in the variables of values).
/// Powers with non-integer exponent and logs need single-term values; exponentials
/// need values whose terms are constants c with c*mult = 0, linear w, or log w.
ClosedForm substitute(const ClosedForm& f, const std::vector<ClosedForm>& values);

std::string toString(const ClosedForm& f, const std::vector<std::string>& names);
std::string toString(const GenMonomial& m, const std::vector<std::string>& names);

}  // namespace frobwdvv
