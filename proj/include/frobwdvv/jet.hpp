#pragma once

#include <complex>
#include <map>
#include <vector>

#include "frobwdvv/frobenius.hpp"
#include "frobwdvv/symfun.hpp"

namespace frobwdvv {

/// Exponents of the jet variables v^a_k, k = 1..K, at (k - 1) * n + a.
using JetMonomial = std::vector<int>;

/// Polynomial in the jets v^a_k (k >= 1) with ClosedForm coefficients in the
/// base variables v^a. Jet order is capped at K.
class JetPoly {
public:
    JetPoly(std::size_t n = 0, int K = 3) : n_(n), K_(K) {}
    static JetPoly constant(std::size_t n, int K, const ClosedForm& c);
    /// v^a_k; k = 0 gives the base variable itself.
    static JetPoly jet(std::size_t n, int K, int a, int k);

    std::size_t nvars() const { return n_; }
    int maxOrder() const { return K_; }
    const std::map<JetMonomial, ClosedForm>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    /// Highest k with a nonzero exponent (0 for pure base functions).
    int order() const;

    void add(const JetMonomial& m, const ClosedForm& c);
    JetPoly& operator+=(const JetPoly& o);
    JetPoly& operator-=(const JetPoly& o);
    friend JetPoly operator+(JetPoly a, const JetPoly& b) { return a += b; }
    friend JetPoly operator-(JetPoly a, const JetPoly& b) { return a -= b; }
    friend JetPoly operator*(const JetPoly& a, const JetPoly& b);
    friend JetPoly operator*(const JetPoly& a, const ClosedForm& c);
    friend bool operator==(const JetPoly& a, const JetPoly& b) { return a.terms_ == b.terms_; }
    JetPoly pow(unsigned e) const;

    JetPoly dBase(int a) const;
    JetPoly dJet(int a, int k) const;

    std::complex<double> evaluate(const std::vector<std::complex<double>>& base,
                                  const std::vector<std::vector<std::complex<double>>>& jets) const;

private:
    void requireSameSpace(const JetPoly& o) const;
    std::size_t n_;
    int K_;
    std::map<JetMonomial, ClosedForm> terms_;
};

/// d/dx = sum_a v^a_1 d/dv^a + sum_{a,k} v^a_{k+1} d/dv^a_k. Throws
/// JetOrderOverflow when a jet of order K would have to be differentiated.
JetPoly totalX(const JetPoly& p);

/// Ring morphism: base variables to ClosedForms, jets[a][k-1] to JetPolys in
/// the target space. Jets of p beyond the supplied lists throw JetOrderOverflow.
JetPoly substitute(const JetPoly& p, const std::vector<ClosedForm>& base,
                   const std::vector<std::vector<JetPoly>>& jets);

/// d/dt^{kappa,0} on x-jets of M: the base velocity is c^a_{kappa b} v^b_1 and
/// jets follow by commuting with d/dx.
JetPoly kappaFlow(const JetPoly& p, const Tensors& t, int kappa);

/// Rewrites a JetPoly in hat variables and d/dt^{kappa,0}-jets as x-jets of M,
/// given vhat^a(v).
JetPoly flowSubstitute(const JetPoly& p, const Tensors& t, int kappa, const std::vector<ClosedForm>& hatMap);

/// sum_i c_i log P_i + rest.
struct JetLogSum {
    std::vector<std::pair<Rational, JetPoly>> logs;
    JetPoly rest;

    JetLogSum operator-(const JetLogSum& o) const;
    std::complex<double> evaluate(const std::vector<std::complex<double>>& base,
                                  const std::vector<std::vector<std::complex<double>>>& jets) const;
};

JetLogSum flowSubstitute(const JetLogSum& f, const Tensors& t, int kappa, const std::vector<ClosedForm>& hatMap);

struct JetFraction {
    JetPoly num, den;
};

/// d/dx of sum_i c_i log P_i + rest over the denominator prod P_i.
JetFraction totalX(const JetLogSum& f);

/// Numerator of d f / d y over the common denominator prod P_i, for y the base
/// variable a (k = 0) or the jet v^a_k. f is constant iff all of these vanish.
JetPoly gradientNumerator(const JetLogSum& f, int a, int k);

}  // namespace frobwdvv
