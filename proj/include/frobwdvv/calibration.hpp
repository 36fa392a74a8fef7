#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "frobwdvv/frobenius.hpp"

namespace frobwdvv {

/// Products and comparisons at the spec's grading cutoff (exact when untruncated).
struct Cutoff {
    std::optional<Grading> grading;

    explicit Cutoff(const FrobeniusSpec& spec);
    Cutoff() = default;
    ClosedForm mul(const ClosedForm& a, const ClosedForm& b) const;
    ClosedForm cut(const ClosedForm& f) const;
    bool isZero(const ClosedForm& f) const { return cut(f).isZero(); }
};

struct Calibration {
    FrobeniusSpec spec;
    Tensors tensors;
    int mMax = 0;
    /// theta[alpha][m], m = 0..mMax
    std::vector<std::vector<ClosedForm>> theta;

    const ClosedForm& at(int alpha, int m) const { return theta.at(alpha).at(m); }
    /// d theta_{alpha,m} / d v^beta
    ClosedForm grad(int alpha, int m, int beta) const;
    /// <grad a, grad b> with eta^{-1}
    ClosedForm pairing(int a, int ma, int b, int mb) const;
};

/// Solves theta_{alpha,m} for m <= mMax. Throws ObstructionError when the
/// homogeneity equation cannot be met with the spec's R.
Calibration solveCalibration(const FrobeniusSpec& spec, int mMax);

/// Normalization by the unity, orthogonality at every z-order <= mMax, theta_{a,0} = v_a.
Report checkCalibration(const Calibration& cal);

struct TwoPointTable {
    int mMax = 0;  // entries with m1 + m2 + 1 <= mMax
    std::map<std::tuple<int, int, int, int>, ClosedForm> omega;

    const ClosedForm& at(int a, int m1, int b, int m2) const;
    bool has(int a, int m1, int b, int m2) const { return omega.count({a, m1, b, m2}) > 0; }
};

TwoPointTable twoPoint(const Calibration& cal);

/// Symmetry, the derivative formula, Omega_{a,m;unity,0} = theta_{a,m}, and the
/// Hessian of the potential as Omega_{a,0;b,0}.
Report checkTwoPoint(const Calibration& cal, const TwoPointTable& omega);

/// E(Omega) against the (mu, R) formula for every tabulated entry.
Report checkHomogeneity(const Calibration& cal, const TwoPointTable& omega);

/// phi with d_g phi = w[g] (constant term zero). Throws IntegrationError if w is not closed.
ClosedForm integrateClosedForm(const std::vector<ClosedForm>& w, const Cutoff& cut);

}  // namespace frobwdvv
