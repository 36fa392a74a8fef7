#pragma once

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frobwdvv/linalg.hpp"
#include "frobwdvv/report.hpp"
#include "frobwdvv/symfun.hpp"

namespace frobwdvv {

/// Declarative Frobenius manifold. Indices are 0-based in memory; spec files
/// and reports use 1-based indices.
struct FrobeniusSpec {
    std::string name;
    std::vector<std::string> variables;
    int unity = 0;
    ClosedForm potential;
    /// E^a = sum_b eulerLinear[a][b] v^b + eulerShifts[a]
    Matrix<Rational> eulerLinear;
    std::vector<Rational> eulerShifts;
    Rational charge;
    std::vector<Rational> mu;
    /// s -> R_s, entry [a][b] is (R_s)^a_b.
    std::map<int, Matrix<Rational>> R;
    /// Truncation grading for potentials with infinitely many terms.
    std::optional<Grading> grading;
    std::map<std::string, Rational> params;
    /// Extra sections (legendre data, monodromy data, notes) kept verbatim.
    nlohmann::json extra = nlohmann::json::object();

    std::size_t n() const { return variables.size(); }
    bool truncated() const { return grading && grading->order.has_value(); }
    Matrix<Rational> rMatrix(int s) const;
    Matrix<Rational> rTotal() const;
};

/// Reads a spec file. params override the defaults of a parametric family.
FrobeniusSpec loadSpec(const std::string& path, const std::map<std::string, Rational>& params = {});
FrobeniusSpec parseSpec(const nlohmann::json& j, const std::map<std::string, Rational>& params = {});
/// Two-dimensional family F = v^2 u / 2 + c u^m (v = v1, u = v2).
FrobeniusSpec twoDimFamily(const Rational& m, const Rational& c);
/// Potential of a truncated spec at a different cutoff (generator-backed specs).
ClosedForm materializePotential(const std::string& generator, const nlohmann::json& args,
                                const Grading& grading);

struct Tensors {
    std::size_t n = 0;
    Matrix<Rational> eta, etaInv;
    std::vector<ClosedForm> cLow;    // c_{abc} at (a*n + b)*n + c
    std::vector<ClosedForm> cMixed;  // c^g_{ab} at (g*n + a)*n + b

    const ClosedForm& c(int a, int b, int g) const { return cLow[(a * n + b) * n + g]; }
    const ClosedForm& cUp(int g, int a, int b) const { return cMixed[(g * n + a) * n + b]; }
};

Tensors buildTensors(const FrobeniusSpec& spec);

/// WDVV to the spec's grading cutoff (exact for untruncated potentials).
Report checkWDVV(const FrobeniusSpec& spec, const Tensors& t);
/// c_{abc} = d_a d_b d_c f at (a*n + b)*n + c.
std::vector<ClosedForm> thirdDerivatives(const ClosedForm& f, std::size_t n);
/// Index tuples (a,b,c,d) of the independent associativity equations, fixed order.
const std::vector<std::array<std::size_t, 4>>& wdvvIndexTuples(std::size_t n);
/// For each tuple: sum_{rs} (x_{abr} y_{scd} - x_{dbr} y_{sca}) eta^{rs}. With x = y = c
/// this is the associativity residual. Exact up to g.order when g carries one.
std::vector<ClosedForm> wdvvBilinear(const std::vector<ClosedForm>& x, const std::vector<ClosedForm>& y,
                                     std::size_t n, const Matrix<Rational>& etaInv, const Grading* g);
/// Residuals aligned with wdvvIndexTuples (zeros kept).
std::vector<ClosedForm> wdvvResiduals(const ClosedForm& potential, std::size_t n,
                                      const Matrix<Rational>& etaInv, const Grading* g);

std::vector<ClosedForm> eulerField(const FrobeniusSpec& spec);
/// E as a derivation.
ClosedForm applyEuler(const FrobeniusSpec& spec, const ClosedForm& f);
Report eulerAction(const FrobeniusSpec& spec, const Tensors& t);
/// Structural constraints on (mu, R, charge, Euler data).
Report validateSpec(const FrobeniusSpec& spec, const Tensors& t);

/// U^a_b = sum_r E^r c^a_{rb}
Matrix<ClosedForm> uMatrix(const FrobeniusSpec& spec, const Tensors& t);

using CMatrix = std::vector<std::vector<std::complex<double>>>;
CMatrix evaluateMatrix(const Matrix<ClosedForm>& m, const std::vector<std::complex<double>>& point);

}  // namespace frobwdvv
