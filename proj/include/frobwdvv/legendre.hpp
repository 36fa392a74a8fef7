#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "frobwdvv/calibration.hpp"
#include "frobwdvv/frobenius.hpp"
#include "frobwdvv/mtps.hpp"

namespace frobwdvv {

using Series = TruncSeries<QRad>;

/// The Legendre-type transform of a potential given as a Taylor series, all in
/// total-degree grading. Hat coordinates carry upper indices.
struct SeriesLegendre {
    int kappa = 0;
    Matrix<Rational> eta, etaInv;
    Series potential;              // F about the center, offsets x = v - center
    SeriesMap<QRad> hatCoords;     // v -> vhat^a
    SeriesMap<QRad> inverseMap;    // vhat -> v^a, offsets about the hat center
    std::vector<Series> hessian;   // d_a d_b F at a*n + b, in v
    std::vector<Series> hatHessian;  // the same composed with the inverse map
    Series hatPotential;           // no constant or linear part

    std::size_t n() const { return eta.size(); }
    const std::vector<QRad>& center() const { return potential.center(); }
    std::vector<QRad> hatCenter() const { return constants(hatCoords); }
};

/// Throws SingularJacobianError when d/dv^kappa is not invertible at the center.
SeriesLegendre transformSeries(const Series& potential, const Matrix<Rational>& eta, int kappa);

struct LegendreResult {
    FrobeniusSpec spec;
    SeriesLegendre series;
    Rational hatCharge;               // -2 mu_kappa
    std::vector<Rational> hatShifts;  // (R_1)^b_kappa

    int kappa() const { return series.kappa; }
    const Series& hatPotential() const { return series.hatPotential; }
};

/// S_kappa(M) about center, hat potential exact through total degree order.
/// Truncated specs are used as stored, so order must stay below the degree of
/// the first omitted term.
LegendreResult transform(const FrobeniusSpec& spec, int kappa, const std::vector<QRad>& center, int order);

/// Jacobian, metric and product identities, structure constant transport,
/// unity, Hessian consistency and WDVV of the hat potential.
Report checkTransform(const LegendreResult& r);

/// Pushes E through the coordinate map and compares with the hat Euler field
/// built from (hatCharge, hatShifts); also E-homogeneity of the hat Hessian.
Report verifyEulerHat(const LegendreResult& r);

/// Transform back along the unity direction; compares with F above degree 2.
Report roundTrip(const LegendreResult& r);

/// Largest coefficient difference of a and b in degrees minDegree..maxDegree
/// (maxDegree clipped to the common precision). Zero means exact agreement.
double seriesDistance(const Series& a, const Series& b, int minDegree, int maxDegree = 1 << 20);
/// Candidate potential in hat variables against the transform, above degree 2.
Report compareHatPotential(const LegendreResult& r, const ClosedForm& candidate, int maxDegree);

struct HatCalibration {
    int mMax = 0;
    std::vector<std::vector<Series>> theta;  // theta[a][m] in hat offsets

    const Series& at(int a, int m) const { return theta.at(a).at(m); }
};

/// thetahat_{a,m} = Omega_{a,m;kappa,0} o v(vhat) for m < cal.mMax.
HatCalibration transportCalibration(const LegendreResult& r, const Calibration& cal);
/// Gradient identity, thetahat_{a,0} = vhat_a, the kappa-derivative rule and
/// orthogonality in the hat metric.
Report checkHatCalibration(const LegendreResult& r, const Calibration& cal, const HatCalibration& hat);

struct HatTwoPoint {
    int mMax = 0;
    std::map<std::tuple<int, int, int, int>, Series> omega;
};

HatTwoPoint hatTwoPoint(const LegendreResult& r, const HatCalibration& hat);
/// Omega of S_kappa(M) against Omega of M composed with the inverse map.
Report verifyOmegaTransport(const LegendreResult& r, const TwoPointTable& omegaM, const HatTwoPoint& omegaHat);
/// (mu, R) homogeneity of the hat two-point functions under the hat Euler field.
Report checkHatHomogeneity(const LegendreResult& r, const HatTwoPoint& omegaHat);

/// Numerical check of d^2 Fhat(vhat(v)) = d^2 F(v) at the given points of M,
/// relative to the largest Hessian entry. With moduloQuadratic the difference
/// at the first point is subtracted everywhere (candidates printed up to a
/// quadratic, e.g. with a log 2 constant). Throws BranchPointError on a cut.
Report verifyPointwise(const FrobeniusSpec& spec, const ClosedForm& candidate, int kappa,
                       const std::vector<std::vector<double>>& points, double tolerance = 1e-8,
                       bool moduloQuadratic = false);

/// CLI-facing summary {"kappa","charge_hat","checks"} (1-based kappa).
nlohmann::json legendreJson(const LegendreResult& r, const Report& checks);

}  // namespace frobwdvv
