#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "frobwdvv/calibration.hpp"
#include "frobwdvv/frobenius.hpp"
#include "frobwdvv/report.hpp"

namespace frobwdvv {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

/// Semisimple structure at one point. Rows of Psi and entries of u follow the
/// sorted canonical order (real part, then imaginary part, then solver index).
struct SemisimplePoint {
    std::vector<cplx> v;
    Eigen::VectorXcd u;
    CMat U;    // E . in the flat frame
    CMat eta;  // constant metric
    CMat mu;   // diagonal
    CMat Psi;  // d/dv^a = sum_i Psi(i, a) f_i
    CMat V;    // Psi mu Psi^{-1}
    std::vector<int> signs;  // sign of sqrt(eta_ii) relative to the principal root
    int unity = 0;

    std::size_t n() const { return static_cast<std::size_t>(u.size()); }
};

/// Core routine on explicit data. signs (empty = all +1) flip the chosen
/// square roots. Throws NonSemisimpleError for repeated eigenvalues.
SemisimplePoint semisimpleFrom(const CMat& U, const CMat& eta, const std::vector<double>& mu, int unity,
                               const std::vector<int>& signs = {});
SemisimplePoint semisimpleAt(const FrobeniusSpec& spec, const std::vector<cplx>& point,
                             const std::vector<int>& signs = {});

/// S_kappa(M) at the point matched to m, signs chosen so that psihat_{i kappa} = psi_{i kappa}.
SemisimplePoint hatSemisimpleAt(const SemisimplePoint& m, const FrobeniusSpec& spec, const FrobeniusSpec& hatSpec,
                                int kappa);

/// Psi^T Psi = eta, Psi U Psi^{-1} = diag(u), V + V^T = 0.
Report checkSemisimple(const SemisimplePoint& ss, double tol = 1e-10);

/// M against S_kappa(M) at the matched point, the hat side taken from the
/// Legendre transform of the potential about point (rational coordinates).
Report verifyLegendreFrameInvariance(const FrobeniusSpec& spec, int kappa, const std::vector<Rational>& point,
                                     double tol = 1e-9);
/// Same, with S_kappa(M) given as its own spec; the hat point is
/// vhat^a = eta^{ab} d_kappa d_b F at point.
Report verifyLegendreFrameInvariance(const FrobeniusSpec& spec, const FrobeniusSpec& hatSpec, int kappa,
                                     const std::vector<cplx>& point, double tol = 1e-9);

/// Phi_0 = I, ..., Phi_kMax of the formal solution Phi(z) e^{zU}.
std::vector<CMat> phiRecursion(const SemisimplePoint& ss, int kMax);
/// max over orders k of |sum_{a+b=k} (-1)^a Phi_a^T Phi_b| (k >= 1).
double phiOrthogonalityResidual(const std::vector<CMat>& phi);

struct AdmissibleLine {
    double phi = 0.0;  // angle of l_+
    double epsilon = 0.05;
};

bool isAdmissible(const AdmissibleLine& line, const Eigen::VectorXcd& u, double tol = 1e-8);

struct StokesOptions {
    int kMax = 8;
    double zFar = 30.0;
    double relTol = 1e-10;
    double zMatch = 1.0;  // |z| of the matching point on l_+
    int thetaOrder = 12;  // calibration depth for Theta(v; z)
    double tol = 1e-6;
};

struct MonodromyData {
    CMat eta, mu, R, S, C;
    int marked = 0;
    double residual = 0.0;  // spread between two matching radii
    double piMinusResidual = 0.0;  // Y_left = Y_right S^T on Pi_-
    nlohmann::json conventions = nlohmann::json::object();
};

/// Theta_m(v)^a_b = eta^{ac} d_c theta_{b,m}(v), m = 0..cal.mMax.
std::vector<CMat> thetaCoefficients(const Calibration& cal, const std::vector<cplx>& point);

/// Sectorial solutions by seeding the truncated formal series at |z| = zFar in
/// the direction where each column is most recessive, then integrating to the
/// matching point; Y_0 = Psi Theta z^mu z^R from a small radius outward.
/// Throws MatchingError if the line is not admissible, a column cannot be made
/// recessive within its sector, or the two matching radii disagree beyond tol.
MonodromyData stokesAndConnection(const FrobeniusSpec& spec, const SemisimplePoint& ss, const AdmissibleLine& line,
                                  const StokesOptions& opt = {});
MonodromyData stokesAndConnection(const FrobeniusSpec& spec, const SemisimplePoint& ss, const AdmissibleLine& line,
                                  const std::vector<CMat>& theta, const StokesOptions& opt = {});

/// C S^T S^{-1} C^{-1} = e^{2 pi i mu} e^{2 pi i R} and S = C^{-1} e^{-pi i R} e^{-pi i mu} eta^{-1} C^{-T}.
Report monodromyIdentities(const MonodromyData& md, double tol = 1e-8);

/// (mu' x I + I x mu'', R' x I + I x R'', S' x S'', C' x C'', eta' x eta'').
MonodromyData tensorMonodromy(const MonodromyData& a, const MonodromyData& b);

/// 2 - tr(S^{-1} S^T), which is s^2 for S = [[1, s], [0, 1]] in either triangular form.
cplx stokesInvariant2(const CMat& S);

/// Closedness of sum_i H_i du_i and dV/du_i = {V, H_i} by central differences
/// of step h in canonical coordinates around basePoint.
Report hamiltoniansAndClosedness(const FrobeniusSpec& spec, const std::vector<cplx>& basePoint, double h = 1e-4,
                                 double tol = 1e-6);

/// H_i(V; u) = 1/2 sum_{j != i} V_ij^2 / (u_i - u_j).
Eigen::VectorXcd hamiltonians(const CMat& V, const Eigen::VectorXcd& u);

CMat toCMat(const Matrix<Rational>& m);
nlohmann::json matrixJson(const CMat& m);
nlohmann::json monodromyJson(const MonodromyData& md);

}  // namespace frobwdvv
