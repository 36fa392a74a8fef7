#include "frobwdvv/isomonodromy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "frobwdvv/errors.hpp"
#include "frobwdvv/genus_one.hpp"
#include "frobwdvv/legendre.hpp"

namespace frobwdvv {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx I1(0.0, 1.0);

using State = std::vector<cplx>;

double norm(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

/// Sorted canonical order: real part, imaginary part, solver index.
std::vector<int> canonicalOrder(const Eigen::VectorXcd& vals) {
    std::vector<int> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    double scale = 1.0;
    for (int i = 0; i < vals.size(); ++i) scale = std::max(scale, std::abs(vals[i]));
    const double tie = 1e-10 * scale;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const cplx x = vals[a], y = vals[b];
        if (std::abs(x.real() - y.real()) > tie) return x.real() < y.real();
        if (std::abs(x.imag() - y.imag()) > tie) return x.imag() < y.imag();
        return a < b;
    });
    return idx;
}

/// Integrates w' = f(t, w) from t0 to t1 with dopri5.
template <class F>
void integrate(F&& f, State& w, double t0, double t1, double relTol) {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(relTol * 1e-3, relTol, odeint::runge_kutta_dopri5<State>());
    const double dt = (t1 > t0 ? 1.0 : -1.0) * 1e-3;
    try {
        odeint::integrate_adaptive(stepper, f, w, t0, t1, dt);
    } catch (const std::exception& e) {
        throw IntegrationError(std::string("ray integration failed: ") + e.what());
    }
    for (const auto& x : w)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw IntegrationError("non-finite solution");
}

/// Matrix ODE Y' = A(z) Y along a path z(t) with dz/dt given; state column-major.
template <class Path>
CMat integrateMatrix(const CMat& y0, const CMat& diagU, const CMat& V, Path&& path, double t0, double t1,
                     double relTol, cplx gauge = 0.0) {
    const Eigen::Index n = y0.rows();
    const Eigen::Index cols = y0.cols();
    State w(static_cast<std::size_t>(n * cols));
    Eigen::Map<CMat>(w.data(), n, cols) = y0;
    const CMat shifted = diagU - gauge * CMat::Identity(n, n);
    auto rhs = [&](const State& x, State& dx, double t) {
        const auto [z, dz] = path(t);
        Eigen::Map<const CMat> X(x.data(), n, cols);
        Eigen::Map<CMat> D(dx.data(), n, cols);
        D = dz * ((shifted + V / z) * X);
    };
    integrate(rhs, w, t0, t1, relTol);
    return Eigen::Map<CMat>(w.data(), n, cols);
}

CMat diagOf(const Eigen::VectorXcd& u) { return u.asDiagonal(); }

CMat expNilpotentTimes(const CMat& R, cplx c) {
    // R nilpotent: finite exponential series
    const Eigen::Index n = R.rows();
    CMat term = CMat::Identity(n, n), sum = term;
    for (Eigen::Index k = 1; k <= n; ++k) {
        term = term * R * c / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

CMat fromNested(const CMatrix& m) {
    CMat r(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) r(i, j) = m[i][j];
    return r;
}

std::vector<double> muOf(const FrobeniusSpec& spec) {
    std::vector<double> mu;
    for (const auto& q : spec.mu) mu.push_back(toDouble(q));
    return mu;
}

/// Hat frame with signs matched so that psihat_{i kappa} = psi_{i kappa}, then compared.
Report compareFrames(const SemisimplePoint& m, const CMat& hatU, int kappa, double tol) {
    Report rep;
    rep.command = "legendre-frame";
    std::vector<double> mu;
    for (Eigen::Index i = 0; i < m.mu.rows(); ++i) mu.push_back(m.mu(i, i).real());
    SemisimplePoint hat = semisimpleFrom(hatU, m.eta, mu, kappa);
    std::vector<int> signs(hat.n(), 1);
    for (std::size_t i = 0; i < hat.n(); ++i)
        if (std::abs(hat.Psi(i, kappa) + m.Psi(i, kappa)) < std::abs(hat.Psi(i, kappa) - m.Psi(i, kappa)))
            signs[i] = -1;
    hat = semisimpleFrom(hatU, m.eta, mu, kappa, signs);
    rep.merge(checkSemisimple(m, tol), "M.");
    rep.merge(checkSemisimple(hat, tol), "hat.");
    const double du = (hat.u - m.u).cwiseAbs().maxCoeff();
    rep.add("canonical_coordinates_match", du < tol, du);
    const double dk = (hat.Psi.col(kappa) - m.Psi.col(kappa)).cwiseAbs().maxCoeff();
    rep.add("psi_kappa_column", dk < tol, dk);
    const double dp = norm(hat.Psi - m.Psi);
    rep.add("psi_equal", dp < tol, dp);
    const double dv = norm(hat.V - m.V);
    rep.add("V_equal", dv < tol, dv);
    rep.data["u"] = matrixJson(m.u);
    rep.data["hat_signs"] = signs;
    return rep;
}

struct Aligned {
    Eigen::VectorXcd u;
    CMat Psi, V;
};

/// Reorders and re-signs ss to follow ref (nearest canonical coordinate, row sign
/// continuity), for finite differences.
Aligned alignTo(const SemisimplePoint& ss, const Aligned& ref) {
    const Eigen::Index n = ss.u.size();
    std::vector<int> perm(n, -1);
    std::vector<bool> used(n, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        int best = -1;
        for (Eigen::Index k = 0; k < n; ++k)
            if (!used[k] && (best < 0 || std::abs(ss.u[k] - ref.u[i]) < std::abs(ss.u[best] - ref.u[i]))) best = k;
        perm[i] = best;
        used[best] = true;
    }
    Aligned a{Eigen::VectorXcd(n), CMat(n, n), CMat(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        a.u[i] = ss.u[perm[i]];
        a.Psi.row(i) = ss.Psi.row(perm[i]);
        const cplx overlap = (a.Psi.row(i).array() * ref.Psi.row(i).array().conjugate()).sum();
        if (overlap.real() < 0) a.Psi.row(i) *= -1.0;
    }
    a.V = a.Psi * ss.mu * a.Psi.inverse();
    return a;
}

}  // namespace

CMat toCMat(const Matrix<Rational>& m) {
    CMat r(m.size(), m.empty() ? 0 : m[0].size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) r(i, j) = toDouble(m[i][j]);
    return r;
}

nlohmann::json matrixJson(const CMat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

SemisimplePoint semisimpleFrom(const CMat& U, const CMat& eta, const std::vector<double>& mu, int unity,
                               const std::vector<int>& signs) {
    const Eigen::Index n = U.rows();
    Eigen::ComplexEigenSolver<CMat> es(U);
    if (es.info() != Eigen::Success) throw NonSemisimpleError("eigen decomposition of U failed");
    const std::vector<int> order = canonicalOrder(es.eigenvalues());

    SemisimplePoint ss;
    ss.U = U;
    ss.eta = eta;
    ss.unity = unity;
    ss.u.resize(n);
    CMat W(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ss.u[i] = es.eigenvalues()[order[i]];
        W.col(i) = es.eigenvectors().col(order[i]);
    }
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(ss.u[i]));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(ss.u[i] - ss.u[j]) < 1e-9 * scale)
                throw NonSemisimpleError("canonical coordinates coincide: u = " + std::to_string(ss.u[i].real()) +
                                         (ss.u[i].imag() >= 0 ? "+" : "") + std::to_string(ss.u[i].imag()) + "i");

    // d/du_i are the idempotents: the unity vector splits as sum_i d/du_i
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[unity] = 1.0;
    const Eigen::VectorXcd a = W.fullPivLu().solve(e);
    CMat F(n, n);
    ss.signs.assign(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXcd d = a[i] * W.col(i);
        const cplx etaii = (d.transpose() * eta * d)(0, 0);
        if (std::abs(etaii) < 1e-14) throw NonSemisimpleError("isotropic idempotent");
        if (!signs.empty()) ss.signs[i] = signs.at(i);
        F.col(i) = d / (static_cast<double>(ss.signs[i]) * std::sqrt(etaii));
    }
    ss.Psi = F.inverse();
    ss.mu = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) ss.mu(i, i) = mu.at(i);
    ss.V = ss.Psi * ss.mu * F;
    return ss;
}

SemisimplePoint semisimpleAt(const FrobeniusSpec& spec, const std::vector<cplx>& point, const std::vector<int>& signs) {
    const Tensors t = buildTensors(spec);
    const CMat U = fromNested(evaluateMatrix(uMatrix(spec, t), point));
    SemisimplePoint ss = semisimpleFrom(U, toCMat(t.eta), muOf(spec), spec.unity, signs);
    ss.v = point;
    return ss;
}

Report checkSemisimple(const SemisimplePoint& ss, double tol) {
    Report rep;
    rep.command = "semisimple";
    const double ortho = norm(ss.Psi.transpose() * ss.Psi - ss.eta);
    rep.add("psiT_psi_eta", ortho < tol, ortho);
    const double diag = norm(ss.Psi * ss.U * ss.Psi.inverse() - CMat(diagOf(ss.u)));
    rep.add("psi_U_psi_inv_diagonal", diag < tol * std::max(1.0, ss.u.cwiseAbs().maxCoeff()), diag);
    const double anti = norm(ss.V + ss.V.transpose());
    rep.add("V_antisymmetric", anti < tol, anti);
    return rep;
}

Report verifyLegendreFrameInvariance(const FrobeniusSpec& spec, int kappa, const std::vector<Rational>& point,
                                     double tol) {
    const std::size_t n = spec.n();
    std::vector<QRad> center(point.begin(), point.end());
    std::vector<cplx> pt;
    for (const auto& q : point) pt.emplace_back(toDouble(q));
    const SemisimplePoint m = semisimpleAt(spec, pt);

    const LegendreResult r = transform(spec, kappa, center, 4);
    const std::vector<QRad> hc = r.series.hatCenter();
    const Series& F = r.hatPotential();
    auto third = [&](std::size_t a, std::size_t b, std::size_t c) {
        MultiIndex k(n, 0);
        ++k[a];
        ++k[b];
        ++k[c];
        double mult = 1.0;
        for (int e : k)
            for (int f = 2; f <= e; ++f) mult *= f;
        return F.coeff(k).toDouble() * mult;
    };
    std::vector<double> hatE(n);
    for (std::size_t b = 0; b < n; ++b)
        hatE[b] = toDouble(1 - r.hatCharge / 2 - spec.mu[b]) * hc[b].toDouble() + toDouble(r.hatShifts[b]);
    CMat hatU = CMat::Zero(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t rho = 0; rho < n; ++rho)
                for (std::size_t s = 0; s < n; ++s)
                    if (r.series.etaInv[a][s] != 0) hatU(a, b) += hatE[rho] * toDouble(r.series.etaInv[a][s]) * third(s, rho, b);
    Report rep = compareFrames(m, hatU, kappa, tol);
    nlohmann::json hp = nlohmann::json::array();
    for (const auto& x : hc) hp.push_back(x.toDouble());
    rep.data["hat_point"] = hp;
    return rep;
}

SemisimplePoint hatSemisimpleAt(const SemisimplePoint& m, const FrobeniusSpec& spec, const FrobeniusSpec& hatSpec,
                                int kappa) {
    if (hatSpec.unity != kappa) throw SpecValidationError("the hat spec's unity must be the kappa direction");
    const auto map = hatCoordinateMap(spec, buildTensors(spec), kappa);
    std::vector<cplx> hatPoint;
    for (const auto& f : map) hatPoint.push_back(evaluate(f, m.v));
    const SemisimplePoint h0 = semisimpleAt(hatSpec, hatPoint);
    std::vector<int> signs(h0.n(), 1);
    for (std::size_t i = 0; i < h0.n(); ++i)
        if (std::abs(h0.Psi(i, kappa) + m.Psi(i, kappa)) < std::abs(h0.Psi(i, kappa) - m.Psi(i, kappa))) signs[i] = -1;
    return semisimpleAt(hatSpec, hatPoint, signs);
}

Report verifyLegendreFrameInvariance(const FrobeniusSpec& spec, const FrobeniusSpec& hatSpec, int kappa,
                                     const std::vector<cplx>& point, double tol) {
    if (hatSpec.unity != kappa) throw SpecValidationError("the hat spec's unity must be the kappa direction");
    const SemisimplePoint m = semisimpleAt(spec, point);
    const auto map = hatCoordinateMap(spec, buildTensors(spec), kappa);
    std::vector<cplx> hatPoint;
    for (const auto& f : map) hatPoint.push_back(evaluate(f, point));
    const SemisimplePoint h0 = semisimpleAt(hatSpec, hatPoint);
    Report rep = compareFrames(m, h0.U, kappa, tol);
    nlohmann::json hp = nlohmann::json::array();
    for (const auto& x : hatPoint) hp.push_back({x.real(), x.imag()});
    rep.data["hat_point"] = hp;
    return rep;
}

std::vector<CMat> phiRecursion(const SemisimplePoint& ss, int kMax) {
    const Eigen::Index n = ss.u.size();
    std::vector<CMat> phi{CMat::Identity(n, n)};
    for (int k = 0; k < kMax; ++k) {
        const CMat B = -(ss.V + static_cast<double>(k) * CMat::Identity(n, n)) * phi.back();
        CMat P = CMat::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (i != j) P(i, j) = B(i, j) / (ss.u[i] - ss.u[j]);
        for (Eigen::Index i = 0; i < n; ++i) {
            cplx s = 0;
            for (Eigen::Index j = 0; j < n; ++j) s += ss.V(i, j) * P(j, i);
            P(i, i) = -s / static_cast<double>(k + 1);
        }
        phi.push_back(P);
    }
    return phi;
}

double phiOrthogonalityResidual(const std::vector<CMat>& phi) {
    double worst = 0.0;
    for (std::size_t k = 1; k < phi.size(); ++k) {
        CMat s = CMat::Zero(phi[0].rows(), phi[0].cols());
        for (std::size_t a = 0; a <= k; ++a) s += (a % 2 ? -1.0 : 1.0) * phi[a].transpose() * phi[k - a];
        worst = std::max(worst, norm(s));
    }
    return worst;
}

bool isAdmissible(const AdmissibleLine& line, const Eigen::VectorXcd& u, double tol) {
    const cplx dir = std::polar(1.0, line.phi);
    for (Eigen::Index i = 0; i < u.size(); ++i)
        for (Eigen::Index j = 0; j < u.size(); ++j)
            if (i != j && std::abs((dir * (u[i] - u[j])).real()) <= tol * std::abs(u[i] - u[j])) return false;
    return true;
}

std::vector<CMat> thetaCoefficients(const Calibration& cal, const std::vector<cplx>& point) {
    const std::size_t n = cal.spec.n();
    const CMat etaInv = toCMat(cal.tensors.etaInv);
    std::vector<CMat> out;
    for (int m = 0; m <= cal.mMax; ++m) {
        CMat g(n, n);  // g(c, b) = d_c theta_{b,m}
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t b = 0; b < n; ++b) g(c, b) = evaluate(cal.grad(static_cast<int>(b), m, static_cast<int>(c)), point);
        out.push_back(etaInv * g);
    }
    return out;
}

namespace {

struct Sectorial {
    const SemisimplePoint& ss;
    const std::vector<CMat>& phi;  // Phi_0..Phi_kMax
    const StokesOptions& opt;

    /// Direction in [lo, hi] where column j is most recessive against the others.
    double seedAngle(int j, double lo, double hi) const {
        const Eigen::Index n = ss.u.size();
        double bestAngle = 0.5 * (lo + hi), bestScore = -1e300;
        constexpr int samples = 2000;
        for (int s = 0; s <= samples; ++s) {
            const double th = lo + (hi - lo) * s / samples;
            const cplx dir = std::polar(1.0, th);
            double score = 1e300;
            for (Eigen::Index k = 0; k < n; ++k)
                if (k != j) score = std::min(score, (dir * (ss.u[k] - ss.u[j])).real());
            if (score > bestScore + 1e-15) {
                bestScore = score;
                bestAngle = th;
            }
        }
        if (bestScore < -1e-9)
            throw MatchingError("column " + std::to_string(j + 1) + " is not recessive anywhere in its sector");
        return bestAngle;
    }

    /// Solution asymptotic to Phi e^{zU} in the sector [lo, hi], at radius*e^{i target}.
    CMat at(double lo, double hi, double target, double radius) const {
        const Eigen::Index n = ss.u.size();
        const CMat D = diagOf(ss.u);
        CMat Y(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double th = seedAngle(static_cast<int>(j), lo, hi);
            const cplx far = std::polar(opt.zFar, th);
            CMat w = CMat::Zero(n, 1);
            for (std::size_t k = 0; k < phi.size(); ++k) w += phi[k].col(j) * std::pow(far, -static_cast<int>(k));
            const cplx dir = std::polar(1.0, th);
            auto ray = [&](double s) { return std::pair<cplx, cplx>{s * dir, dir}; };
            w = integrateMatrix(w, D, ss.V, ray, opt.zFar, radius, opt.relTol, ss.u[j]);
            auto arc = [&](double a) {
                const cplx z = std::polar(radius, a);
                return std::pair<cplx, cplx>{z, I1 * z};
            };
            if (th != target) w = integrateMatrix(w, D, ss.V, arc, th, target, opt.relTol, ss.u[j]);
            Y.col(j) = w * std::exp(std::polar(radius, target) * ss.u[j]);
        }
        return Y;
    }
};

/// Psi Theta(z) z^mu z^R at z = r e^{i phi}, arg z = phi.
CMat y0Seed(const SemisimplePoint& ss, const std::vector<CMat>& theta, const CMat& R, double r, double phi) {
    const Eigen::Index n = ss.u.size();
    const cplx z = std::polar(r, phi);
    const cplx logz(std::log(r), phi);
    CMat T = CMat::Zero(n, n);
    for (std::size_t m = 0; m < theta.size(); ++m) T += theta[m] * std::pow(z, static_cast<int>(m));
    CMat zmu = CMat::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) zmu(a, a) = std::exp(ss.mu(a, a) * logz);
    return ss.Psi * T * zmu * expNilpotentTimes(R, logz);
}

}  // namespace

MonodromyData stokesAndConnection(const FrobeniusSpec& spec, const SemisimplePoint& ss, const AdmissibleLine& line,
                                  const StokesOptions& opt) {
    const Calibration cal = solveCalibration(spec, opt.thetaOrder);
    return stokesAndConnection(spec, ss, line, thetaCoefficients(cal, ss.v), opt);
}

MonodromyData stokesAndConnection(const FrobeniusSpec& spec, const SemisimplePoint& ss, const AdmissibleLine& line,
                                  const std::vector<CMat>& theta, const StokesOptions& opt) {
    if (!isAdmissible(line, ss.u)) throw MatchingError("line is not admissible for these canonical coordinates");
    const Eigen::Index n = ss.u.size();
    const double phi = line.phi;
    std::vector<CMat> series = phiRecursion(ss, opt.kMax + 1);
    const double seedError = norm(series.back()) / std::pow(opt.zFar, opt.kMax + 1);
    series.pop_back();
    const Sectorial sect{ss, series, opt};
    const CMat R = toCMat(spec.rTotal());

    // small radius where the Theta truncation tail is negligible
    const double tail = theta.empty() ? 0.0 : norm(theta.back());
    const int M = static_cast<int>(theta.size()) - 1;
    double r0 = 0.5 * opt.zMatch;
    if (tail > 0 && M > 0) r0 = std::min(r0, std::pow(1e-12 / tail, 1.0 / M));

    auto solveAt = [&](double radius, CMat& S, CMat& C) {
        const CMat Yr = sect.at(phi - kPi, phi, phi, radius);
        const CMat Yl = sect.at(phi, phi + kPi, phi, radius);
        const cplx dir = std::polar(1.0, phi);
        auto ray = [&](double s) { return std::pair<cplx, cplx>{s * dir, dir}; };
        const CMat Y0 = integrateMatrix(y0Seed(ss, theta, R, r0, phi), diagOf(ss.u), ss.V, ray, r0, radius, opt.relTol);
        S = Yr.fullPivLu().solve(Yl);
        C = Y0.fullPivLu().solve(Yr);
    };

    MonodromyData md;
    md.eta = ss.eta;
    md.mu = ss.mu;
    md.R = R;
    md.marked = ss.unity;
    CMat S2, C2;
    solveAt(opt.zMatch, md.S, md.C);
    solveAt(2.0 * opt.zMatch, S2, C2);
    md.residual = std::max(norm(md.S - S2), norm(md.C - C2));

    const CMat YrMinus = sect.at(phi - kPi, phi, phi - kPi, opt.zMatch);
    const CMat YlMinus = sect.at(phi, phi + kPi, phi + kPi, opt.zMatch);
    md.piMinusResidual = norm(YlMinus - YrMinus * md.S.transpose()) / std::max(1.0, norm(YlMinus));

    nlohmann::json u = nlohmann::json::array();
    for (Eigen::Index i = 0; i < n; ++i) u.push_back({ss.u[i].real(), ss.u[i].imag()});
    md.conventions = {{"phi", phi},
                      {"ordering", "canonical coordinates sorted by real part, then imaginary part"},
                      {"u", u},
                      {"signs", ss.signs},
                      {"branch", "log z principal with arg z in (phi - pi - eps, phi + eps); arg z = phi on l_+"},
                      {"stokes", "Y_left = Y_right S on Pi_+"},
                      {"connection", "Y_right = Y_0 C on Pi_+"},
                      {"k_max", opt.kMax},
                      {"z_far", opt.zFar},
                      {"seed_error", seedError},
                      {"theta_order", M},
                      {"small_radius", r0}};
    if (md.residual > opt.tol)
        throw MatchingError("Stokes/connection data moved by " + std::to_string(md.residual) +
                            " between matching radii");
    return md;
}

Report monodromyIdentities(const MonodromyData& md, double tol) {
    Report rep;
    rep.command = "monodromy-identities";
    const cplx tpi(0.0, 2.0 * kPi);
    const CMat lhs1 = md.C * md.S.transpose() * md.S.inverse() * md.C.inverse();
    // monodromy of z^mu z^R around 0; equals exp(2 pi i (mu + R)) only when mu and R commute
    CMat rhs1 = CMat::Zero(md.mu.rows(), md.mu.cols());
    for (Eigen::Index a = 0; a < md.mu.rows(); ++a) rhs1(a, a) = std::exp(tpi * md.mu(a, a));
    rhs1 = rhs1 * expNilpotentTimes(md.R, tpi);
    const double r1 = norm(lhs1 - rhs1) / std::max(1.0, norm(rhs1));
    rep.add("C_ST_Sinv_Cinv", r1 < tol, r1);
    const CMat Cinv = md.C.inverse();
    CMat expMu = CMat::Zero(md.mu.rows(), md.mu.cols());
    for (Eigen::Index a = 0; a < md.mu.rows(); ++a) expMu(a, a) = std::exp(-0.5 * tpi * md.mu(a, a));
    const CMat rhs2 = Cinv * expNilpotentTimes(md.R, -0.5 * tpi) * expMu * md.eta.inverse() * Cinv.transpose();
    const double r2 = norm(md.S - rhs2) / std::max(1.0, norm(md.S));
    rep.add("S_from_C", r2 < tol, r2);
    return rep;
}

MonodromyData tensorMonodromy(const MonodromyData& a, const MonodromyData& b) {
    MonodromyData t;
    const Eigen::Index na = a.mu.rows(), nb = b.mu.rows();
    const CMat Ia = CMat::Identity(na, na), Ib = CMat::Identity(nb, nb);
    t.eta = kron(a.eta, b.eta);
    t.mu = kron(a.mu, Ib) + kron(Ia, b.mu);
    t.R = kron(a.R, Ib) + kron(Ia, b.R);
    t.S = kron(a.S, b.S);
    t.C = kron(a.C, b.C);
    t.marked = static_cast<int>(a.marked * nb + b.marked);
    t.residual = a.residual + b.residual;
    t.conventions = {{"factors", {a.conventions, b.conventions}}, {"index", "(i', i'') -> i' * n'' + i''"}};
    return t;
}

cplx stokesInvariant2(const CMat& S) { return 2.0 - (S.inverse() * S.transpose()).trace(); }

Eigen::VectorXcd hamiltonians(const CMat& V, const Eigen::VectorXcd& u) {
    const Eigen::Index n = u.size();
    Eigen::VectorXcd H = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) H[i] += 0.5 * V(i, j) * V(i, j) / (u[i] - u[j]);
    return H;
}

Report hamiltoniansAndClosedness(const FrobeniusSpec& spec, const std::vector<cplx>& basePoint, double h, double tol) {
    Report rep;
    rep.command = "hamiltonians";
    const SemisimplePoint base = semisimpleAt(spec, basePoint);
    const Eigen::Index n = base.u.size();
    const Aligned ref{base.u, base.Psi, base.V};

    // flat point with prescribed canonical coordinates, by Newton on du_i/dv^a = psi_ia / psi_i,unity
    auto atCanonical = [&](const Eigen::VectorXcd& target) {
        std::vector<cplx> v = basePoint;
        Aligned cur = ref;
        for (int it = 0; it < 40; ++it) {
            cur = alignTo(semisimpleAt(spec, v), ref);
            const Eigen::VectorXcd res = target - cur.u;
            if (res.cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, target.cwiseAbs().maxCoeff())) return cur;
            CMat J(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index a = 0; a < n; ++a) J(i, a) = cur.Psi(i, a) / cur.Psi(i, spec.unity);
            const Eigen::VectorXcd dv = J.fullPivLu().solve(res);
            for (Eigen::Index a = 0; a < n; ++a) v[a] += dv[a];
        }
        return cur;
    };

    std::vector<Aligned> plus(n), minus(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::VectorXcd up = base.u, um = base.u;
        up[j] += h;
        um[j] -= h;
        plus[j] = atCanonical(up);
        minus[j] = atCanonical(um);
    }
    // dH_i/du_j
    CMat dH(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::VectorXcd d = (hamiltonians(plus[j].V, plus[j].u) - hamiltonians(minus[j].V, minus[j].u)) / (2 * h);
        for (Eigen::Index i = 0; i < n; ++i) dH(i, j) = d[i];
    }
    const double closed = n > 1 ? norm(dH - dH.transpose()) : 0.0;
    rep.add("closedness", closed < tol, closed);

    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const CMat dV = (plus[i].V - minus[i].V) / (2 * h);
        CMat br = CMat::Zero(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j == i) continue;
                    const cplx w = base.V(i, j) / (base.u[i] - base.u[j]);
                    cplx pb = 0;  // {V_ab, V_ij}
                    if (b == i) pb += base.V(a, j);
                    if (a == i) pb -= base.V(b, j);
                    if (a == j) pb += base.V(b, i);
                    if (b == j) pb -= base.V(a, i);
                    br(a, b) += w * pb;
                }
        worst = std::max(worst, norm(dV - br));
    }
    rep.add("hamiltonian_equations", worst < tol, worst);
    const Eigen::VectorXcd H = hamiltonians(base.V, base.u);
    nlohmann::json hj = nlohmann::json::array();
    for (Eigen::Index i = 0; i < n; ++i) hj.push_back({H[i].real(), H[i].imag()});
    rep.data["H"] = hj;
    return rep;
}

nlohmann::json monodromyJson(const MonodromyData& md) {
    return {{"mu", matrixJson(md.mu)},
            {"R", matrixJson(md.R)},
            {"S", matrixJson(md.S)},
            {"C", matrixJson(md.C)},
            {"marked", md.marked + 1},
            {"matching_residual", md.residual},
            {"pi_minus_residual", md.piMinusResidual},
            {"conventions", md.conventions}};
}

}  // namespace frobwdvv
