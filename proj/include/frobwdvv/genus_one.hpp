#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frobwdvv/frobenius.hpp"
#include "frobwdvv/jet.hpp"
#include "frobwdvv/ratfun.hpp"
#include "frobwdvv/report.hpp"

namespace frobwdvv {

/// Genus-one free energies of M and of its Legendre-type transform along
/// d/dv^kappa. fM lives in x-jets of M; fHat in hat coordinates
/// (vhat^1 = rho, vhat^2 = phi) with jets along t = t^{kappa,0}.
struct GenusOneCase {
    std::string name;
    FrobeniusSpec spec;
    int kappa = 1;  // 0-based
    std::vector<ClosedForm> hatMap;
    JetLogSum fM, fHat;
    std::optional<Rational> m;  // exponent of the power family
};

/// vhat^a = eta^{ab} d_kappa d_b F.
std::vector<ClosedForm> hatCoordinateMap(const FrobeniusSpec& spec, const Tensors& t, int kappa);

/// Recognizes F = v^2 u/2 + e^u and F = v^2 u/2 + c u^m (m != 0, 1, 2) with
/// kappa the u direction. The family needs (c m (m-1))^{-1/(m-2)} representable;
/// otherwise NotRepresentableError. Anything else throws MatchingError.
GenusOneCase genusOneCase(const FrobeniusSpec& spec, int kappa);

/// Coefficient of log u in F1^M - F1^S for the power family, as a function of m,
/// after log rho and log f''' are expanded. Identically zero.
RatFun familyLogResidual();

/// Exact: every gradient numerator of the difference vanishes. Numeric: the real
/// part of the difference agrees at sample jets. The constant itself (principal
/// branches, first sample point) is reported under data.constant.
Report verifyGenusOneIdentity(const GenusOneCase& c);

}  // namespace frobwdvv
