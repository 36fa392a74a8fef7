#pragma once

#include <string>
#include <vector>

#include "frobwdvv/wdvv_solver.hpp"

namespace frobwdvv {

/// Sum of the divisors of m.
Integer sigma(long m);

/// Plane rational curve counts N_1..N_maxD from the binomial recursion (labels "N<d>").
RecursionOutput recursionNd(int maxD);
/// Same numbers from the third-order ODE for f(s) with F = cubic + f(v2 + 3 log v3)/v3.
RecursionOutput solveP2Fs(int maxD);
/// Same numbers from associativity of the full three-variable potential.
RecursionOutput solveP2Wdvv(int maxD);

/// Coefficients C_k (labels "C<k>", k >= 0) of p(t) = sum C_k t^k/(3k)! from its ODE.
RecursionOutput recursionCk(int maxK);
/// M_k (labels "M<k>") of m(r) = sum 4^{k-1} M_k r^k/(3k+1)!; M_1 is solved for, not seeded.
RecursionOutput recursionMk(int maxK);
/// Q_k (labels "Q<k>") of p(t) = 1/(24t) + log(t)/2 - 3/4 + sum Q_k t^k.
RecursionOutput recursionQk(int maxK);
/// W_k (labels "W<k>") of m(r) = log(r)/2 + sum W_k r^k.
RecursionOutput recursionWk(int maxK);
/// C_k again, from associativity of the hat potential (v2)^3/6 + v1 v2 v3 + e^{v3} p((v1)^3 e^{-2 v3}).
RecursionOutput solveP2S2Wdvv(int maxK);
/// M_k again, from associativity of the hat potential with v1 v2 m((v2)^3/(v1)^2).
RecursionOutput solveP2S3Wdvv(int maxK);

/// Quadric curve counts N_{k,l} (labels "N<k>,<l>") for 1 <= k+l <= maxDeg, seeds N_{0,1} = N_{1,0} = 1.
RecursionOutput recursionNkl(int maxDeg);
/// C_{k,l} of the p(a,b) ansatz for k+l <= maxJ (labels "C<k>,<l>"). Unknowns whose
/// factorial normalization is not rational are solved as raw coefficients (labels "c<k>,<l>").
RecursionOutput solveCkl(int maxJ);
/// a_{m1,m2} of the m(r1,r2) ansatz for m1+m2 <= maxOrder (labels "a<m1>,<m2>"), seed a_{1,1} = 1.
RecursionOutput solveAmm(int maxOrder);

/// Coefficients g_m of gamma = sum g_m e^{m s} from the Chazy equation, seeds g_0 = 1/6, g_1 = -4.
RecursionOutput solveChazy(int maxM);

/// Names accepted by runRecursion: nd, nd-ode, nd-wdvv, ck, ck-wdvv, mk, mk-wdvv, qk, wk, nkl, ckl, amm, chazy.
std::vector<std::string> recursionNames();
RecursionOutput runRecursion(const std::string& name, int maxIndex);

}  // namespace frobwdvv
