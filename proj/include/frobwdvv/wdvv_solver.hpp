#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frobwdvv/linalg.hpp"
#include "frobwdvv/report.hpp"
#include "frobwdvv/symfun.hpp"

namespace frobwdvv {

/// Unknown coefficient x multiplying a fixed monomial (scale included).
struct Slot {
    int order = 0;
    std::string label;
    ClosedForm monomial;
};

/// A residual that is at most quadratic in the candidate f. Every returned list
/// has the same length and ordering. With a cutoff the terms of degree <= cutoff
/// must be exact; higher terms may be missing.
struct Residual {
    std::function<std::vector<ClosedForm>(const ClosedForm& f, const std::optional<Rational>& cutoff)> value;
    /// Derivative at f in direction m. Defaults to (value(f+m) - value(f-m))/2.
    std::function<std::vector<ClosedForm>(const ClosedForm& f, const ClosedForm& m,
                                          const std::optional<Rational>& cutoff)>
        linear;
};

struct Ansatz {
    std::string name;
    std::vector<std::string> variables;
    ClosedForm fixed;  // known part, seeds included
    std::function<std::vector<Slot>(int order)> slots;
    int firstOrder = 1;
    /// Degree of residual terms; the order field is ignored.
    Grading grading;
    Residual residual;
    /// Let unknowns still pending after maxOrder stay free; they are listed in
    /// report.data["undetermined"] and left out of the solution.
    bool trailingFree = false;
    /// Orders beyond the current one scanned for the cutoff degree; raise it when
    /// derivatives can lower the degree of a later unknown below the next one.
    int lookahead = 1;
};

struct RecursionOutput {
    std::string name;
    std::vector<std::pair<std::string, QRad>> values;  // in solve order
    ClosedForm solution;                               // fixed part plus solved slots
    Report report;

    /// Throws std::out_of_range for an unknown label.
    const QRad& value(const std::string& label) const;
    bool has(const std::string& label) const;
};

/// Determines the slots order by order. The equations used at order o are all
/// residual terms of degree below the entry degree of orders o+1..o+lookahead (the lowest
/// degree at which an order o+1 unknown appears linearly). Unknowns left free
/// carry over to the next order. After the last order every residual term
/// below the entry degree of order maxOrder+1 is checked on the full solution.
RecursionOutput solveOrderByOrder(const Ansatz& a, int maxOrder);

/// Associativity residual of a potential in n variables, graded by g.
Residual wdvvResidual(std::size_t n, Matrix<Rational> etaInv, Grading g);

}  // namespace frobwdvv
