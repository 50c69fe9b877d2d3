#pragma once

#include <functional>
#include <vector>

namespace casimir {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_refinement_level = 12;

    /// Throws DomainError on non-positive tolerances or a max level below 3.
    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    int level = 0;
    /// |I_l - I_{l-1}| for l = 1..level.
    std::vector<double> error_history;
};

using Integrand = std::function<double(double)>;

/// Integral of f over (0, inf) by exp-sinh trapezoidal refinement.
///
/// Nodes w = exp(pi/2 sinh t) on t in [-4, 4] with step 2^-level; the node set
/// at each level is fixed, so results do not depend on evaluation order.
/// Tolerates integrable endpoint singularities at w -> 0+ (e.g. ln w) and
/// exponential or integrable power decay at infinity. Convergence is declared
/// at level >= 3 once |I_l - I_{l-1}| <= max(rel_tol |I_l|, abs_tol).
///
/// Throws NonConvergenceError (with the last estimate) if the maximum level is
/// reached, DomainError if f returns a non-finite value.
IntegralResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec = {});

} // namespace casimir
