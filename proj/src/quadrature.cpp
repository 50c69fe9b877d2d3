#include "casimir/quadrature.hpp"

#include "casimir/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace casimir {

namespace {

constexpr double kHalfWidth = 4.0;  // t range; w spans ~[2e-19, 4e18]
constexpr int kMinLevel = 3;

double weighted_sample(const Integrand& f, double t) {
    const double half_pi = 0.5 * std::numbers::pi;
    const double omega = std::exp(half_pi * std::sinh(t));
    const double jac = half_pi * std::cosh(t) * omega;
    if (omega == 0.0 || !std::isfinite(jac)) return 0.0;
    const double y = f(omega);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os << "integrand is not finite at w = " << omega;
        throw DomainError(os.str());
    }
    return y * jac;
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("quadrature rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw DomainError("quadrature abs_tol must be positive");
    if (max_refinement_level < kMinLevel)
        throw DomainError("quadrature max_refinement_level must be at least 3");
}

IntegralResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec) {
    spec.validate();
    IntegralResult r;

    // level 0: unit step over the integer nodes
    const int half = static_cast<int>(kHalfWidth);
    double sum = 0.0;
    for (int j = -half; j <= half; ++j) sum += weighted_sample(f, j);
    r.evaluations = 2 * half + 1;
    double estimate = sum;

    for (int level = 1; level <= spec.max_refinement_level; ++level) {
        const double h = std::ldexp(1.0, -level);
        const long nodes = static_cast<long>(kHalfWidth / h);
        // new odd nodes only
        double fresh = 0.0;
        for (long j = -nodes + 1; j < nodes; j += 2) fresh += weighted_sample(f, j * h);
        r.evaluations += nodes;
        sum += fresh;
        const double next = h * sum;
        const double err = std::abs(next - estimate);
        r.error_history.push_back(err);
        estimate = next;
        r.level = level;
        if (level >= kMinLevel && err <= std::max(spec.rel_tol * std::abs(next), spec.abs_tol)) {
            r.value = next;
            r.error_estimate = err;
            return r;
        }
    }
    std::ostringstream os;
    os << "quadrature did not converge after level " << spec.max_refinement_level
       << " (estimate " << estimate << ", error " << r.error_history.back() << ")";
    throw NonConvergenceError(os.str(), estimate, r.error_history.back());
}

} // namespace casimir
