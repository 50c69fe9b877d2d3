#include "casimir/equilibria.hpp"

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

#include <cmath>

namespace casimir {

std::vector<double> make_grid(double lo, double hi, std::size_t count, Spacing spacing) {
    if (count < 2) throw DomainError("grid needs at least two points");
    if (!(lo < hi)) throw DomainError("grid bounds must satisfy lo < hi");
    if (spacing == Spacing::log && !(lo > 0.0))
        throw DomainError("log grid needs a positive lower bound");
    std::vector<double> g(count);
    const double denom = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / denom;
        g[i] = spacing == Spacing::log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::string to_string(EquilibriumKind kind) {
    return kind == EquilibriumKind::stable_minimum ? "stable_minimum" : "unstable_maximum";
}

EquilibriumReport locate_force_zeros(const std::function<double(double)>& force,
                                     const std::function<double(double)>& energy,
                                     const ScanRange& scan, double rel_width) {
    if (!(scan.lo > 0.0) || !(scan.lo < scan.hi))
        throw DomainError("equilibrium scan needs 0 < lo < hi");
    if (scan.n_probe < 8) throw DomainError("equilibrium scan needs at least 8 probes");

    const auto probes = make_grid(scan.lo, scan.hi, scan.n_probe, Spacing::log);
    std::vector<double> f(probes.size());
    parallel_for(probes.size(), [&](std::size_t i) { f[i] = force(probes[i]); });

    EquilibriumReport report;
    report.scan_lo = scan.lo;
    report.scan_hi = scan.hi;

    for (std::size_t i = 0; i + 1 < probes.size(); ++i) {
        if (!(f[i] * f[i + 1] < 0.0)) continue;
        double lo = probes[i], hi = probes[i + 1];
        const double f_lo_sign = f[i] > 0.0 ? 1.0 : -1.0;
        Equilibrium eq;
        try {
            while (hi - lo > rel_width * 0.5 * (hi + lo)) {
                const double mid = 0.5 * (lo + hi);
                const double fm = force(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                (fm * f_lo_sign > 0.0 ? lo : hi) = mid;
            }
        } catch (const Error&) {
            eq.converged = false;
        }
        eq.x = 0.5 * (lo + hi);

        bool classified = false;
        if (eq.converged) {
            try {
                const double d = 1e-3 * eq.x;
                const double e0 = energy(eq.x);
                const double em = energy(eq.x - d);
                const double ep = energy(eq.x + d);
                if (em > e0 && ep > e0) {
                    eq.kind = EquilibriumKind::stable_minimum;
                    classified = true;
                } else if (em < e0 && ep < e0) {
                    eq.kind = EquilibriumKind::unstable_maximum;
                    classified = true;
                }
            } catch (const Error&) {
            }
        }
        if (!classified)
            eq.kind = f_lo_sign > 0.0 ? EquilibriumKind::stable_minimum
                                      : EquilibriumKind::unstable_maximum;
        report.zeros.push_back(eq);
    }
    return report;
}

} // namespace casimir
