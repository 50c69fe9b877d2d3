#pragma once

// Force-zero location shared by both energy models.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace casimir {

enum class Spacing { log, linear };

/// Per-sample status bits of an energy/force curve.
enum SampleFlag : std::uint8_t {
    kSampleOk = 0,
    kEnergyFailed = 1u << 0,
    kForceFailed = 1u << 1,
};

/// `count` points from lo to hi inclusive. Log spacing needs 0 < lo.
std::vector<double> make_grid(double lo, double hi, std::size_t count, Spacing spacing);

struct ScanRange {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n_probe = 64;
};

enum class EquilibriumKind { stable_minimum, unstable_maximum };

std::string to_string(EquilibriumKind kind);

struct Equilibrium {
    double x = 0.0;
    EquilibriumKind kind = EquilibriumKind::stable_minimum;
    bool converged = true;  ///< false if bisection hit a failing force evaluation
};

struct EquilibriumReport {
    std::vector<Equilibrium> zeros;
    double scan_lo = 0.0;
    double scan_hi = 0.0;
};

/// Brackets sign changes of `force` on a log-spaced probe grid, bisects each to
/// relative width `rel_width`, and classifies x* by the energy itself:
/// stable_minimum iff E(x*-d) > E(x*) < E(x*+d), d = 1e-3 x*. When the energy
/// comparison is inconclusive the force sign pattern decides (F > 0 below and
/// F < 0 above is a minimum of E, since F = -dE/dx).
EquilibriumReport locate_force_zeros(const std::function<double(double)>& force,
                                     const std::function<double(double)>& energy,
                                     const ScanRange& scan, double rel_width = 1e-8);

} // namespace casimir
