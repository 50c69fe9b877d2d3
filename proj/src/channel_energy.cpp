#include "casimir/channel_energy.hpp"

#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace casimir {

namespace {

constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

void check_separation(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("separation must be positive");
}

} // namespace

bool EnergyCurve::any_failed() const noexcept {
    for (const auto& s : samples)
        if (s.flags != kSampleOk) return true;
    return false;
}

EnergyResult energy(const Mirror& a, const Mirror& b, const ChannelSet& cs, double x,
                    const QuadratureSpec& spec) {
    check_separation(x);
    const auto r = integrate_semi_infinite(
        [&](double w) { return pair_determinant(a, b, cs, FrequencyPoint(w), x).log_value; }, spec);
    return {kInvTwoPi * r.value, kInvTwoPi * r.error_estimate};
}

EnergyResult force(const Mirror& a, const Mirror& b, const ChannelSet& cs, double x,
                   const QuadratureSpec& spec) {
    check_separation(x);
    const auto r = integrate_semi_infinite(
        [&](double w) { return pair_determinant_dx(a, b, cs, FrequencyPoint(w), x); }, spec);
    return {-kInvTwoPi * r.value, kInvTwoPi * r.error_estimate};
}

EnergyCurve energy_curve(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                         const std::vector<double>& grid, const QuadratureSpec& spec) {
    if (grid.empty()) throw DomainError("energy curve needs a non-empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        check_separation(grid[i]);
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw DomainError("energy curve grid must be strictly increasing");
    }
    EnergyCurve curve;
    curve.samples.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto& s = curve.samples[i];
        s.x = grid[i];
        try {
            const auto e = energy(a, b, cs, s.x, spec);
            s.energy = e.value;
            s.energy_err = e.error;
        } catch (const NonConvergenceError& err) {
            s.energy = kInvTwoPi * err.estimate();
            s.energy_err = kInvTwoPi * err.error_bound();
            s.flags |= kEnergyFailed;
        } catch (const DomainError&) {
            s.energy = std::nan("");
            s.flags |= kEnergyFailed;
        }
        try {
            const auto f = force(a, b, cs, s.x, spec);
            s.force = f.value;
            s.force_err = f.error;
        } catch (const NonConvergenceError& err) {
            s.force = -kInvTwoPi * err.estimate();
            s.force_err = kInvTwoPi * err.error_bound();
            s.flags |= kForceFailed;
        } catch (const DomainError&) {
            s.force = std::nan("");
            s.flags |= kForceFailed;
        }
    });
    bool all_failed = true;
    for (const auto& s : curve.samples)
        if (s.flags == kSampleOk) all_failed = false;
    if (all_failed) throw NonConvergenceError("every energy curve sample failed", 0.0, 0.0);
    return curve;
}

EquilibriumReport find_equilibria(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                                  const ScanRange& scan, const QuadratureSpec& spec) {
    return locate_force_zeros([&](double x) { return force(a, b, cs, x, spec).value; },
                              [&](double x) { return energy(a, b, cs, x, spec).value; }, scan);
}

double dilog(double z) {
    if (!(std::abs(z) <= 1.0)) {
        std::ostringstream os;
        os << "dilog argument must satisfy |z| <= 1, got " << z;
        throw DomainError(os.str());
    }
    constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
    if (z == 1.0) return zeta2;
    if (z < 0.0) {
        // Landen: maps [-1, 0) onto (0, 1/2]
        const double l = std::log1p(-z);
        return -dilog(z / (z - 1.0)) - 0.5 * l * l;
    }
    if (z > 0.5) return zeta2 - std::log(z) * std::log1p(-z) - dilog(1.0 - z);

    double sum = 0.0, power = z;
    for (int k = 1; k < 200; ++k) {
        const double term = power / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
        power *= z;
    }
    return sum;
}

double short_distance_coefficient(const Mirror& a, const Mirror& b) {
    const auto& alpha = a.constant_coupling();
    const auto& beta = b.constant_coupling();
    if (alpha.size() != beta.size())
        throw DomainError("mirror couplings have different channel counts");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        ab += alpha[i] * beta[i];
        aa += alpha[i] * alpha[i];
        bb += beta[i] * beta[i];
    }
    if (aa == 0.0 || bb == 0.0) throw DegenerateCouplingError("zero coupling vector");
    const double cos2 = std::min(1.0, (ab / aa) * (ab / bb));
    return -dilog(cos2) / (4.0 * std::numbers::pi);
}

} // namespace casimir
