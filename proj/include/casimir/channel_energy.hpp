#pragma once

// Frequency-integrated interaction energy and force of two rank-1 mirrors:
//   E(x) =  1/(2 pi) int_0^inf ln det(1 - r_A P r_B P) dw
//   F(x) = -dE/dx, negative F is attraction.

#include "casimir/equilibria.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/scattering.hpp"

#include <vector>

namespace casimir {

struct EnergyResult {
    double value = 0.0;
    double error = 0.0;
};

struct CurveSample {
    double x = 0.0;
    double energy = 0.0;
    double force = 0.0;
    double energy_err = 0.0;
    double force_err = 0.0;
    std::uint8_t flags = kSampleOk;  ///< on failure the value holds the last estimate
};

struct EnergyCurve {
    std::vector<CurveSample> samples;
    bool any_failed() const noexcept;
};

EnergyResult energy(const Mirror& a, const Mirror& b, const ChannelSet& cs, double x,
                    const QuadratureSpec& spec = {});

EnergyResult force(const Mirror& a, const Mirror& b, const ChannelSet& cs, double x,
                   const QuadratureSpec& spec = {});

/// Energy and force at every grid point (strictly increasing, positive).
/// Failed samples are flagged; throws NonConvergenceError only if all fail.
EnergyCurve energy_curve(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                         const std::vector<double>& grid, const QuadratureSpec& spec = {});

EquilibriumReport find_equilibria(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                                  const ScanRange& scan, const QuadratureSpec& spec = {});

/// Li2(z) = sum_{k>=1} z^k / k^2 for |z| <= 1.
double dilog(double z);

/// Predicted limit of x E(x) as x -> 0 for perfect mirrors with constant couplings:
/// -Li2((a.b)^2 / (|a|^2 |b|^2)) / (4 pi).
double short_distance_coefficient(const Mirror& a, const Mirror& b);

} // namespace casimir
