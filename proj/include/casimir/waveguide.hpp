#pragma once

// Quasi-1D reduction of a circular waveguide of radius R: each transverse
// mode becomes a 1D channel of mass zeta / R, zeta a zero of J_m (TM) or of
// J_m' (TE).

#include "casimir/dispersion.hpp"

#include <string>
#include <vector>

namespace casimir {

enum class BesselRootKind { J, J_prime };
enum class Polarization { TM, TE, both };

/// J_m(x) for integer m >= 0 and x >= 0. Ascending series for x <= 4,
/// normalized backward (Miller) recurrence above.
double bessel_j(int m, double x);

/// dJ_m/dx.
double bessel_j_prime(int m, double x);

/// k-th positive root (k >= 1) of J_m or J_m'. For J_0' the trivial root at
/// x = 0 is not counted.
double bessel_zero(int m, int k, BesselRootKind kind);

struct WaveguideSpec {
    double radius = 1.0;
    double max_mass = 1.0;
    Polarization polarization = Polarization::TM;
    int angular_orders = 0;  ///< m_max

    void validate() const;
};

struct WaveguideMode {
    int order = 0;       ///< angular index m
    int root_index = 0;  ///< k
    Polarization polarization = Polarization::TM;
    double zeta = 0.0;
    double mass = 0.0;
};

/// Every mode with mass <= max_mass, sorted by mass; m >= 1 modes appear twice
/// (cos and sin angular partners).
std::vector<WaveguideMode> waveguide_modes(const WaveguideSpec& spec);

/// Channel masses of waveguide_modes. Throws EmptyChannelSetError if no mode
/// lies below the cutoff.
ChannelSet channelize(const WaveguideSpec& spec);

std::string to_string(Polarization p);

} // namespace casimir
