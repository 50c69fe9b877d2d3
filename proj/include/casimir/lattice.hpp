#pragma once

// Brute-force zero-point energies of a discretized multi-channel field in a
// box with fixed ends:
//   H = -d^2/dx^2 (3-point stencil) + m_c^2 + sum_mirrors (lambda/h) alpha alpha^T
// on the mirror's nearest site, E0 = 1/2 sum sqrt(eig H).
// Independent of the scattering/determinant code; used to validate it.

#include "casimir/dispersion.hpp"
#include "casimir/scattering.hpp"

#include <vector>

namespace casimir {

struct LatticeSpec {
    int sites = 0;         ///< N interior sites; walls sit at 0 and (N+1) h
    double spacing = 0.0;  ///< h

    double box_length() const noexcept { return (sites + 1) * spacing; }
    double position(int site) const noexcept { return site * spacing; }
    int nearest_site(double x) const;
};

inline constexpr int kWallMarginSites = 20;
inline constexpr long kMaxLatticeDimension = 20000;

/// 1/2 sum_i sqrt(eig_i(H)). Mirrors must have finite strength, constant
/// couplings, and sit at least 20 sites from either wall. Throws
/// PreconditionError naming the violated requirement, IndefiniteMatrixError
/// if H has a negative eigenvalue, NonConvergenceError if the eigensolver fails.
double zero_point_energy(const LatticeSpec& spec, const ChannelSet& cs,
                         const std::vector<Mirror>& mirrors);

/// Site indices of mirrors A and B for one configuration.
struct PairSites {
    int a = 0;
    int b = 0;
};

struct BalancedPlacement {
    PairSites at_x;
    PairSites at_ref;
};

/// Places the pair for separations x and x_ref so that the leading wall terms
/// -pi/24 (1/p + 1/q) of the two outer cavities (lengths p, q) match between
/// the two configurations. The larger separation sits centered; the other
/// pair is shifted until 1/p + 1/q agrees. Separations must be multiples of h.
BalancedPlacement balanced_placement(const LatticeSpec& spec, double x, double x_ref);

/// E0(separation x) - E0(separation x_ref) with identical box, spacing and
/// strengths, so cutoff-dependent self-energies cancel. Requirements (each
/// reported by name on violation): box >= 10 x; h <= 0.02 min(x, 1/m_max);
/// x_ref >= 5/m_min for all-massive sets, x_ref >= 5 x when a channel is massless.
double interaction_energy(const LatticeSpec& spec, const ChannelSet& cs, const Mirror& a,
                          const Mirror& b, double x, double x_ref);

} // namespace casimir
