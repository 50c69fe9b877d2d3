#include "casimir/lattice.hpp"

#include "casimir/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace casimir {

namespace {

constexpr double kCommensurateTol = 1e-6;

[[noreturn]] void violated(const std::string& what) { throw PreconditionError(what); }

void check_spec(const LatticeSpec& spec, const ChannelSet& cs) {
    if (spec.sites < 100) violated("lattice needs at least 100 sites");
    if (!(spec.spacing > 0.0) || !std::isfinite(spec.spacing))
        violated("lattice spacing must be positive");
    if (!cs.all_massive()) violated("lattice oracle supports massive channels only");
    const long dim = static_cast<long>(cs.size()) * spec.sites;
    if (dim > kMaxLatticeDimension) {
        std::ostringstream os;
        os << "lattice dimension n*N = " << dim << " exceeds " << kMaxLatticeDimension;
        violated(os.str());
    }
    const auto masses = cs.masses();
    const double m_max = *std::max_element(masses.begin(), masses.end());
    if (m_max > 0.0 && spec.spacing > 0.02 / m_max) {
        std::ostringstream os;
        os << "lattice spacing h = " << spec.spacing << " exceeds 0.02/m_max = " << 0.02 / m_max;
        violated(os.str());
    }
}

int separation_sites(const LatticeSpec& spec, double x, const char* name) {
    const double r = x / spec.spacing;
    const double n = std::round(r);
    if (std::abs(r - n) > kCommensurateTol * std::max(1.0, r)) {
        std::ostringstream os;
        os << name << " = " << x << " is not a multiple of the lattice spacing " << spec.spacing;
        violated(os.str());
    }
    return static_cast<int>(n);
}

// Left outer cavity length p with p + q = s and 1/p + 1/q = target.
double balanced_left(double s, double target) {
    const double disc = 0.25 * s * s - s / target;
    return 0.5 * s - std::sqrt(std::max(disc, 0.0));
}

} // namespace

int LatticeSpec::nearest_site(double x) const { return static_cast<int>(std::lround(x / spacing)); }

double zero_point_energy(const LatticeSpec& spec, const ChannelSet& cs,
                         const std::vector<Mirror>& mirrors) {
    check_spec(spec, cs);
    const int n = static_cast<int>(cs.size());
    const int sites = spec.sites;
    const double h = spec.spacing;
    const auto masses = cs.masses();

    for (const auto& m : mirrors) {
        if (m.is_perfect()) violated("lattice mirrors need finite strength");
        if (m.channels() != cs.size()) violated("mirror coupling length does not match the channel count");
        const int s = spec.nearest_site(m.position());
        if (s < 1 + kWallMarginSites || s > sites - kWallMarginSites) {
            std::ostringstream os;
            os << "mirror at " << m.position() << " is closer than " << kWallMarginSites
               << " sites to a wall";
            violated(os.str());
        }
    }

    // Site-major ordering (index = site * n + channel) keeps H banded with kd = n.
    const lapack_int dim = static_cast<lapack_int>(n) * sites;
    const lapack_int kd = n;
    const lapack_int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * dim, 0.0);
    auto upper = [&](lapack_int i, lapack_int j) -> double& {  // i <= j
        return ab[static_cast<std::size_t>(j) * ldab + (kd + i - j)];
    };
    const double inv_h2 = 1.0 / (h * h);
    for (int s = 0; s < sites; ++s)
        for (int c = 0; c < n; ++c) {
            const lapack_int i = s * n + c;
            upper(i, i) = 2.0 * inv_h2 + masses[c] * masses[c];
            if (s + 1 < sites) upper(i, i + n) = -inv_h2;
        }
    for (const auto& m : mirrors) {
        const int s = spec.nearest_site(m.position()) - 1;  // site 1 is row 0
        const auto& alpha = m.constant_coupling();
        const double w = m.strength() / h;
        for (int c = 0; c < n; ++c)
            for (int d = c; d < n; ++d) upper(s * n + c, s * n + d) += w * alpha[c] * alpha[d];
    }

    std::vector<double> eig(static_cast<std::size_t>(dim));
    const lapack_int info =
        LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', dim, kd, ab.data(), ldab, eig.data(), nullptr, 1);
    if (info != 0) {
        std::ostringstream os;
        os << "banded eigensolver failed (info = " << info << ")";
        throw NonConvergenceError(os.str(), 0.0, 0.0);
    }
    const double scale = std::max(std::abs(eig.front()), std::abs(eig.back()));
    if (eig.front() < -1e-12 * scale) {
        std::ostringstream os;
        os << "lattice Hamiltonian is indefinite (lowest eigenvalue " << eig.front() << ")";
        throw IndefiniteMatrixError(os.str());
    }
    long double sum = 0.0L;
    for (double e : eig) sum += std::sqrt(std::max(e, 0.0));
    return static_cast<double>(0.5L * sum);
}

BalancedPlacement balanced_placement(const LatticeSpec& spec, double x, double x_ref) {
    if (!(spec.spacing > 0.0)) violated("lattice spacing must be positive");
    const int nx = separation_sites(spec, x, "separation");
    const int nref = separation_sites(spec, x_ref, "reference separation");
    if (nx < 1 || nref < 1) violated("separations must span at least one lattice site");

    // Outer cavities run from wall (site 0) to A and from B to wall (site N+1).
    const int total = spec.sites + 1;
    const int wide = std::max(nx, nref);
    const double centered = 0.5 * (total - wide);
    const double target = 2.0 / centered;

    auto place = [&](int sep) {
        PairSites p;
        if (sep == wide) {
            p.a = static_cast<int>(std::lround(centered));
        } else {
            p.a = static_cast<int>(std::lround(balanced_left(total - sep, target)));
        }
        p.b = p.a + sep;
        if (p.a < 1 + kWallMarginSites || p.b > spec.sites - kWallMarginSites) {
            std::ostringstream os;
            os << "separation " << sep * spec.spacing << " leaves less than " << kWallMarginSites
               << " sites between a mirror and a wall";
            violated(os.str());
        }
        return p;
    };
    return {place(nx), place(nref)};
}

double interaction_energy(const LatticeSpec& spec, const ChannelSet& cs, const Mirror& a,
                          const Mirror& b, double x, double x_ref) {
    check_spec(spec, cs);
    if (!(x > 0.0) || !(x_ref > 0.0)) violated("separations must be positive");
    if (spec.box_length() < 10.0 * x) {
        std::ostringstream os;
        os << "box length " << spec.box_length() << " is below 10x the separation " << x;
        violated(os.str());
    }
    if (spec.spacing > 0.02 * x) {
        std::ostringstream os;
        os << "lattice spacing h = " << spec.spacing << " exceeds 0.02x the separation " << x;
        violated(os.str());
    }
    const auto masses = cs.masses();
    const double m_min = *std::min_element(masses.begin(), masses.end());
    if (m_min > 0.0) {
        if (x_ref < 5.0 / m_min) {
            std::ostringstream os;
            os << "reference separation " << x_ref << " is below 5/m_min = " << 5.0 / m_min;
            violated(os.str());
        }
    } else if (x_ref < 5.0 * x) {
        std::ostringstream os;
        os << "reference separation " << x_ref << " is below 5x the separation " << x
           << " (massless channel present)";
        violated(os.str());
    }

    const auto placement = balanced_placement(spec, x, x_ref);
    auto energy_at = [&](const PairSites& p) {
        return zero_point_energy(spec, cs, {a.at(spec.position(p.a)), b.at(spec.position(p.b))});
    };
    if (placement.at_x.a == placement.at_ref.a && placement.at_x.b == placement.at_ref.b)
        return 0.0;
    return energy_at(placement.at_x) - energy_at(placement.at_ref);
}

} // namespace casimir
