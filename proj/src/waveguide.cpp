#include "casimir/waveguide.hpp"

#include "casimir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace casimir {

namespace {

constexpr double kSeriesLimit = 4.0;
constexpr double kScanStep = 0.25;

double series_j(int m, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= m; ++i) term *= h / i;
    double s = term;
    const double h2 = h * h;
    for (int k = 0; k < 200; ++k) {
        term *= -h2 / ((k + 1.0) * (k + 1.0 + m));
        s += term;
        if (std::abs(term) < 1e-17 * std::abs(s)) break;
    }
    return s;
}

// J_0..J_{m_hi}(x) by downward recurrence normalized with J_0 + 2 sum J_2k = 1.
std::vector<double> miller(int m_hi, double x) {
    const double top = std::max<double>(m_hi, x);
    int start = static_cast<int>(top + 20.0 + std::sqrt(40.0 * top));
    start += start % 2;
    std::vector<double> j(static_cast<std::size_t>(m_hi) + 1, 0.0);
    double next = 0.0, cur = 1e-30, norm = 0.0;
    for (int k = start; k >= 1; --k) {
        const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 <= m_hi) j[static_cast<std::size_t>(k - 1)] = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for (auto& v : j) v *= 1e-250;
        }
    }
    norm += cur;  // J_0
    for (auto& v : j) v /= norm;
    return j;
}

double j_value(int m, double x) {
    if (x == 0.0) return m == 0 ? 1.0 : 0.0;
    if (x <= kSeriesLimit) return series_j(m, x);
    return miller(m, x)[static_cast<std::size_t>(m)];
}

double target(int m, double x, BesselRootKind kind) {
    return kind == BesselRootKind::J ? j_value(m, x) : bessel_j_prime(m, x);
}

double refine_root(int m, double lo, double hi, BesselRootKind kind) {
    double flo = target(m, lo, kind);
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = target(m, mid, kind);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // Newton, kept inside the bracket
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 20; ++i) {
        double f, df;
        if (kind == BesselRootKind::J) {
            f = j_value(m, x);
            df = bessel_j_prime(m, x);
        } else {
            f = bessel_j_prime(m, x);
            df = -f / x - (1.0 - static_cast<double>(m) * m / (x * x)) * j_value(m, x);
        }
        if (df == 0.0) break;
        const double step = f / df;
        const double nx = x - step;
        if (nx <= lo || nx >= hi) break;
        x = nx;
        if (std::abs(step) <= 1e-16 * x) break;
    }
    return x;
}

} // namespace

double bessel_j(int m, double x) {
    if (m < 0) throw DomainError("bessel_j needs m >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j needs finite x >= 0");
    return j_value(m, x);
}

double bessel_j_prime(int m, double x) {
    if (m < 0) throw DomainError("bessel_j_prime needs m >= 0");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_j_prime needs finite x >= 0");
    if (m == 0) return -j_value(1, x);
    return 0.5 * (j_value(m - 1, x) - j_value(m + 1, x));
}

double bessel_zero(int m, int k, BesselRootKind kind) {
    if (m < 0) throw DomainError("Bessel order must be non-negative");
    if (k < 1) throw DomainError("Bessel root index must be at least 1");
    // No root of J_m or J_m' lies in (0, m]; J_0' = -J_1 has none in (0, 1/2].
    double lo = m == 0 ? 0.5 : static_cast<double>(m);
    double flo = target(m, lo, kind);
    int found = 0;
    for (;;) {
        const double hi = lo + kScanStep;
        const double fhi = target(m, hi, kind);
        if (fhi == 0.0 || (fhi > 0.0) != (flo > 0.0)) {
            if (++found == k) return fhi == 0.0 ? hi : refine_root(m, lo, hi, kind);
        }
        lo = hi;
        flo = fhi;
    }
}

void WaveguideSpec::validate() const {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("waveguide radius must be positive");
    if (!(max_mass > 0.0) || !std::isfinite(max_mass))
        throw DomainError("waveguide max_mass must be positive");
    if (angular_orders < 0) throw DomainError("waveguide angular_orders must be non-negative");
}

std::vector<WaveguideMode> waveguide_modes(const WaveguideSpec& spec) {
    spec.validate();
    std::vector<WaveguideMode> modes;
    const double zeta_max = spec.max_mass * spec.radius;
    auto collect = [&](Polarization pol, BesselRootKind kind) {
        for (int m = 0; m <= spec.angular_orders; ++m) {
            for (int k = 1;; ++k) {
                const double z = bessel_zero(m, k, kind);
                if (z > zeta_max) break;
                const WaveguideMode mode{m, k, pol, z, z / spec.radius};
                modes.push_back(mode);
                if (m >= 1) modes.push_back(mode);
            }
        }
    };
    if (spec.polarization != Polarization::TE) collect(Polarization::TM, BesselRootKind::J);
    if (spec.polarization != Polarization::TM) collect(Polarization::TE, BesselRootKind::J_prime);
    std::stable_sort(modes.begin(), modes.end(),
                     [](const WaveguideMode& a, const WaveguideMode& b) { return a.mass < b.mass; });
    return modes;
}

ChannelSet channelize(const WaveguideSpec& spec) {
    const auto modes = waveguide_modes(spec);
    if (modes.empty())
        throw EmptyChannelSetError("no waveguide mode has mass <= " + std::to_string(spec.max_mass));
    std::vector<double> masses;
    masses.reserve(modes.size());
    for (const auto& m : modes) masses.push_back(m.mass);
    return ChannelSet::from_masses(masses);
}

std::string to_string(Polarization p) {
    switch (p) {
    case Polarization::TM: return "TM";
    case Polarization::TE: return "TE";
    case Polarization::both: return "both";
    }
    return "?";
}

} // namespace casimir
