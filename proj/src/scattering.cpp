#include "casimir/scattering.hpp"

#include "casimir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace casimir {

namespace {

constexpr double kClampWindow = 1e-12;

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; });
}

double reflection_denominator(const Mirror& m, const ScaledCoupling& sc, double omega) {
    const double d = m.is_perfect() ? sc.norm2 : sc.norm2 + 2.0 * omega / m.strength();
    if (!(d > 0.0))
        throw DegenerateCouplingError("scaled coupling vanishes at w = " + std::to_string(omega) +
                                      " for a perfect mirror");
    return d;
}

// Everything the two-mirror determinant needs at one (w, x).
struct PairTerms {
    ScaledCoupling a, b;
    double da = 0.0, db = 0.0;
    std::vector<double> k;

    PairTerms(const Mirror& ma, const Mirror& mb, const ChannelSet& cs, FrequencyPoint omega)
        : a(scale_coupling(ma, cs, omega)), b(scale_coupling(mb, cs, omega)),
          da(reflection_denominator(ma, a, omega)), db(reflection_denominator(mb, b, omega)),
          k(wavenumbers(cs, omega)) {}

    // D_A D_B - s^2 assembled from non-negative pieces:
    //   |a|^2|b|^2 - c^2 = sum_{i<j} (a_i b_j - a_j b_i)^2      (Lagrange)
    //   c^2 - s^2        = (c - s)(c + s),  c - s = sum a_i b_i (1 - p_i)
    // plus the finite-strength terms. Avoids 1 - q cancellation as w x -> 0.
    double numerator(double x, double& s) const {
        const auto n = k.size();
        double lag = 0.0, c = 0.0, cms = 0.0;
        s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ab = a.components[i] * b.components[i];
            c += ab;
            s += ab * std::exp(-k[i] * x);
            cms -= ab * std::expm1(-k[i] * x);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double cross = a.components[i] * b.components[j] - a.components[j] * b.components[i];
                lag += cross * cross;
            }
        }
        const double ea = da - a.norm2;
        const double eb = db - b.norm2;
        return lag + cms * (c + s) + a.norm2 * eb + b.norm2 * ea + ea * eb;
    }
};

void check_pair(const Mirror& a, const Mirror& b, const ChannelSet& cs, double x) {
    if (a.channels() != cs.size() || b.channels() != cs.size())
        throw DomainError("mirror coupling length does not match the channel count");
    if (!(x > 0.0)) throw DomainError("separation must be positive");
}

} // namespace

Mirror::Mirror(std::vector<double> coupling, double strength, double position)
    : constant_(std::move(coupling)), channels_(constant_.size()), strength_(strength),
      position_(position) {
    if (constant_.empty()) throw DomainError("mirror coupling must have at least one component");
    if (all_zero(constant_)) throw DomainError("mirror coupling vector is identically zero");
    check_strength();
}

Mirror Mirror::from_function(CouplingFunction coupling, std::size_t channels, double strength,
                             double position) {
    if (!coupling) throw DomainError("empty coupling function");
    if (channels == 0) throw DomainError("mirror coupling must have at least one component");
    Mirror m;
    m.function_ = std::move(coupling);
    m.channels_ = channels;
    m.strength_ = strength;
    m.position_ = position;
    m.check_strength();
    return m;
}

Mirror Mirror::with_constant_scaled_coupling(const ChannelSet& cs, std::vector<double> scaled,
                                             double strength, double position) {
    if (scaled.size() != cs.size())
        throw DomainError("scaled coupling length does not match the channel count");
    if (all_zero(scaled)) throw DomainError("mirror coupling vector is identically zero");
    auto fn = [cs, scaled](double omega) {
        std::vector<double> alpha(scaled.size());
        for (std::size_t i = 0; i < scaled.size(); ++i)
            alpha[i] = scaled[i] / std::sqrt(cs[i].dk_domega(omega));
        return alpha;
    };
    return from_function(std::move(fn), scaled.size(), strength, position);
}

void Mirror::check_strength() const {
    if (!(strength_ > 0.0)) throw DomainError("mirror strength must be positive");
}

std::vector<double> Mirror::coupling(double omega) const {
    if (!function_) return constant_;
    auto v = function_(omega);
    if (v.size() != channels_)
        throw DomainError("coupling function returned the wrong number of components");
    return v;
}

const std::vector<double>& Mirror::constant_coupling() const {
    if (function_) throw DomainError("mirror has a frequency-dependent coupling");
    return constant_;
}

Mirror Mirror::at(double position) const {
    Mirror m = *this;
    m.position_ = position;
    return m;
}

ScaledCoupling scale_coupling(const Mirror& m, const ChannelSet& cs, FrequencyPoint omega) {
    if (m.channels() != cs.size())
        throw DomainError("mirror coupling length does not match the channel count");
    const auto alpha = m.coupling(omega);
    ScaledCoupling sc;
    sc.components.resize(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        sc.components[i] = std::sqrt(cs[i].dk_domega(omega)) * alpha[i];
        sc.norm2 += sc.components[i] * sc.components[i];
    }
    return sc;
}

Eigen::MatrixXd reflection_matrix(const Mirror& m, const ChannelSet& cs, FrequencyPoint omega) {
    const auto sc = scale_coupling(m, cs, omega);
    const double d = reflection_denominator(m, sc, omega);
    const Eigen::Map<const Eigen::VectorXd> a(sc.components.data(),
                                               static_cast<Eigen::Index>(sc.components.size()));
    return -(a * a.transpose()) / d;
}

DeterminantValue pair_determinant(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                                  FrequencyPoint omega, double x) {
    check_pair(a, b, cs, x);
    const PairTerms t(a, b, cs, omega);
    double s = 0.0;
    const double num = t.numerator(x, s);
    const double q = (s / t.da) * (s / t.db);
    DeterminantValue dv;
    dv.value = std::min(num / t.da / t.db, 1.0);  // num <= da db; the quotient can round up
    dv.log_value = q < 0.5 ? std::log1p(-q) : std::log(num) - std::log(t.da) - std::log(t.db);
    return dv;
}

double pair_determinant_dense(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                              FrequencyPoint omega, double x) {
    check_pair(a, b, cs, x);
    const auto ra = reflection_matrix(a, cs, omega);
    const auto rb = reflection_matrix(b, cs, omega);
    const auto p = propagation_kernel(cs, omega, x);
    const Eigen::Map<const Eigen::VectorXd> pv(p.data(), static_cast<Eigen::Index>(p.size()));
    const Eigen::MatrixXd prop = pv.asDiagonal();
    const auto n = static_cast<Eigen::Index>(cs.size());
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - ra * prop * rb * prop;
    return m.partialPivLu().determinant();
}

double pair_determinant_dx(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                           FrequencyPoint omega, double x) {
    check_pair(a, b, cs, x);
    const PairTerms t(a, b, cs, omega);
    double s = 0.0;
    const double num = t.numerator(x, s);
    // ds/dx = -sum_i k_i a_i b_i exp(-k_i x)
    double kterm = 0.0;
    for (std::size_t i = 0; i < t.k.size(); ++i)
        kterm += t.k[i] * t.a.components[i] * t.b.components[i] * std::exp(-t.k[i] * x);
    if (s == 0.0 || kterm == 0.0) return 0.0;
    return 2.0 * s * kterm / num;
}

ProductSpectrum product_eigenvalues(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                                    FrequencyPoint omega) {
    const Eigen::MatrixXd neg_ra = -reflection_matrix(a, cs, omega);
    const Eigen::MatrixXd neg_rb = -reflection_matrix(b, cs, omega);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sqrt_solver(neg_ra);
    Eigen::VectorXd ev = sqrt_solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd root = sqrt_solver.eigenvectors() * ev.asDiagonal() *
                                 sqrt_solver.eigenvectors().transpose();
    const Eigen::MatrixXd sym = root * neg_rb * root;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);

    ProductSpectrum out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        double v = solver.eigenvalues()[i];
        if (v < 0.0 && v > -kClampWindow) {
            v = 0.0;
        } else if (v > 1.0 && v < 1.0 + kClampWindow) {
            v = 1.0;
            ++out.clamped;
        }
        out.values.push_back(v);
    }
    std::sort(out.values.begin(), out.values.end(), std::greater<>());
    return out;
}

} // namespace casimir
