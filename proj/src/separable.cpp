#include "casimir/separable.hpp"

#include "casimir/dispersion.hpp"
#include "casimir/errors.hpp"
#include "casimir/parallel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace casimir {

namespace {

constexpr double kInvTwoPi = 0.5 * std::numbers::inv_pi;

struct Cluster {
    std::vector<double> coeff;  // prefactor * weight
    std::vector<double> pos;
};

Cluster evaluate(const FormFactor& f, double omega) {
    Cluster c;
    const double g = f.prefactor(omega);
    for (const auto& p : f.points()) {
        c.coeff.push_back(g * p.weight);
        c.pos.push_back(p.position);
    }
    return c;
}

// Smooth part of the kernel after removing the constant c0 = G0(0) that
// dominates the line kernel as w -> 0. Zero split for the 3D kernel.
struct KernelSplit {
    double c0 = 0.0;
    const GreenKernel* kernel;
    double omega;

    double remainder(double r) const {
        if (kernel->kind() == GreenKernel::Kind::line_massless)
            return std::expm1(-omega * r) / (2.0 * omega);
        return (*kernel)(r, omega);
    }
};

double bilinear(const Cluster& a, const Cluster& b, const std::function<double(double)>& k) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeff.size(); ++i)
        for (std::size_t j = 0; j < b.coeff.size(); ++j)
            s += a.coeff[i] * b.coeff[j] * k(std::abs(a.pos[i] - b.pos[j]));
    return s;
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// The pieces of ln(1 - t_A t_B g_AB^2) with
// num = (1 + G_AA)(1 + G_BB) - G_AB^2 = 1 + G_AA + G_BB + det[[G_AA, G_AB], [G_AB, G_BB]]
// where the 2x2 Gram determinant is formed without the 1/w^2 cancellation of the line kernel.
struct SeparableTerms {
    double gaa = 0.0, gbb = 0.0, gab = 0.0, num = 1.0;

    SeparableTerms(const Cluster& a, const Cluster& b, const GreenKernel& kernel, double omega) {
        auto k = [&](double r) { return kernel(r, omega); };
        gaa = bilinear(a, a, k);
        gbb = bilinear(b, b, k);
        gab = bilinear(a, b, k);

        KernelSplit split{0.0, &kernel, omega};
        if (kernel.kind() == GreenKernel::Kind::line_massless) split.c0 = 1.0 / (2.0 * omega);
        auto rem = [&](double r) { return split.remainder(r); };
        const double r11 = bilinear(a, a, rem);
        const double r22 = bilinear(b, b, rem);
        const double r12 = bilinear(a, b, rem);
        const double u1 = sum(a.coeff), u2 = sum(b.coeff);
        const double det2 = r11 * r22 - r12 * r12 +
                            split.c0 * (u1 * u1 * r22 - 2.0 * u1 * u2 * r12 + u2 * u2 * r11);
        num = 1.0 + gaa + gbb + std::max(det2, 0.0);
    }

    double log_value() const {
        const double q = (gab / (1.0 + gaa)) * (gab / (1.0 + gbb));
        if (q < 0.5) return std::log1p(-q);
        return std::log(num) - std::log1p(gaa) - std::log1p(gbb);
    }
};

void check_overlap(const FormFactor& fa, const FormFactor& fb, const GreenKernel& kernel) {
    if (kernel.kind() != GreenKernel::Kind::point3d) return;
    for (const auto& p : fa.points())
        for (const auto& q : fb.points())
            if (std::abs(p.position - q.position) < kernel.smear()) {
                std::ostringstream os;
                os << "clusters overlap: points at " << p.position << " and " << q.position
                   << " are closer than the smearing length " << kernel.smear();
                throw OverlapError(os.str());
            }
}

void check_shift(double a) {
    if (!std::isfinite(a)) throw DomainError("separation parameter must be finite");
}

long double kernel_ld(const GreenKernel& k, double r, double omega) {
    const long double w = omega;
    if (k.kind() == GreenKernel::Kind::line_massless) return std::exp(-w * r) / (2.0L * w);
    const long double rr = std::max(r, k.smear());
    return std::exp(-w * rr) / (4.0L * std::numbers::pi_v<long double> * rr);
}

} // namespace

GreenKernel GreenKernel::point3d(double smear) {
    if (!(smear > 0.0) || !std::isfinite(smear))
        throw DomainError("point3d smearing length must be positive");
    return GreenKernel(Kind::point3d, smear);
}

double GreenKernel::operator()(double r, double omega) const {
    if (kind_ == Kind::line_massless) return std::exp(-omega * r) / (2.0 * omega);
    const double rr = std::max(r, smear_);
    return std::exp(-omega * rr) / (4.0 * std::numbers::pi * rr);
}

double GreenKernel::derivative(double r, double omega) const {
    if (kind_ == Kind::line_massless) return -0.5 * std::exp(-omega * r);
    if (r <= smear_) return 0.0;
    return -std::exp(-omega * r) * (1.0 + omega * r) / (4.0 * std::numbers::pi * r * r);
}

double trap_prefactor(double omega) { return 1.0 + 1.0 / (omega * omega + 1.0); }

FormFactor::FormFactor(std::vector<PointSource> points, Prefactor prefactor)
    : points_(std::move(points)), prefactor_(std::move(prefactor)) {
    if (points_.empty()) throw DomainError("form factor needs at least one point source");
    if (!prefactor_) throw DomainError("form factor prefactor is empty");
    for (const auto& p : points_)
        if (!std::isfinite(p.position) || !std::isfinite(p.weight))
            throw DomainError("form factor points must be finite");
}

double FormFactor::total_weight() const noexcept {
    double s = 0.0;
    for (const auto& p : points_) s += p.weight;
    return s;
}

FormFactor FormFactor::shifted(double offset) const {
    FormFactor f = *this;
    for (auto& p : f.points_) p.position += offset;
    return f;
}

double gram(const FormFactor& fa, const FormFactor& fb, const GreenKernel& kernel, double omega) {
    const FrequencyPoint w(omega);
    return bilinear(evaluate(fa, w), evaluate(fb, w), [&](double r) { return kernel(r, w); });
}

double t_norm(const FormFactor& f, const GreenKernel& kernel, double omega) {
    return 1.0 / (1.0 + gram(f, f, kernel, omega));
}

double separable_log_determinant(const FormFactor& fa, const FormFactor& fb,
                                 const GreenKernel& kernel, double omega) {
    const FrequencyPoint w(omega);
    return SeparableTerms(evaluate(fa, w), evaluate(fb, w), kernel, w).log_value();
}

SeparableResult separable_energy(const FormFactor& fa, const FormFactor& fb,
                                 const GreenKernel& kernel, double a_shift,
                                 const QuadratureSpec& spec) {
    check_shift(a_shift);
    const auto a = fa.shifted(-a_shift);
    const auto b = fb.shifted(a_shift);
    check_overlap(a, b, kernel);
    const auto r = integrate_semi_infinite(
        [&](double w) { return separable_log_determinant(a, b, kernel, w); }, spec);
    return {kInvTwoPi * r.value, kInvTwoPi * r.error_estimate};
}

SeparableResult separable_force(const FormFactor& fa, const FormFactor& fb,
                                const GreenKernel& kernel, double a_shift,
                                const QuadratureSpec& spec) {
    check_shift(a_shift);
    const auto a = fa.shifted(-a_shift);
    const auto b = fb.shifted(a_shift);
    check_overlap(a, b, kernel);
    // d/da ln(1 - t_A t_B g^2) = -2 g g' / num, each cross distance grows at rate 2.
    auto integrand = [&](double w) {
        const Cluster ca = evaluate(a, w), cb = evaluate(b, w);
        const SeparableTerms t(ca, cb, kernel, w);
        if (t.gab == 0.0) return 0.0;
        double dgab = 0.0;
        for (std::size_t i = 0; i < ca.coeff.size(); ++i)
            for (std::size_t j = 0; j < cb.coeff.size(); ++j) {
                const double s = cb.pos[j] - ca.pos[i];
                if (s == 0.0) continue;
                dgab += ca.coeff[i] * cb.coeff[j] * kernel.derivative(std::abs(s), w) *
                        (s > 0.0 ? 2.0 : -2.0);
            }
        return -2.0 * t.gab * dgab / t.num;
    };
    const auto r = integrate_semi_infinite(integrand, spec);
    return {-kInvTwoPi * r.value, kInvTwoPi * r.error_estimate};
}

SeparableResult second_order_energy(const FormFactor& fa, const FormFactor& fb,
                                    const GreenKernel& kernel, const QuadratureSpec& spec) {
    check_overlap(fa, fb, kernel);
    if (kernel.kind() == GreenKernel::Kind::line_massless) {
        constexpr double w0 = 1e-12;
        const double leading =
            fa.prefactor(w0) * fa.total_weight() * fb.prefactor(w0) * fb.total_weight();
        double scale = 0.0;
        for (const auto& p : fa.points())
            for (const auto& q : fb.points()) scale += std::abs(p.weight * q.weight);
        scale *= std::abs(fa.prefactor(w0) * fb.prefactor(w0));
        if (std::abs(leading) > 1e-12 * scale)
            throw InfraredDivergenceError(
                "second-order energy diverges at w -> 0 on the massless line kernel "
                "when both clusters have nonzero total weight");
    }
    const auto r = integrate_semi_infinite(
        [&](double w) {
            const double g = gram(fa, fb, kernel, w);
            return g * g;
        },
        spec);
    return {-kInvTwoPi * r.value, kInvTwoPi * r.error_estimate};
}

MatrixCheck explicit_matrix_check(const FormFactor& fa, const FormFactor& fb,
                                  const GreenKernel& kernel, double omega) {
    const FrequencyPoint w(omega);
    const Cluster ca = evaluate(fa, w), cb = evaluate(fb, w);
    const auto p = static_cast<Eigen::Index>(ca.pos.size());
    const auto q = static_cast<Eigen::Index>(cb.pos.size());
    const Eigen::Index n = p + q;

    // Extended precision: the (1 + V G0) solves are conditioned by <f|G0|f>.
    using Real = long double;
    using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

    std::vector<double> pos(ca.pos);
    pos.insert(pos.end(), cb.pos.begin(), cb.pos.end());
    Mat g0(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g0(i, j) = kernel_ld(kernel, std::abs(pos[i] - pos[j]), omega);

    Vec va = Vec::Zero(n), vb = Vec::Zero(n);
    for (Eigen::Index i = 0; i < p; ++i) va[i] = ca.coeff[i];
    for (Eigen::Index j = 0; j < q; ++j) vb[p + j] = cb.coeff[j];

    // T = (1 + V G0)^-1 V on the span of the point sources
    const Mat id = Mat::Identity(n, n);
    const Mat v_a = va * va.transpose();
    const Mat v_b = vb * vb.transpose();
    const Mat t_a = (id + v_a * g0).partialPivLu().solve(v_a);
    const Mat t_b = (id + v_b * g0).partialPivLu().solve(v_b);
    const Mat m = t_a * g0 * t_b * g0;

    // ln det(1 - M) = sum ln|1 - mu| over the spectrum of M; the phases of
    // complex pairs cancel.
    const Eigen::EigenSolver<Mat> es(m, false);
    Real log_det = 0.0L;
    for (const auto& mu : es.eigenvalues()) log_det += 0.5L * std::log1p(std::norm(mu) - 2.0L * mu.real());

    MatrixCheck out;
    out.closed_form = separable_log_determinant(fa, fb, kernel, w);
    out.matrix_form = static_cast<double>(log_det);
    return out;
}

std::vector<SeparableSample> separable_curve(const FormFactor& fa, const FormFactor& fb,
                                             const GreenKernel& kernel,
                                             const std::vector<double>& grid,
                                             const QuadratureSpec& spec) {
    if (grid.empty()) throw DomainError("separable curve needs a non-empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw DomainError("separable curve grid must be strictly increasing");
    for (double a : grid) check_overlap(fa.shifted(-a), fb.shifted(a), kernel);

    std::vector<SeparableSample> out(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto& s = out[i];
        s.a = grid[i];
        try {
            const auto e = separable_energy(fa, fb, kernel, s.a, spec);
            s.energy = e.value;
            s.energy_err = e.error;
        } catch (const NonConvergenceError& err) {
            s.energy = kInvTwoPi * err.estimate();
            s.energy_err = kInvTwoPi * err.error_bound();
            s.flags |= kEnergyFailed;
        }
        try {
            const auto f = separable_force(fa, fb, kernel, s.a, spec);
            s.force = f.value;
            s.force_err = f.error;
        } catch (const NonConvergenceError& err) {
            s.force = -kInvTwoPi * err.estimate();
            s.force_err = kInvTwoPi * err.error_bound();
            s.flags |= kForceFailed;
        }
    });
    bool all_failed = true;
    for (const auto& s : out)
        if (s.flags == kSampleOk) all_failed = false;
    if (all_failed) throw NonConvergenceError("every separable curve sample failed", 0.0, 0.0);
    return out;
}

EquilibriumReport find_separable_equilibria(const FormFactor& fa, const FormFactor& fb,
                                            const GreenKernel& kernel, const ScanRange& scan,
                                            const QuadratureSpec& spec) {
    return locate_force_zeros(
        [&](double a) { return separable_force(fa, fb, kernel, a, spec).value; },
        [&](double a) { return separable_energy(fa, fb, kernel, a, spec).value; }, scan);
}

} // namespace casimir
