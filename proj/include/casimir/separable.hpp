#pragma once

// Rank-1 separable potentials V = |f><f| with form factors built from weighted
// point sources. With T = |f><f| / (1 + <f|G0|f>) the two-body determinant
// collapses to
//   ln(1 - t_A t_B <f_A|G0|f_B>^2),  t = 1 / (1 + <f|G0|f>).

#include "casimir/equilibria.hpp"
#include "casimir/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace casimir {

class GreenKernel {
public:
    enum class Kind { line_massless, point3d };

    /// exp(-w|x - x'|) / (2w)
    static GreenKernel line_massless() { return GreenKernel(Kind::line_massless, 0.0); }
    /// exp(-w r) / (4 pi r) with r clamped below at the smearing length.
    static GreenKernel point3d(double smear);

    Kind kind() const noexcept { return kind_; }
    double smear() const noexcept { return smear_; }

    double operator()(double r, double omega) const;
    /// d/dr of the kernel; zero inside the smearing radius.
    double derivative(double r, double omega) const;

private:
    GreenKernel(Kind kind, double smear) : kind_(kind), smear_(smear) {}
    Kind kind_;
    double smear_;
};

struct PointSource {
    double weight = 0.0;
    double position = 0.0;
};

using Prefactor = std::function<double(double omega)>;

/// 1 + 1/(w^2 + 1)
double trap_prefactor(double omega);
inline double unit_prefactor(double) { return 1.0; }

class FormFactor {
public:
    explicit FormFactor(std::vector<PointSource> points, Prefactor prefactor = trap_prefactor);

    const std::vector<PointSource>& points() const noexcept { return points_; }
    double prefactor(double omega) const { return prefactor_(omega); }
    double total_weight() const noexcept;

    /// Copy with every position moved by `offset`.
    FormFactor shifted(double offset) const;

private:
    std::vector<PointSource> points_;
    Prefactor prefactor_;
};

/// g_A(w) g_B(w) sum_ij w_i w_j G0(|x_i - x_j|; w).
double gram(const FormFactor& fa, const FormFactor& fb, const GreenKernel& kernel, double omega);

/// 1 / (1 + <f|G0|f>), in (0, 1].
double t_norm(const FormFactor& f, const GreenKernel& kernel, double omega);

/// ln(1 - t_A t_B <f_A|G0|f_B>^2) for the clusters at their given positions.
double separable_log_determinant(const FormFactor& fa, const FormFactor& fb,
                                 const GreenKernel& kernel, double omega);

struct SeparableResult {
    double value = 0.0;
    double error = 0.0;
};

/// E(a) = 1/(2 pi) int ln(1 - t_A t_B gram_AB^2) dw with f_A moved by -a and
/// f_B by +a. Throws OverlapError if a point3d pair comes closer than the smear.
SeparableResult separable_energy(const FormFactor& fa, const FormFactor& fb,
                                 const GreenKernel& kernel, double a_shift,
                                 const QuadratureSpec& spec = {});

/// F(a) = -dE/da, from the analytic a-derivative of the integrand.
SeparableResult separable_force(const FormFactor& fa, const FormFactor& fb,
                                const GreenKernel& kernel, double a_shift,
                                const QuadratureSpec& spec = {});

/// Second-order energy -1/(4 pi) int_{-inf}^{inf} Tr(V_A G0 V_B G0) dw
/// = -1/(2 pi) int_0^inf gram_AB^2 dw, clusters at their given positions.
/// Throws InfraredDivergenceError for the line kernel when both clusters
/// have nonzero total weight (gram_AB ~ 1/(2w) as w -> 0).
SeparableResult second_order_energy(const FormFactor& fa, const FormFactor& fb,
                                    const GreenKernel& kernel, const QuadratureSpec& spec = {});

struct MatrixCheck {
    double closed_form = 0.0;
    double matrix_form = 0.0;
};

/// Closed-form log determinant next to a dense one: T_A, T_B are solved
/// as (1 + V G0)^-1 V on the span of all point sources and
/// ln det(1 - T_A G0 T_B G0) is summed over the eigenvalues of the product.
MatrixCheck explicit_matrix_check(const FormFactor& fa, const FormFactor& fb,
                                  const GreenKernel& kernel, double omega);

struct SeparableSample {
    double a = 0.0;
    double energy = 0.0;
    double force = 0.0;
    double energy_err = 0.0;
    double force_err = 0.0;
    std::uint8_t flags = 0;  ///< same bits as CurveSample::flags
};

std::vector<SeparableSample> separable_curve(const FormFactor& fa, const FormFactor& fb,
                                             const GreenKernel& kernel,
                                             const std::vector<double>& grid,
                                             const QuadratureSpec& spec = {});

/// Zeros of F(a); a repulsive interval runs from an unstable_maximum to the
/// following stable_minimum.
EquilibriumReport find_separable_equilibria(const FormFactor& fa, const FormFactor& fb,
                                            const GreenKernel& kernel, const ScanRange& scan,
                                            const QuadratureSpec& spec = {});

} // namespace casimir
