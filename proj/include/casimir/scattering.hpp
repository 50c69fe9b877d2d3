#pragma once

// Pointwise-in-frequency scattering algebra of rank-1 point mirrors
//   V = lambda * alpha alpha^T * delta(x - x0)
// on a multi-channel 1D field.

#include "casimir/dispersion.hpp"

#include <Eigen/Dense>

#include <functional>
#include <limits>
#include <vector>

namespace casimir {

inline constexpr double kInfiniteStrength = std::numeric_limits<double>::infinity();

using CouplingFunction = std::function<std::vector<double>(double omega)>;

class Mirror {
public:
    /// Constant coupling vector. strength = +inf is the Dirichlet-type limit.
    explicit Mirror(std::vector<double> coupling, double strength = kInfiniteStrength,
                    double position = 0.0);

    /// Frequency-dependent coupling alpha(w), with n components at every w.
    static Mirror from_function(CouplingFunction coupling, std::size_t channels,
                                double strength = kInfiniteStrength, double position = 0.0);

    /// Coupling whose group-velocity-scaled form is the constant `scaled`,
    /// i.e. alpha_i(w) = scaled_i / sqrt(dk_i/dw).
    static Mirror with_constant_scaled_coupling(const ChannelSet& cs, std::vector<double> scaled,
                                                double strength = kInfiniteStrength,
                                                double position = 0.0);

    std::vector<double> coupling(double omega) const;
    bool has_constant_coupling() const noexcept { return !function_; }
    /// Throws DomainError for frequency-dependent couplings.
    const std::vector<double>& constant_coupling() const;

    std::size_t channels() const noexcept { return channels_; }
    double strength() const noexcept { return strength_; }
    bool is_perfect() const noexcept { return strength_ == kInfiniteStrength; }
    double position() const noexcept { return position_; }
    Mirror at(double position) const;

private:
    Mirror() = default;
    void check_strength() const;

    std::vector<double> constant_;
    CouplingFunction function_;
    std::size_t channels_ = 0;
    double strength_ = kInfiniteStrength;
    double position_ = 0.0;
};

/// alpha~_i = sqrt(dk_i/dw) alpha_i (= sqrt(w/k_i) alpha_i for massive channels).
struct ScaledCoupling {
    std::vector<double> components;
    double norm2 = 0.0;
};

struct DeterminantValue {
    double value = 1.0;      ///< in (0, 1] for x > 0
    double log_value = 0.0;  ///< ln(value), computed without cancellation
};

/// Product spectrum of the two x-independent reflection matrices.
struct ProductSpectrum {
    std::vector<double> values;  ///< descending, within [0, 1]
    int clamped = 0;             ///< how many values were pulled onto the boundary
};

ScaledCoupling scale_coupling(const Mirror& m, const ChannelSet& cs, FrequencyPoint omega);

/// r(iw) = -(a~ a~^T) / (|a~|^2 + 2w/lambda).
Eigen::MatrixXd reflection_matrix(const Mirror& m, const ChannelSet& cs, FrequencyPoint omega);

/// det(1 - r_A P r_B P), P = exp(-K x), in the closed rank-1 form
/// 1 - s^2/(D_A D_B) with s = sum_i a~_i exp(-k_i x) b~_i.
DeterminantValue pair_determinant(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                                  FrequencyPoint omega, double x);

/// Same determinant from dense n x n matrices; independent check of the rank-1 algebra.
double pair_determinant_dense(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                              FrequencyPoint omega, double x);

/// d/dx ln pair_determinant, analytic.
double pair_determinant_dx(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                           FrequencyPoint omega, double x);

/// Eigenvalues of sqrt(-r_A)(-r_B)sqrt(-r_A). Values within 1e-12 of 0 or 1
/// are clamped onto the boundary and counted.
ProductSpectrum product_eigenvalues(const Mirror& a, const Mirror& b, const ChannelSet& cs,
                                    FrequencyPoint omega);

} // namespace casimir
