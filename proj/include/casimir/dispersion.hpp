#pragma once

// Channels of a multi-component 1D field and their imaginary-frequency
// propagation. Units: hbar = c = 1, lengths in units of the first nonzero mass.

#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace casimir {

/// Imaginary-axis frequency, strictly positive.
class FrequencyPoint {
public:
    explicit FrequencyPoint(double omega);
    double value() const noexcept { return omega_; }
    operator double() const noexcept { return omega_; }

private:
    double omega_;
};

/// Relativistic channel k(w) = sqrt(w^2 + m^2).
struct Massive {
    double mass = 0.0;
};

/// User-supplied dispersion. Both k and dk/dw must be given; the group
/// velocity enters the scaled couplings and is never differentiated numerically.
struct CustomDispersion {
    std::function<double(double)> k;
    std::function<double(double)> dk_domega;
};

class Dispersion {
public:
    Dispersion(Massive m);
    Dispersion(CustomDispersion c);

    static Dispersion massive(double mass) { return Dispersion(Massive{mass}); }

    double k(double omega) const;
    double dk_domega(double omega) const;

    bool is_massive() const noexcept { return std::holds_alternative<Massive>(kind_); }
    /// Mass of a massive channel; throws DomainError for a custom one.
    double mass() const;

private:
    std::variant<Massive, CustomDispersion> kind_;
};

class ChannelSet {
public:
    explicit ChannelSet(std::vector<Dispersion> channels);
    static ChannelSet from_masses(std::span<const double> masses);
    static ChannelSet from_masses(std::initializer_list<double> masses);

    std::size_t size() const noexcept { return channels_.size(); }
    const Dispersion& operator[](std::size_t i) const { return channels_[i]; }
    const std::vector<Dispersion>& channels() const noexcept { return channels_; }

    bool all_massive() const noexcept;
    /// Masses of an all-massive set; throws DomainError otherwise.
    std::vector<double> masses() const;

private:
    std::vector<Dispersion> channels_;
};

/// k_i(w) for every channel.
std::vector<double> wavenumbers(const ChannelSet& cs, FrequencyPoint omega);

/// Diagonal of exp(-K x): component i is exp(-k_i(w) x), x >= 0.
std::vector<double> propagation_kernel(const ChannelSet& cs, FrequencyPoint omega, double x);

} // namespace casimir
