#include "casimir/dispersion.hpp"

#include "casimir/errors.hpp"

#include <cmath>
#include <string>

namespace casimir {

FrequencyPoint::FrequencyPoint(double omega) : omega_(omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("frequency must be positive and finite, got " + std::to_string(omega));
}

Dispersion::Dispersion(Massive m) : kind_(m) {
    if (!(m.mass >= 0.0) || !std::isfinite(m.mass))
        throw DomainError("channel mass must be finite and non-negative");
}

Dispersion::Dispersion(CustomDispersion c) : kind_(std::move(c)) {
    const auto& cd = std::get<CustomDispersion>(kind_);
    if (!cd.k || !cd.dk_domega)
        throw DomainError("custom dispersion needs both k(w) and dk/dw(w)");
}

double Dispersion::k(double omega) const {
    if (const auto* m = std::get_if<Massive>(&kind_))
        return std::hypot(omega, m->mass);  // exact for m = 0, no overflow at large w
    return std::get<CustomDispersion>(kind_).k(omega);
}

double Dispersion::dk_domega(double omega) const {
    if (const auto* m = std::get_if<Massive>(&kind_)) {
        if (m->mass == 0.0) return 1.0;
        return omega / std::hypot(omega, m->mass);
    }
    return std::get<CustomDispersion>(kind_).dk_domega(omega);
}

double Dispersion::mass() const {
    if (const auto* m = std::get_if<Massive>(&kind_)) return m->mass;
    throw DomainError("custom dispersion has no mass");
}

ChannelSet::ChannelSet(std::vector<Dispersion> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) throw DomainError("a channel set needs at least one channel");
}

ChannelSet ChannelSet::from_masses(std::span<const double> masses) {
    std::vector<Dispersion> ch;
    ch.reserve(masses.size());
    for (double m : masses) ch.emplace_back(Massive{m});
    return ChannelSet(std::move(ch));
}

ChannelSet ChannelSet::from_masses(std::initializer_list<double> masses) {
    return from_masses(std::span<const double>(masses.begin(), masses.size()));
}

bool ChannelSet::all_massive() const noexcept {
    for (const auto& d : channels_)
        if (!d.is_massive()) return false;
    return true;
}

std::vector<double> ChannelSet::masses() const {
    std::vector<double> out;
    out.reserve(channels_.size());
    for (const auto& d : channels_) out.push_back(d.mass());
    return out;
}

std::vector<double> wavenumbers(const ChannelSet& cs, FrequencyPoint omega) {
    std::vector<double> k(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) k[i] = cs[i].k(omega);
    return k;
}

std::vector<double> propagation_kernel(const ChannelSet& cs, FrequencyPoint omega, double x) {
    if (!(x >= 0.0)) throw DomainError("propagation distance must be non-negative");
    std::vector<double> p(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) p[i] = std::exp(-cs[i].k(omega) * x);
    return p;
}

} // namespace casimir
