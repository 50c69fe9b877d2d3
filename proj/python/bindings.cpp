#include "casimir/driver.hpp"
#include "casimir/lattice.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

namespace py = pybind11;
using namespace casimir;
namespace drv = casimir::driver;

namespace {

ChannelSet channels_from(const std::vector<double>& masses) { return ChannelSet::from_masses(masses); }

QuadratureSpec quadrature(double rel_tol, double abs_tol, int max_level) {
    QuadratureSpec q;
    q.rel_tol = rel_tol;
    q.abs_tol = abs_tol;
    q.max_refinement_level = max_level;
    return q;
}

FormFactor form_factor(const std::vector<std::pair<double, double>>& points, const std::string& prefactor) {
    std::vector<PointSource> pts;
    for (const auto& [w, x] : points) pts.push_back({w, x});
    if (prefactor == "trap") return FormFactor(pts);
    if (prefactor == "unit") return FormFactor(pts, unit_prefactor);
    throw DomainError("prefactor must be 'trap' or 'unit'");
}

GreenKernel kernel_from(const std::string& name, double smear) {
    if (name == "line" || name == "line_massless") return GreenKernel::line_massless();
    if (name == "point3d") return GreenKernel::point3d(smear);
    throw DomainError("kernel must be 'line' or 'point3d'");
}

py::list zeros_to_list(const EquilibriumReport& report) {
    py::list out;
    for (const auto& z : report.zeros)
        out.append(py::dict(py::arg("x") = z.x, py::arg("kind") = to_string(z.kind),
                            py::arg("converged") = z.converged));
    return out;
}

drv::Model model_from(const std::string& name) {
    if (name == "channels") return drv::Model::channels;
    if (name == "separable") return drv::Model::separable;
    if (name == "waveguide") return drv::Model::waveguide;
    throw DomainError("model must be 'channels', 'separable' or 'waveguide'");
}

} // namespace

PYBIND11_MODULE(_casimir, m) {
    m.doc() = "Casimir interaction energies between rank-1 mirrors and separable bodies";

    auto error = py::register_exception<Error>(m, "CasimirError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
    py::register_exception<DegenerateCouplingError>(m, "DegenerateCouplingError", error.ptr());
    py::register_exception<OverlapError>(m, "OverlapError", error.ptr());
    py::register_exception<EmptyChannelSetError>(m, "EmptyChannelSetError", error.ptr());
    py::register_exception<IndefiniteMatrixError>(m, "IndefiniteMatrixError", error.ptr());
    py::register_exception<InfraredDivergenceError>(m, "InfraredDivergenceError", error.ptr());
    py::register_exception<NonConvergenceError>(m, "NonConvergenceError", error.ptr());
    py::register_exception<drv::ConfigError>(m, "ConfigError", error.ptr());

    const double inf = kInfiniteStrength;

    m.def(
        "energy",
        [](const std::vector<double>& masses, const std::vector<double>& alpha, const std::vector<double>& beta,
           double x, double strength_a, double strength_b, double rel_tol, double abs_tol, int max_level) {
            const auto r = energy(Mirror(alpha, strength_a), Mirror(beta, strength_b), channels_from(masses), x,
                                  quadrature(rel_tol, abs_tol, max_level));
            return std::make_pair(r.value, r.error);
        },
        py::arg("masses"), py::arg("alpha"), py::arg("beta"), py::arg("x"), py::arg("strength_a") = inf,
        py::arg("strength_b") = inf, py::arg("rel_tol") = 1e-9, py::arg("abs_tol") = 1e-12,
        py::arg("max_level") = 12, "Interaction energy E(x) and its error estimate.");

    m.def(
        "force",
        [](const std::vector<double>& masses, const std::vector<double>& alpha, const std::vector<double>& beta,
           double x, double strength_a, double strength_b, double rel_tol, double abs_tol, int max_level) {
            const auto r = force(Mirror(alpha, strength_a), Mirror(beta, strength_b), channels_from(masses), x,
                                 quadrature(rel_tol, abs_tol, max_level));
            return std::make_pair(r.value, r.error);
        },
        py::arg("masses"), py::arg("alpha"), py::arg("beta"), py::arg("x"), py::arg("strength_a") = inf,
        py::arg("strength_b") = inf, py::arg("rel_tol") = 1e-9, py::arg("abs_tol") = 1e-12,
        py::arg("max_level") = 12, "Force F(x) = -dE/dx (negative is attraction) and its error estimate.");

    m.def(
        "find_equilibria",
        [](const std::vector<double>& masses, const std::vector<double>& alpha, const std::vector<double>& beta,
           double lo, double hi, std::size_t probes, double strength_a, double strength_b) {
            return zeros_to_list(find_equilibria(Mirror(alpha, strength_a), Mirror(beta, strength_b),
                                                 channels_from(masses), {lo, hi, probes}));
        },
        py::arg("masses"), py::arg("alpha"), py::arg("beta"), py::arg("lo"), py::arg("hi"),
        py::arg("probes") = 64, py::arg("strength_a") = inf, py::arg("strength_b") = inf,
        "Force zeros on [lo, hi], each classified as stable_minimum or unstable_maximum.");

    m.def(
        "product_eigenvalues",
        [](const std::vector<double>& masses, const std::vector<double>& alpha, const std::vector<double>& beta,
           double omega, double strength_a, double strength_b) {
            return product_eigenvalues(Mirror(alpha, strength_a), Mirror(beta, strength_b), channels_from(masses),
                                       FrequencyPoint(omega))
                .values;
        },
        py::arg("masses"), py::arg("alpha"), py::arg("beta"), py::arg("omega"), py::arg("strength_a") = inf,
        py::arg("strength_b") = inf);

    m.def("dilog", &dilog, py::arg("z"));
    m.def(
        "short_distance_coefficient",
        [](const std::vector<double>& alpha, const std::vector<double>& beta) {
            return short_distance_coefficient(Mirror(alpha), Mirror(beta));
        },
        py::arg("alpha"), py::arg("beta"), "Predicted limit of x E(x) as x -> 0 for perfect mirrors.");

    m.def(
        "separable_energy",
        [](const std::vector<std::pair<double, double>>& body_a, const std::vector<std::pair<double, double>>& body_b,
           double a, const std::string& kernel, double smear, const std::string& prefactor) {
            const auto r = separable_energy(form_factor(body_a, prefactor), form_factor(body_b, prefactor),
                                            kernel_from(kernel, smear), a);
            return std::make_pair(r.value, r.error);
        },
        py::arg("body_a"), py::arg("body_b"), py::arg("a"), py::arg("kernel") = "point3d", py::arg("smear") = 0.01,
        py::arg("prefactor") = "trap",
        "Energy of two separable bodies given as [(weight, offset), ...]; A moves by -a, B by +a.");

    m.def(
        "separable_force",
        [](const std::vector<std::pair<double, double>>& body_a, const std::vector<std::pair<double, double>>& body_b,
           double a, const std::string& kernel, double smear, const std::string& prefactor) {
            const auto r = separable_force(form_factor(body_a, prefactor), form_factor(body_b, prefactor),
                                           kernel_from(kernel, smear), a);
            return std::make_pair(r.value, r.error);
        },
        py::arg("body_a"), py::arg("body_b"), py::arg("a"), py::arg("kernel") = "point3d", py::arg("smear") = 0.01,
        py::arg("prefactor") = "trap");

    m.def(
        "bessel_zero",
        [](int order, int k, bool derivative) {
            return bessel_zero(order, k, derivative ? BesselRootKind::J_prime : BesselRootKind::J);
        },
        py::arg("m"), py::arg("k"), py::arg("derivative") = false, "k-th positive root of J_m (or of J_m').");

    m.def(
        "channelize",
        [](double radius, double max_mass, const std::string& polarization, int angular_orders) {
            Polarization pol = Polarization::TM;
            if (polarization == "TE") pol = Polarization::TE;
            else if (polarization == "both") pol = Polarization::both;
            else if (polarization != "TM") throw DomainError("polarization must be 'TM', 'TE' or 'both'");
            return channelize({radius, max_mass, pol, angular_orders}).masses();
        },
        py::arg("radius"), py::arg("max_mass"), py::arg("polarization") = "TM", py::arg("angular_orders") = 0,
        "Channel masses of a circular waveguide below the mass cutoff.");

    m.def(
        "lattice_interaction_energy",
        [](const std::vector<double>& masses, const std::vector<double>& alpha, double strength_a,
           const std::vector<double>& beta, double strength_b, double x, double x_ref, double spacing, double box) {
            const LatticeSpec spec{static_cast<int>(std::lround(box / spacing)) - 1, spacing};
            return interaction_energy(spec, channels_from(masses), Mirror(alpha, strength_a),
                                      Mirror(beta, strength_b), x, x_ref);
        },
        py::arg("masses"), py::arg("alpha"), py::arg("strength_a"), py::arg("beta"), py::arg("strength_b"),
        py::arg("x"), py::arg("x_ref"), py::arg("spacing"), py::arg("box"),
        "Lattice zero-point estimate of E(x) - E(x_ref).");

    m.def("preset_names", &drv::preset_names);
    m.def("preset_json", [](const std::string& name) { return drv::preset_json(name); }, py::arg("name"));

    m.def(
        "run",
        [](const std::string& config_json, const std::string& command, bool equilibria, bool oracle) {
            const auto cfg = drv::parse_config(config_json, "config");
            cfg.validate();
            drv::RunOptions opts;
            opts.equilibria = equilibria;
            std::ostringstream out, err;
            const int code = drv::run(cfg, model_from(command), oracle, opts, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("config_json"), py::arg("command"), py::arg("equilibria") = false, py::arg("oracle") = false,
        "Runs one CLI subcommand on a JSON config; returns (exit_code, stdout, stderr).");
}
