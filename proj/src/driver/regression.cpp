#include "casimir/driver.hpp"

#include "casimir/lattice.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>

namespace casimir::driver {

using nlohmann::json;

namespace {

enum class Outcome { pass, drift, failed };

struct Tally {
    int checks = 0;
    int drift = 0;
    int failed = 0;

    void add(Outcome o) {
        ++checks;
        drift += o == Outcome::drift;
        failed += o == Outcome::failed;
    }
};

double rel_change(double value, double pinned) {
    const double scale = std::abs(pinned);
    return scale > 0.0 ? std::abs(value - pinned) / scale : std::abs(value);
}

Outcome compare(std::ostream& out, const std::string& label, double value, double pinned,
                double tol) {
    const double rel = rel_change(value, pinned);
    const bool ok = rel <= tol;
    out << (ok ? "PASS  " : "DRIFT ") << label << ": value " << format_number(value) << " pinned "
        << format_number(pinned) << " rel " << format_number(rel) << " tol " << format_number(tol)
        << "\n";
    return ok ? Outcome::pass : Outcome::drift;
}

bool in_family(const RunConfig& cfg, Model command) { return cfg.model == command; }

void check_equilibria(const json& entry, Model command, std::ostream& out, Tally& tally) {
    const auto name = entry.at("preset").get<std::string>();
    const auto cfg = preset(name);
    if (!in_family(cfg, command)) return;
    const double tol = entry.at("rel_tol").get<double>();
    const auto& pinned = entry.at("zeros");
    EquilibriumReport report;
    try {
        report = compute_equilibria(cfg);
    } catch (const Error& e) {
        out << "FAIL  " << name << " equilibria: " << e.what() << "\n";
        tally.add(Outcome::failed);
        return;
    }
    if (report.zeros.size() != pinned.size()) {
        out << "DRIFT " << name << " equilibria: found " << report.zeros.size()
            << " force zeros, pinned " << pinned.size() << "\n";
        tally.add(Outcome::drift);
        return;
    }
    if (pinned.empty()) {
        out << "PASS  " << name << " equilibria: no force zero in the scan range\n";
        tally.add(Outcome::pass);
    }
    for (std::size_t i = 0; i < pinned.size(); ++i) {
        const auto& z = report.zeros[i];
        const std::string label = name + " zero[" + std::to_string(i) + "]";
        const auto kind = pinned[i].at("kind").get<std::string>();
        if (to_string(z.kind) != kind) {
            out << "DRIFT " << label << ": kind " << to_string(z.kind) << ", pinned " << kind << "\n";
            tally.add(Outcome::drift);
            continue;
        }
        tally.add(compare(out, label + " (" + kind + ")", z.x, pinned[i].at("x").get<double>(), tol));
    }
}

void check_samples(const json& entry, Model command, std::ostream& out, Tally& tally) {
    const auto name = entry.at("preset").get<std::string>();
    auto cfg = preset(name);
    if (!in_family(cfg, command)) return;
    const double tol = entry.at("rel_tol").get<double>();
    for (const auto& s : entry.at("samples")) {
        const double x = s.at("x").get<double>();
        const std::string label = name + " x=" + format_number(x);
        try {
            double e = 0.0, f = 0.0;
            if (cfg.model == Model::separable) {
                const auto sc = separable_scenario(cfg);
                e = separable_energy(sc.a, sc.b, sc.kernel, x, cfg.quadrature).value;
                f = separable_force(sc.a, sc.b, sc.kernel, x, cfg.quadrature).value;
            } else {
                const auto sc = channel_scenario(cfg);
                e = energy(sc.a, sc.b, sc.channels, x, cfg.quadrature).value;
                f = force(sc.a, sc.b, sc.channels, x, cfg.quadrature).value;
            }
            tally.add(compare(out, label + " energy", e, s.at("energy").get<double>(), tol));
            tally.add(compare(out, label + " force", f, s.at("force").get<double>(), tol));
        } catch (const Error& err) {
            out << "FAIL  " << label << ": " << err.what() << "\n";
            tally.add(Outcome::failed);
        }
    }
}

void check_roots(const json& entry, std::ostream& out, Tally& tally) {
    const double tol = entry.at("rel_tol").get<double>();
    for (const auto& r : entry.at("roots")) {
        const int m = r.at("m").get<int>();
        const int k = r.at("k").get<int>();
        const auto kind_name = r.at("kind").get<std::string>();
        const auto kind = kind_name == "J" ? BesselRootKind::J : BesselRootKind::J_prime;
        const std::string label = "zero of " + kind_name + "_" + std::to_string(m) + " #" + std::to_string(k);
        tally.add(compare(out, label, bessel_zero(m, k, kind), r.at("zeta").get<double>(), tol));
    }
}

void check_oracle(const json& entry, std::ostream& out, Tally& tally) {
    const auto name = entry.at("preset").get<std::string>();
    const auto cfg = preset(name);
    const double tol = entry.at("rel_tol").get<double>();
    try {
        const auto sc = channel_scenario(cfg);
        const auto& lat = *cfg.lattice;
        const LatticeSpec spec{static_cast<int>(std::lround(lat.box / lat.spacing)) - 1, lat.spacing};
        for (const auto& s : entry.at("samples")) {
            const double x = s.at("x").get<double>();
            const double e = interaction_energy(spec, sc.channels, sc.a, sc.b, x, lat.x_ref);
            tally.add(compare(out, name + " lattice x=" + format_number(x), e,
                              s.at("lattice").get<double>(), tol));
        }
    } catch (const Error& e) {
        out << "FAIL  " << name << " lattice: " << e.what() << "\n";
        tally.add(Outcome::failed);
    }
}

} // namespace

int run_regression(Model command, bool oracle, std::ostream& out) {
    json doc;
    try {
        doc = json::parse(regression_json());
    } catch (const json::parse_error& e) {
        out << "error: regression document: " << e.what() << "\n";
        return kExitInputError;
    }
    Tally tally;
    try {
        if (oracle) {
            for (const auto& e : doc.value("oracle", json::array())) check_oracle(e, out, tally);
        } else {
            for (const auto& e : doc.value("equilibria", json::array()))
                check_equilibria(e, command, out, tally);
            for (const auto& e : doc.value("curves", json::array())) check_samples(e, command, out, tally);
            if (command == Model::waveguide)
                for (const auto& e : doc.value("bessel", json::array())) check_roots(e, out, tally);
        }
    } catch (const json::exception& e) {
        out << "error: regression document: " << e.what() << "\n";
        return kExitInputError;
    }
    out << tally.checks << " checks, " << tally.drift << " drifted, " << tally.failed << " failed\n";
    if (tally.failed > 0) return kExitNonConvergence;
    if (tally.drift > 0) return kExitCheckFailed;
    return kExitOk;
}

} // namespace casimir::driver
