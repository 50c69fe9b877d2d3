#include "casimir/driver.hpp"

#include "casimir/lattice.hpp"
#include "casimir/parallel.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

namespace casimir::driver {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Lattice spec whose box (N+1)h is the requested length rounded to the grid.
LatticeSpec lattice_for(double box, double spacing) {
    return {static_cast<int>(std::lround(box / spacing)) - 1, spacing};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ordered_json config_summary(const RunConfig& cfg) {
    ordered_json j;
    j["name"] = cfg.name;
    j["model"] = to_string(cfg.model);
    return j;
}

std::ostream& open_output(const RunOptions& opts, std::ofstream& file, std::ostream& fallback) {
    if (!opts.out) return fallback;
    file.open(*opts.out, std::ios::binary);
    if (!file) throw ConfigError("--out: cannot open '" + *opts.out + "' for writing");
    return file;
}

std::string flag_names(std::uint8_t flags) {
    std::string s;
    if (flags & kEnergyFailed) s += "energy";
    if (flags & kForceFailed) s += s.empty() ? "force" : " and force";
    return s;
}

} // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    return std::string(buf, res.ptr);
}

std::vector<CurveRow> compute_curve(const RunConfig& cfg) {
    const auto grid = cfg.grid.points();
    std::vector<CurveRow> rows;
    rows.reserve(grid.size());
    if (cfg.model == Model::separable) {
        const auto sc = separable_scenario(cfg);
        for (const auto& s : separable_curve(sc.a, sc.b, sc.kernel, grid, cfg.quadrature))
            rows.push_back({s.a, s.energy, s.force, s.energy_err, s.force_err, s.flags});
    } else {
        const auto sc = channel_scenario(cfg);
        const auto curve = energy_curve(sc.a, sc.b, sc.channels, grid, cfg.quadrature);
        for (const auto& s : curve.samples)
            rows.push_back({s.x, s.energy, s.force, s.energy_err, s.force_err, s.flags});
    }
    return rows;
}

EquilibriumReport compute_equilibria(const RunConfig& cfg) {
    const ScanRange scan =
        cfg.equilibria ? *cfg.equilibria : ScanRange{cfg.grid.lo, cfg.grid.hi, 64};
    if (cfg.model == Model::separable) {
        const auto sc = separable_scenario(cfg);
        return find_separable_equilibria(sc.a, sc.b, sc.kernel, scan, cfg.quadrature);
    }
    const auto sc = channel_scenario(cfg);
    return find_equilibria(sc.a, sc.b, sc.channels, scan, cfg.quadrature);
}

std::vector<OracleRow> oracle_compare(const RunConfig& cfg) {
    if (cfg.model != Model::channels)
        throw ConfigError("model: oracle comparison needs the channels model");
    if (!cfg.lattice) throw ConfigError("lattice: missing required field for oracle comparison");
    const auto sc = channel_scenario(cfg);
    if (sc.a.is_perfect() || sc.b.is_perfect())
        throw ConfigError("mirror_a.strength/mirror_b.strength: lattice comparison needs finite strengths");
    if (!sc.a.has_constant_coupling() || !sc.b.has_constant_coupling())
        throw ConfigError("mirror_a/mirror_b: lattice comparison needs constant couplings");

    const auto& lat = *cfg.lattice;
    const LatticeSpec coarse = lattice_for(lat.box, lat.spacing);
    const LatticeSpec fine = lattice_for(lat.box, 0.5 * lat.spacing);
    const double e_ref = energy(sc.a, sc.b, sc.channels, lat.x_ref, cfg.quadrature).value;

    std::vector<OracleRow> rows(lat.separations.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        OracleRow& r = rows[i];
        r.x = lat.separations[i];
        r.determinant = energy(sc.a, sc.b, sc.channels, r.x, cfg.quadrature).value - e_ref;
        r.lattice = interaction_energy(coarse, sc.channels, sc.a, sc.b, r.x, lat.x_ref);
        r.rel_diff = std::abs(r.lattice - r.determinant) / std::abs(r.determinant);
        r.flagged = !(r.rel_diff <= kOracleTolerance);
        r.lattice_half = std::numeric_limits<double>::quiet_NaN();
        r.halving_change = std::numeric_limits<double>::quiet_NaN();
        if (lat.check_halving) {
            r.lattice_half = interaction_energy(fine, sc.channels, sc.a, sc.b, r.x, lat.x_ref);
            r.halving_change = std::abs(r.lattice_half - r.lattice) / std::abs(r.lattice);
            if (!(r.halving_change <= kHalvingTolerance)) r.flagged = true;
        }
    });
    return rows;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
    os << "x,energy,force,energy_err,force_err,flags\n";
    for (const auto& r : rows) {
        os << format_number(r.x) << ',' << format_number(r.energy) << ',' << format_number(r.force)
           << ',' << format_number(r.energy_err) << ',' << format_number(r.force_err) << ','
           << static_cast<int>(r.flags) << '\n';
    }
}

std::string equilibria_report_json(const RunConfig& cfg, const EquilibriumReport& report) {
    ordered_json j = config_summary(cfg);
    j["scan"] = {{"lo", report.scan_lo}, {"hi", report.scan_hi}};
    ordered_json zeros = ordered_json::array();
    for (const auto& z : report.zeros) {
        ordered_json e;
        e["x"] = z.x;
        e["kind"] = to_string(z.kind);
        e["converged"] = z.converged;
        zeros.push_back(e);
    }
    j["zeros"] = zeros;
    int minima = 0;
    for (const auto& z : report.zeros) minima += z.kind == EquilibriumKind::stable_minimum;
    j["stable_minima"] = minima;
    return j.dump(2) + "\n";
}

std::string oracle_report_json(const RunConfig& cfg, const std::vector<OracleRow>& rows) {
    ordered_json j = config_summary(cfg);
    j["tolerance"] = kOracleTolerance;
    j["halving_tolerance"] = kHalvingTolerance;
    if (cfg.lattice) {
        j["lattice"] = {{"spacing", cfg.lattice->spacing},
                        {"box", cfg.lattice->box},
                        {"x_ref", cfg.lattice->x_ref}};
    }
    ordered_json arr = ordered_json::array();
    bool any = false;
    for (const auto& r : rows) {
        ordered_json e;
        e["x"] = r.x;
        e["determinant"] = r.determinant;
        e["lattice"] = r.lattice;
        e["lattice_half_spacing"] = number_or_null(r.lattice_half);
        e["rel_diff"] = r.rel_diff;
        e["halving_change"] = number_or_null(r.halving_change);
        e["flagged"] = r.flagged;
        any = any || r.flagged;
        arr.push_back(e);
    }
    j["rows"] = arr;
    j["all_within_tolerance"] = !any;
    return j.dump(2) + "\n";
}

std::string modes_report_json(const WaveguideSpec& spec) {
    ordered_json j;
    j["radius"] = spec.radius;
    j["max_mass"] = spec.max_mass;
    j["polarization"] = to_string(spec.polarization);
    j["angular_orders"] = spec.angular_orders;
    ordered_json modes = ordered_json::array();
    for (const auto& m : waveguide_modes(spec)) {
        ordered_json e;
        e["order"] = m.order;
        e["root_index"] = m.root_index;
        e["polarization"] = to_string(m.polarization);
        e["zeta"] = m.zeta;
        e["mass"] = m.mass;
        modes.push_back(e);
    }
    j["modes"] = modes;
    return j.dump(2) + "\n";
}

int run(const RunConfig& cfg, Model command, bool oracle, const RunOptions& opts, std::ostream& out,
        std::ostream& err) {
    try {
        if (cfg.model != command) {
            err << "error: model: config '" << cfg.name << "' has model " << to_string(cfg.model)
                << "; use the " << to_string(cfg.model)
                << (oracle ? " model with oracle-compare" : " subcommand") << "\n";
            return kExitInputError;
        }
        std::ofstream file;

        if (oracle) {
            const auto rows = oracle_compare(cfg);
            err << "x, E_determinant, E_lattice, rel_diff, halving_change\n";
            bool any = false;
            for (const auto& r : rows) {
                err << format_number(r.x) << ", " << format_number(r.determinant) << ", "
                    << format_number(r.lattice) << ", " << format_number(r.rel_diff) << ", "
                    << format_number(r.halving_change) << (r.flagged ? "  FLAGGED" : "") << "\n";
                any = any || r.flagged;
            }
            open_output(opts, file, out) << oracle_report_json(cfg, rows);
            return any ? kExitCheckFailed : kExitOk;
        }

        if (command == Model::waveguide && !opts.out && !opts.equilibria) {
            out << modes_report_json(*cfg.waveguide);
            return kExitOk;
        }

        int status = kExitOk;
        if (opts.out || !opts.equilibria) {
            const auto rows = compute_curve(cfg);
            for (const auto& r : rows) {
                if (r.flags != kSampleOk) {
                    err << "warning: x = " << format_number(r.x) << ": " << flag_names(r.flags)
                        << " quadrature did not converge (row flagged)\n";
                    status = kExitNonConvergence;
                }
            }
            write_curve_csv(open_output(opts, file, out), rows);
        }
        if (opts.equilibria) {
            const auto report = compute_equilibria(cfg);
            for (const auto& z : report.zeros)
                if (!z.converged) {
                    err << "warning: force zero near x = " << format_number(z.x)
                        << " was not fully bisected\n";
                    status = kExitNonConvergence;
                }
            out << equilibria_report_json(cfg, report);
        }
        return status;
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << " (last estimate " << format_number(e.estimate()) << ")\n";
        return kExitNonConvergence;
    } catch (const IndefiniteMatrixError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace casimir::driver
