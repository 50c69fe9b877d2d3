#pragma once

// Scenario driver shared by the CLI, the Python module and the tests: JSON
// run configurations, built-in presets, curve/equilibrium/oracle runs and
// their CSV and JSON renderings.

#include "casimir/channel_energy.hpp"
#include "casimir/errors.hpp"
#include "casimir/separable.hpp"
#include "casimir/waveguide.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace casimir::driver {

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitNonConvergence = 2,
    kExitCheckFailed = 3,  ///< regression drift or an oracle row over tolerance
};

/// Malformed or inconsistent configuration. The message names the field.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Model { channels, separable, waveguide };

std::string to_string(Model model);

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    Spacing spacing = Spacing::log;

    std::vector<double> points() const;
};

/// Parses "LO:HI:N[:log|linear]"; spacing defaults to log.
GridSpec parse_grid(std::string_view text);

struct MirrorSpec {
    std::vector<double> coupling;
    bool scaled = false;  ///< coupling holds the constant group-velocity-scaled form
    double strength = kInfiniteStrength;
};

struct BodyPoint {
    double weight = 0.0;
    double offset = 0.0;
};

struct SeparableSpec {
    GreenKernel::Kind kernel = GreenKernel::Kind::line_massless;
    double smear = 0.0;
    std::string prefactor = "trap";  ///< "trap" or "unit"
    std::vector<BodyPoint> body_a;
    std::vector<BodyPoint> body_b;
};

struct LatticeRunSpec {
    double spacing = 0.0;
    double box = 0.0;
    double x_ref = 0.0;
    std::vector<double> separations;
    bool check_halving = true;
};

struct RunConfig {
    std::string name;
    Model model = Model::channels;
    std::vector<double> masses;                 ///< channels model
    std::optional<WaveguideSpec> waveguide;     ///< waveguide model
    MirrorSpec mirror_a;
    MirrorSpec mirror_b;
    SeparableSpec separable;                    ///< separable model
    GridSpec grid;
    std::optional<ScanRange> equilibria;
    std::optional<LatticeRunSpec> lattice;
    QuadratureSpec quadrature;

    /// Cross-field checks (grid order, coupling lengths, ...). Throws ConfigError.
    void validate() const;
};

RunConfig parse_config(std::string_view json_text, std::string_view origin = "config");
RunConfig load_config(const std::string& path);

std::vector<std::string> preset_names();
/// Raw JSON of a built-in preset. Throws ConfigError for unknown names.
std::string preset_json(std::string_view name);
RunConfig preset(std::string_view name);

/// Pinned regression document.
std::string regression_json();

// Scenario construction.
struct ChannelScenario {
    ChannelSet channels;
    Mirror a;
    Mirror b;
};
ChannelScenario channel_scenario(const RunConfig& cfg);

struct SeparableScenario {
    FormFactor a;
    FormFactor b;
    GreenKernel kernel;
};
SeparableScenario separable_scenario(const RunConfig& cfg);

/// One CSV row. For the separable model x is the shift parameter a.
struct CurveRow {
    double x = 0.0;
    double energy = 0.0;
    double force = 0.0;
    double energy_err = 0.0;
    double force_err = 0.0;
    std::uint8_t flags = kSampleOk;
};

std::vector<CurveRow> compute_curve(const RunConfig& cfg);
EquilibriumReport compute_equilibria(const RunConfig& cfg);

struct OracleRow {
    double x = 0.0;
    double determinant = 0.0;  ///< E(x) - E(x_ref) from the frequency integral
    double lattice = 0.0;
    double lattice_half = 0.0;  ///< same with h/2, NaN if not requested
    double rel_diff = 0.0;
    double halving_change = 0.0;
    bool flagged = false;
};

inline constexpr double kOracleTolerance = 0.02;
inline constexpr double kHalvingTolerance = 0.005;

std::vector<OracleRow> oracle_compare(const RunConfig& cfg);

/// Shortest round-trip scientific representation.
std::string format_number(double v);

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows);
std::string equilibria_report_json(const RunConfig& cfg, const EquilibriumReport& report);
std::string oracle_report_json(const RunConfig& cfg, const std::vector<OracleRow>& rows);
std::string modes_report_json(const WaveguideSpec& spec);

struct RunOptions {
    std::optional<std::string> out;
    bool equilibria = false;
};

/// Executes one subcommand on a validated config. Machine output goes to `out`
/// (or the file named in opts.out), diagnostics to `err`. Returns an ExitCode.
int run(const RunConfig& cfg, Model command, bool oracle, const RunOptions& opts,
        std::ostream& out, std::ostream& err);

/// Re-evaluates every pinned value whose family matches `command` (oracle
/// selects the lattice entries). Prints one line per check.
int run_regression(Model command, bool oracle, std::ostream& out);

} // namespace casimir::driver
