#include "casimir/driver.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace casimir::driver {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
}

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) bad(join(path, key), "unknown field");
    }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) bad(join(path, key), "missing required field");
    return obj.at(key);
}

const json& require_object(const json& obj, const std::string& path, const std::string& key) {
    const auto& v = require(obj, path, key);
    if (!v.is_object()) bad(join(path, key), "expected an object");
    return v;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) bad(field, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(field, "must be finite");
    return d;
}

double number_at(const json& obj, const std::string& path, const std::string& key) {
    return number(require(obj, path, key), join(path, key));
}

std::vector<double> numbers(const json& v, const std::string& field) {
    if (!v.is_array()) bad(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

int integer(const json& v, const std::string& field) {
    if (!v.is_number_integer()) bad(field, "expected an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) bad(field, "expected a string");
    return v.get<std::string>();
}

Spacing parse_spacing(const std::string& s, const std::string& field) {
    if (s == "log") return Spacing::log;
    if (s == "linear") return Spacing::linear;
    bad(field, "expected 'log' or 'linear', got '" + s + "'");
}

double parse_strength(const json& v, const std::string& field) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInfiniteStrength;
        bad(field, "expected a positive number or \"inf\", got '" + s + "'");
    }
    const double d = number(v, field);
    if (!(d > 0.0)) bad(field, "must be positive");
    return d;
}

MirrorSpec parse_mirror(const json& obj, const std::string& path) {
    reject_unknown(obj, path, {"coupling", "scaled_coupling", "strength"});
    MirrorSpec m;
    const bool plain = obj.contains("coupling");
    const bool scaled = obj.contains("scaled_coupling");
    if (plain == scaled) bad(path, "give exactly one of 'coupling' or 'scaled_coupling'");
    const std::string key = plain ? "coupling" : "scaled_coupling";
    m.coupling = numbers(obj.at(key), join(path, key));
    m.scaled = scaled;
    if (m.coupling.empty()) bad(join(path, key), "must not be empty");
    if (obj.contains("strength")) m.strength = parse_strength(obj.at("strength"), join(path, "strength"));
    return m;
}

std::vector<BodyPoint> parse_body(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) bad(field, "expected a non-empty array of {weight, offset}");
    std::vector<BodyPoint> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = field + "[" + std::to_string(i) + "]";
        if (!v[i].is_object()) bad(path, "expected an object");
        reject_unknown(v[i], path, {"weight", "offset"});
        out.push_back({number_at(v[i], path, "weight"), number_at(v[i], path, "offset")});
    }
    return out;
}

Polarization parse_polarization(const std::string& s, const std::string& field) {
    if (s == "TM") return Polarization::TM;
    if (s == "TE") return Polarization::TE;
    if (s == "both") return Polarization::both;
    bad(field, "expected 'TM', 'TE' or 'both', got '" + s + "'");
}

GridSpec parse_grid_object(const json& obj, const std::string& path) {
    reject_unknown(obj, path, {"lo", "hi", "count", "spacing"});
    GridSpec g;
    g.lo = number_at(obj, path, "lo");
    g.hi = number_at(obj, path, "hi");
    const int count = integer(require(obj, path, "count"), join(path, "count"));
    if (count < 2) bad(join(path, "count"), "must be at least 2");
    g.count = static_cast<std::size_t>(count);
    if (obj.contains("spacing"))
        g.spacing = parse_spacing(text(obj.at("spacing"), join(path, "spacing")), join(path, "spacing"));
    return g;
}

void check_grid(const GridSpec& g, const std::string& field) {
    if (!(g.lo > 0.0)) bad(field + ".lo", "must be positive");
    if (!(g.lo < g.hi)) bad(field, "bounds must satisfy lo < hi");
    if (g.count < 2) bad(field + ".count", "must be at least 2");
}

std::size_t channel_count(const RunConfig& cfg) {
    if (cfg.model == Model::waveguide) return channelize(*cfg.waveguide).size();
    return cfg.masses.size();
}

FormFactor make_form_factor(const std::vector<BodyPoint>& body, const std::string& prefactor) {
    std::vector<PointSource> pts;
    for (const auto& p : body) pts.push_back({p.weight, p.offset});
    return prefactor == "unit" ? FormFactor(std::move(pts), unit_prefactor)
                               : FormFactor(std::move(pts), trap_prefactor);
}

} // namespace

std::string to_string(Model model) {
    switch (model) {
    case Model::channels: return "channels";
    case Model::separable: return "separable";
    case Model::waveguide: return "waveguide";
    }
    return "?";
}

std::vector<double> GridSpec::points() const { return make_grid(lo, hi, count, spacing); }

GridSpec parse_grid(std::string_view spec) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 3 || parts.size() > 4) bad("--grid", "expected LO:HI:N[:log|linear]");
    GridSpec g;
    try {
        std::size_t used = 0;
        g.lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("lo");
        g.hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("hi");
        const long n = std::stol(parts[2], &used);
        if (used != parts[2].size() || n < 2) throw std::invalid_argument("n");
        g.count = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
        bad("--grid", "cannot parse '" + std::string(spec) + "' as LO:HI:N[:log|linear]");
    }
    if (parts.size() == 4) g.spacing = parse_spacing(parts[3], "--grid");
    check_grid(g, "--grid");
    return g;
}

void RunConfig::validate() const {
    check_grid(grid, "grid");
    if (model == Model::channels) {
        if (masses.empty()) bad("channels.masses", "must not be empty");
        for (std::size_t i = 0; i < masses.size(); ++i)
            if (!(masses[i] >= 0.0)) bad("channels.masses[" + std::to_string(i) + "]", "must be >= 0");
    }
    if (model == Model::waveguide) {
        if (!waveguide) bad("waveguide", "missing required field");
        try {
            waveguide->validate();
        } catch (const DomainError& e) {
            bad("waveguide", e.what());
        }
    }
    if (model != Model::separable) {
        std::size_t n = 0;
        try {
            n = channel_count(*this);
        } catch (const EmptyChannelSetError& e) {
            bad("waveguide.max_mass", e.what());
        }
        for (const auto* key : {"mirror_a", "mirror_b"}) {
            const auto& m = std::string(key) == "mirror_a" ? mirror_a : mirror_b;
            if (m.coupling.size() != n) {
                std::ostringstream os;
                os << "has " << m.coupling.size() << " components but the model has " << n
                   << " channels";
                bad(std::string(key) + (m.scaled ? ".scaled_coupling" : ".coupling"), os.str());
            }
        }
    } else {
        if (separable.body_a.empty()) bad("separable.body_a", "must not be empty");
        if (separable.body_b.empty()) bad("separable.body_b", "must not be empty");
        if (separable.kernel == GreenKernel::Kind::point3d && !(separable.smear > 0.0))
            bad("separable.smear", "must be positive for the point3d kernel");
        if (separable.prefactor != "trap" && separable.prefactor != "unit")
            bad("separable.prefactor", "expected 'trap' or 'unit'");
    }
    if (equilibria) {
        if (!(equilibria->lo > 0.0)) bad("equilibria.lo", "must be positive");
        if (!(equilibria->lo < equilibria->hi)) bad("equilibria", "bounds must satisfy lo < hi");
        if (equilibria->n_probe < 8) bad("equilibria.probes", "must be at least 8");
    }
    if (lattice) {
        if (!(lattice->spacing > 0.0)) bad("lattice.spacing", "must be positive");
        if (!(lattice->box > 0.0)) bad("lattice.box", "must be positive");
        if (!(lattice->x_ref > 0.0)) bad("lattice.x_ref", "must be positive");
        if (lattice->separations.empty()) bad("lattice.separations", "must not be empty");
    }
    try {
        quadrature.validate();
    } catch (const DomainError& e) {
        bad("quadrature", e.what());
    }
}

RunConfig parse_config(std::string_view json_text, std::string_view origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(origin) + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(std::string(origin) + ": top level must be an object");
    reject_unknown(doc, "",
                   {"name", "description", "model", "channels", "waveguide", "mirror_a", "mirror_b",
                    "separable", "grid", "equilibria", "lattice", "quadrature"});

    RunConfig cfg;
    cfg.name = doc.contains("name") ? text(doc.at("name"), "name") : std::string(origin);
    const auto model = text(require(doc, "", "model"), "model");
    if (model == "channels") {
        cfg.model = Model::channels;
    } else if (model == "separable") {
        cfg.model = Model::separable;
    } else if (model == "waveguide") {
        cfg.model = Model::waveguide;
    } else {
        bad("model", "expected 'channels', 'separable' or 'waveguide', got '" + model + "'");
    }

    if (cfg.model == Model::channels) {
        const auto& ch = require_object(doc, "", "channels");
        reject_unknown(ch, "channels", {"masses"});
        cfg.masses = numbers(require(ch, "channels", "masses"), "channels.masses");
    }
    if (cfg.model == Model::waveguide) {
        const auto& wg = require_object(doc, "", "waveguide");
        reject_unknown(wg, "waveguide", {"radius", "max_mass", "polarization", "angular_orders"});
        WaveguideSpec spec;
        spec.radius = number_at(wg, "waveguide", "radius");
        spec.max_mass = number_at(wg, "waveguide", "max_mass");
        if (wg.contains("polarization"))
            spec.polarization = parse_polarization(
                text(wg.at("polarization"), "waveguide.polarization"), "waveguide.polarization");
        if (wg.contains("angular_orders"))
            spec.angular_orders = integer(wg.at("angular_orders"), "waveguide.angular_orders");
        cfg.waveguide = spec;
    }
    if (cfg.model != Model::separable) {
        cfg.mirror_a = parse_mirror(require_object(doc, "", "mirror_a"), "mirror_a");
        cfg.mirror_b = parse_mirror(require_object(doc, "", "mirror_b"), "mirror_b");
    } else {
        const auto& sp = require_object(doc, "", "separable");
        reject_unknown(sp, "separable", {"kernel", "smear", "prefactor", "body_a", "body_b"});
        const auto kernel = text(require(sp, "separable", "kernel"), "separable.kernel");
        if (kernel == "line" || kernel == "line_massless") {
            cfg.separable.kernel = GreenKernel::Kind::line_massless;
        } else if (kernel == "point3d") {
            cfg.separable.kernel = GreenKernel::Kind::point3d;
            cfg.separable.smear = number_at(sp, "separable", "smear");
        } else {
            bad("separable.kernel", "expected 'line' or 'point3d', got '" + kernel + "'");
        }
        if (sp.contains("prefactor"))
            cfg.separable.prefactor = text(sp.at("prefactor"), "separable.prefactor");
        cfg.separable.body_a = parse_body(require(sp, "separable", "body_a"), "separable.body_a");
        cfg.separable.body_b = parse_body(require(sp, "separable", "body_b"), "separable.body_b");
    }

    cfg.grid = parse_grid_object(require_object(doc, "", "grid"), "grid");

    if (doc.contains("equilibria")) {
        const auto& eq = require_object(doc, "", "equilibria");
        reject_unknown(eq, "equilibria", {"lo", "hi", "probes"});
        ScanRange scan;
        scan.lo = number_at(eq, "equilibria", "lo");
        scan.hi = number_at(eq, "equilibria", "hi");
        if (eq.contains("probes")) {
            const int p = integer(eq.at("probes"), "equilibria.probes");
            if (p < 8) bad("equilibria.probes", "must be at least 8");
            scan.n_probe = static_cast<std::size_t>(p);
        }
        cfg.equilibria = scan;
    }
    if (doc.contains("lattice")) {
        const auto& lat = require_object(doc, "", "lattice");
        reject_unknown(lat, "lattice", {"spacing", "box", "x_ref", "separations", "check_halving"});
        LatticeRunSpec l;
        l.spacing = number_at(lat, "lattice", "spacing");
        l.box = number_at(lat, "lattice", "box");
        l.x_ref = number_at(lat, "lattice", "x_ref");
        l.separations = numbers(require(lat, "lattice", "separations"), "lattice.separations");
        if (lat.contains("check_halving")) {
            if (!lat.at("check_halving").is_boolean()) bad("lattice.check_halving", "expected a boolean");
            l.check_halving = lat.at("check_halving").get<bool>();
        }
        cfg.lattice = l;
    }
    if (doc.contains("quadrature")) {
        const auto& q = require_object(doc, "", "quadrature");
        reject_unknown(q, "quadrature", {"rel_tol", "abs_tol", "max_level"});
        if (q.contains("rel_tol")) cfg.quadrature.rel_tol = number(q.at("rel_tol"), "quadrature.rel_tol");
        if (q.contains("abs_tol")) cfg.quadrature.abs_tol = number(q.at("abs_tol"), "quadrature.abs_tol");
        if (q.contains("max_level"))
            cfg.quadrature.max_refinement_level = integer(q.at("max_level"), "quadrature.max_level");
    }

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

RunConfig preset(std::string_view name) {
    auto cfg = parse_config(preset_json(name), "preset " + std::string(name));
    cfg.name = std::string(name);
    return cfg;
}

ChannelScenario channel_scenario(const RunConfig& cfg) {
    if (cfg.model == Model::separable) throw ConfigError("model: separable config has no channels");
    ChannelSet cs = cfg.model == Model::waveguide ? channelize(*cfg.waveguide)
                                                  : ChannelSet::from_masses(cfg.masses);
    auto mirror = [&](const MirrorSpec& m) {
        return m.scaled ? Mirror::with_constant_scaled_coupling(cs, m.coupling, m.strength)
                        : Mirror(m.coupling, m.strength);
    };
    Mirror a = mirror(cfg.mirror_a);
    Mirror b = mirror(cfg.mirror_b);
    return {std::move(cs), std::move(a), std::move(b)};
}

SeparableScenario separable_scenario(const RunConfig& cfg) {
    if (cfg.model != Model::separable) throw ConfigError("model: config is not separable");
    const auto& s = cfg.separable;
    const GreenKernel kernel = s.kernel == GreenKernel::Kind::point3d ? GreenKernel::point3d(s.smear)
                                                                       : GreenKernel::line_massless();
    return {make_form_factor(s.body_a, s.prefactor), make_form_factor(s.body_b, s.prefactor), kernel};
}

} // namespace casimir::driver
