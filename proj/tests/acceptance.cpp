// Acceptance run: one PASS/FAIL line per criterion, each with its own time
// budget. `casimir_acceptance --criterion N` runs one; no argument runs all.

#include "casimir/driver.hpp"
#include "casimir/lattice.hpp"
#include "casimir/parallel.hpp"

#include "oracles.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace casimir;
namespace drv = casimir::driver;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Verdict()> body;
};

std::string fmt(double v) { return drv::format_number(v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict dirichlet_closed_form() {
    const auto cs = ChannelSet::from_masses({0.0});
    const Mirror a({1.0}), b({1.0});
    double worst = 0.0, slowest = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
        const auto t0 = std::chrono::steady_clock::now();
        const double e = energy(a, b, cs, x).value;
        slowest = std::max(slowest, seconds_since(t0));
        worst = std::max(worst, oracle::rel_diff(x * e, -kPi / 24.0));
    }
    return {worst <= 1e-6 && slowest < 1.0,
            "max rel err " + fmt(worst) + ", slowest evaluation " + fmt(slowest) + " s"};
}

Verdict attraction_suite() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Config {
        std::vector<double> masses, alpha, beta;
        double la, lb;
    };
    std::vector<Config> configs(100);
    for (auto& c : configs) {
        const int n = 1 + static_cast<int>(rng() % 4);
        const double m = 2.0 * u(rng);
        for (int i = 0; i < n; ++i) {
            c.masses.push_back(m);
            c.alpha.push_back((0.1 + 1.9 * u(rng)) * (u(rng) < 0.5 ? -1 : 1));
            c.beta.push_back((0.1 + 1.9 * u(rng)) * (u(rng) < 0.5 ? -1 : 1));
        }
        // lambda in (0.1, 1e3) or infinite; 1 - u lies in (0, 1]
        c.la = u(rng) < 0.25 ? kInfiniteStrength : 0.1 * std::exp(9.2 * (1.0 - u(rng)));
        c.lb = u(rng) < 0.25 ? kInfiniteStrength : 0.1 * std::exp(9.2 * (1.0 - u(rng)));
    }
    const auto grid = make_grid(0.05, 10.0, 20, Spacing::log);
    std::atomic<int> violations{0}, failures{0};
    parallel_for(configs.size(), [&](std::size_t i) {
        const auto& c = configs[i];
        const auto cs = ChannelSet::from_masses(c.masses);
        const Mirror a(c.alpha, c.la), b(c.beta, c.lb);
        for (double x : grid) {
            try {
                if (!(force(a, b, cs, x).value < 0.0)) ++violations;
            } catch (const Error&) {
                ++failures;
            }
        }
    });
    return {violations == 0 && failures == 0,
            std::to_string(configs.size() * grid.size()) + " force samples, " +
                std::to_string(violations.load()) + " non-attractive, " + std::to_string(failures.load()) +
                " failed"};
}

Verdict fig2_structure() {
    const auto cfg = drv::preset("fig2");
    const auto sc = drv::channel_scenario(cfg);
    const auto report = find_equilibria(sc.a, sc.b, sc.channels, {0.02, 5.0, 64});
    const double f_lo = force(sc.a, sc.b, sc.channels, 0.02).value;
    const double f_hi = force(sc.a, sc.b, sc.channels, 5.0).value;

    const auto doc = nlohmann::json::parse(drv::regression_json());
    std::vector<double> pinned;
    double tol = 0.0;
    for (const auto& e : doc.at("equilibria"))
        if (e.at("preset") == "fig2") {
            tol = e.at("rel_tol").get<double>();
            for (const auto& z : e.at("zeros")) pinned.push_back(z.at("x").get<double>());
        }

    bool ok = report.zeros.size() == 2 && f_lo < 0.0 && f_hi < 0.0;
    std::ostringstream d;
    d << report.zeros.size() << " zeros";
    if (report.zeros.size() == 2) {
        ok = ok && report.zeros[0].kind == EquilibriumKind::unstable_maximum &&
             report.zeros[1].kind == EquilibriumKind::stable_minimum && pinned.size() == 2;
        for (std::size_t i = 0; i < report.zeros.size(); ++i) {
            const double drift = i < pinned.size() ? oracle::rel_diff(report.zeros[i].x, pinned[i]) : INFINITY;
            ok = ok && drift <= tol;
            d << ", " << to_string(report.zeros[i].kind) << " at " << fmt(report.zeros[i].x) << " (drift "
              << fmt(drift) << ")";
        }
    }
    d << ", F(0.02) = " << fmt(f_lo) << ", F(5) = " << fmt(f_hi);
    return {ok, d.str()};
}

Verdict short_distance() {
    const auto sc = drv::channel_scenario(drv::preset("fig2"));
    const double x = 1e-3;
    const double xe = x * energy(sc.a, sc.b, sc.channels, x).value;
    const double target = -dilog(576.0 / 676.0) / (4.0 * kPi);
    const double rel = oracle::rel_diff(xe, target);
    return {rel <= 0.02, "x E = " + fmt(xe) + ", predicted " + fmt(target) + ", rel diff " + fmt(rel)};
}

Verdict eigenvalue_bound() {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int outside = 0, clamped = 0;
    double largest = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int n = 1 + static_cast<int>(rng() % 4);
        std::vector<double> masses, alpha, beta;
        for (int i = 0; i < n; ++i) {
            masses.push_back(u(rng) < 0.2 ? 0.0 : 5.0 * u(rng));
            alpha.push_back((0.05 + 3.0 * u(rng)) * (u(rng) < 0.5 ? -1 : 1));
            beta.push_back((0.05 + 3.0 * u(rng)) * (u(rng) < 0.5 ? -1 : 1));
        }
        const double la = std::exp(std::log(0.1) + std::log(1e4) * u(rng));
        const double lb = std::exp(std::log(0.1) + std::log(1e4) * u(rng));
        const double w = std::exp(-6.0 + 10.0 * u(rng));
        const auto s = product_eigenvalues(Mirror(alpha, la), Mirror(beta, lb), ChannelSet::from_masses(masses),
                                           FrequencyPoint(w));
        clamped += s.clamped;
        for (double v : s.values) {
            if (!(v >= 0.0 && v < 1.0)) ++outside;
            largest = std::max(largest, v);
        }
    }
    return {outside == 0, "1000 draws, " + std::to_string(outside) + " outside [0, 1), " +
                              std::to_string(clamped) + " clamped onto the boundary, largest " + fmt(largest)};
}

Verdict separable_line_attraction() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Pair {
        std::vector<PointSource> a, b;
        bool trap;
    };
    std::vector<Pair> pairs(50);
    for (auto& p : pairs) {
        const int na = 1 + static_cast<int>(rng() % 3), nb = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < na; ++i) p.a.push_back({(0.1 + 2.0 * u(rng)) * (u(rng) < 0.5 ? -1 : 1), -0.5 * u(rng)});
        for (int i = 0; i < nb; ++i) p.b.push_back({(0.1 + 2.0 * u(rng)) * (u(rng) < 0.5 ? -1 : 1), 0.5 * u(rng)});
        p.trap = u(rng) < 0.5;
    }
    const auto grid = make_grid(0.05, 5.0, 15, Spacing::log);
    const auto line = GreenKernel::line_massless();
    std::atomic<int> violations{0}, failures{0};
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto& p = pairs[i];
        const FormFactor fa = p.trap ? FormFactor(p.a) : FormFactor(p.a, unit_prefactor);
        const FormFactor fb = p.trap ? FormFactor(p.b) : FormFactor(p.b, unit_prefactor);
        double prev = -INFINITY;
        for (double a : grid) {
            try {
                const double e = separable_energy(fa, fb, line, a).value;
                if (!(e > prev)) ++violations;
                prev = e;
            } catch (const Error&) {
                ++failures;
            }
        }
    });
    return {violations == 0 && failures == 0,
            "50 pairs x 15 shifts, " + std::to_string(violations.load()) + " monotonicity violations, " +
                std::to_string(failures.load()) + " failed evaluations"};
}

Verdict fig3_structure() {
    const auto cfg = drv::preset("fig3");
    struct Interval {
        double eps, lo = NAN, hi = NAN;
    };
    std::vector<Interval> found;
    std::ostringstream d;
    for (double eps : {0.005, 0.01, 0.02}) {
        auto c = cfg;
        c.separable.smear = eps;
        const auto sc = drv::separable_scenario(c);
        const auto report = find_separable_equilibria(sc.a, sc.b, sc.kernel, {0.011, 3.0, 96});
        Interval iv{eps};
        for (std::size_t i = 0; i + 1 < report.zeros.size(); ++i)
            if (report.zeros[i].kind == EquilibriumKind::unstable_maximum &&
                report.zeros[i + 1].kind == EquilibriumKind::stable_minimum) {
                iv.lo = report.zeros[i].x;
                iv.hi = report.zeros[i + 1].x;
                break;
            }
        d << "eps " << fmt(eps) << ": ";
        if (std::isnan(iv.lo))
            d << "no repulsive interval (" << report.zeros.size() << " force zeros); ";
        else
            d << "repulsive on [" << fmt(iv.lo) << ", " << fmt(iv.hi) << "]; ";
        found.push_back(iv);
    }
    bool ok = true;
    for (const auto& iv : found) ok = ok && !std::isnan(iv.lo);
    if (ok) {
        const auto& ref = found[1];
        for (const auto& iv : found)
            ok = ok && oracle::rel_diff(iv.lo, ref.lo) <= 0.1 && oracle::rel_diff(iv.hi, ref.hi) <= 0.1;
        d << "endpoints within 10% of eps = 0.01: " << (ok ? "yes" : "no");
    } else {
        d << "E(a) is monotone";
    }
    return {ok, d.str()};
}

Verdict rank_one_reduction() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        // one weight sign per body; the sign itself is random
        const double sa = u(rng) < 0.5 ? -1.0 : 1.0, sb = u(rng) < 0.5 ? -1.0 : 1.0;
        std::vector<PointSource> pa, pb;
        const int na = 1 + static_cast<int>(rng() % 4), nb = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < na; ++i) pa.push_back({sa * (0.1 + 4.0 * u(rng)), -u(rng)});
        for (int i = 0; i < nb; ++i) pb.push_back({sb * (0.1 + 4.0 * u(rng)), 0.05 + u(rng)});
        const bool trap = u(rng) < 0.5;
        const FormFactor fa = trap ? FormFactor(pa) : FormFactor(pa, unit_prefactor);
        const FormFactor fb = trap ? FormFactor(pb) : FormFactor(pb, unit_prefactor);
        const auto kernel = u(rng) < 0.5 ? GreenKernel::line_massless() : GreenKernel::point3d(0.01 + 0.04 * u(rng));
        const double w = std::exp(-4.0 + 7.0 * u(rng));
        const auto chk = explicit_matrix_check(fa, fb, kernel, w);
        worst = std::max(worst, oracle::rel_diff(chk.matrix_form, chk.closed_form));
    }
    return {worst <= 1e-12, "200 configurations, max rel diff " + fmt(worst)};
}

Verdict lattice_oracle() {
    bool ok = true;
    std::ostringstream d;
    for (const char* name : {"dirichlet-lambda50", "fig2-lambda50"}) {
        const auto rows = drv::oracle_compare(drv::preset(name));
        double worst = 0.0, worst_half = 0.0;
        for (const auto& r : rows) {
            worst = std::max(worst, r.rel_diff);
            worst_half = std::max(worst_half, r.halving_change);
            ok = ok && !r.flagged && r.rel_diff <= 0.02 && r.halving_change < 0.005;
        }
        ok = ok && rows.size() == 5;
        if (d.tellp() > 0) d << "; ";
        d << name << ": " << rows.size() << " separations, max rel diff " << fmt(worst) << ", max halving change "
          << fmt(worst_half);
    }
    return {ok, d.str()};
}

Verdict bessel_channelizer() {
    double worst_residual = 0.0;
    for (auto pol : {Polarization::TM, Polarization::TE})
        for (const auto& m : waveguide_modes({1.0, 25.0, pol, 6})) {
            const double r = pol == Polarization::TM ? bessel_j(m.order, m.zeta) : bessel_j_prime(m.order, m.zeta);
            worst_residual = std::max(worst_residual, std::abs(r));
        }
    auto j0 = [](double x) { return oracle::bessel_j_integral(0, x); };
    auto j1 = [](double x) { return oracle::bessel_j_integral(1, x); };
    const double e01 = std::abs(bessel_zero(0, 1, BesselRootKind::J) - oracle::bisect(j0, 2.0, 3.0));
    const double e11 = std::abs(bessel_zero(1, 1, BesselRootKind::J) - oracle::bisect(j1, 3.5, 4.0));

    bool exact = true;
    const auto base = channelize({1.0, 20.0, Polarization::both, 4}).masses();
    for (double radius : {0.25, 0.5, 2.0, 4.0, 3.0, 0.7}) {
        const auto m = channelize({radius, 20.0 / radius, Polarization::both, 4}).masses();
        if (m.size() != base.size()) {
            exact = false;
            continue;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double expected = base[i] / radius;
            exact = exact && std::abs(m[i] - expected) <= 2.0 * std::numeric_limits<double>::epsilon() * expected;
        }
    }
    const bool ok = worst_residual <= 1e-11 && e01 <= 1e-10 && e11 <= 1e-10 && exact;
    return {ok, "max residual " + fmt(worst_residual) + ", zeta_01 err " + fmt(e01) + ", zeta_11 err " + fmt(e11) +
                    ", 1/R scaling " + (exact ? "exact" : "broken")};
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "Dirichlet closed form", 3.0, dirichlet_closed_form},
        {2, "attraction for equal masses", 300.0, attraction_suite},
        {3, "two-channel equilibria", 60.0, fig2_structure},
        {4, "short-distance asymptote", 10.0, short_distance},
        {5, "product eigenvalues in [0, 1)", 30.0, eigenvalue_bound},
        {6, "separable attraction on the line", 300.0, separable_line_attraction},
        {7, "separable trap repulsive interval", 120.0, fig3_structure},
        {8, "rank-1 reduction algebra", 30.0, rank_one_reduction},
        {9, "lattice oracle equivalence", 600.0, lattice_oracle},
        {10, "Bessel channelizer", 5.0, bessel_channelizer},
    };
    return all;
}

bool run_one(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = c.body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(t0);
    const bool in_time = elapsed < c.budget_s;
    const bool pass = v.pass && in_time;
    std::printf("criterion %d %s: %s (%s; %.2f s of %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.title,
                v.detail.c_str(), elapsed, c.budget_s);
    std::fflush(stdout);
    return pass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    bool all_pass = true;
    for (const auto& c : criteria())
        if (only == 0 || c.id == only) all_pass = run_one(c) && all_pass;
    return all_pass ? 0 : 1;
}
