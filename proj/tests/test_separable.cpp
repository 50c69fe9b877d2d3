#include "casimir/errors.hpp"
#include "casimir/separable.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace casimir;

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;

long double kernel_oracle(bool line, double smear, long double r, long double w) {
    if (line) return std::exp(-w * r) / (2.0L * w);
    const long double rr = std::max(r, static_cast<long double>(smear));
    return std::exp(-w * rr) / (4.0L * kPiL * rr);
}

struct Body {
    std::vector<double> weights, offsets;
};

long double gram_oracle(const Body& a, double sa, const Body& b, double sb, bool line, double smear,
                        double w, bool trap) {
    const long double g = trap ? 1.0L + 1.0L / (static_cast<long double>(w) * w + 1.0L) : 1.0L;
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        for (std::size_t j = 0; j < b.weights.size(); ++j)
            s += static_cast<long double>(a.weights[i]) * b.weights[j] *
                 kernel_oracle(line, smear, std::abs((a.offsets[i] + sa) - (b.offsets[j] + sb)), w);
    return g * g * s;
}

double energy_oracle(const Body& a, const Body& b, bool line, double smear, double shift, bool trap) {
    auto f = [&](double w) {
        const long double gab = gram_oracle(a, -shift, b, shift, line, smear, w, trap);
        const long double gaa = gram_oracle(a, 0, a, 0, line, smear, w, trap);
        const long double gbb = gram_oracle(b, 0, b, 0, line, smear, w, trap);
        return static_cast<double>(std::log1p(-gab * gab / ((1.0L + gaa) * (1.0L + gbb))));
    };
    return oracle::integrate_half_line(f, -30.0, 8.0, 1500) / (2.0 * std::numbers::pi);
}

FormFactor make(const Body& b, bool trap = true) {
    std::vector<PointSource> pts;
    for (std::size_t i = 0; i < b.weights.size(); ++i) pts.push_back({b.weights[i], b.offsets[i]});
    return trap ? FormFactor(pts) : FormFactor(pts, unit_prefactor);
}

} // namespace

TEST_SUITE("separable") {

TEST_CASE("kernels") {
    const auto line = GreenKernel::line_massless();
    CHECK(line(0.0, 2.0) == 0.25);
    CHECK(line(1.0, 1.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
    const auto p3 = GreenKernel::point3d(0.1);
    CHECK(p3(0.0, 1.0) == p3(0.1, 1.0));
    CHECK(p3(0.05, 1.0) == doctest::Approx(std::exp(-0.1) / (0.4 * std::numbers::pi)).epsilon(1e-15));
    CHECK(p3.derivative(0.05, 1.0) == 0.0);
    const double h = 1e-6;
    for (double r : {0.3, 1.0, 2.5}) {
        CHECK(p3.derivative(r, 1.3) == doctest::Approx((p3(r + h, 1.3) - p3(r - h, 1.3)) / (2 * h)).epsilon(1e-8));
        CHECK(line.derivative(r, 1.3) ==
              doctest::Approx((line(r + h, 1.3) - line(r - h, 1.3)) / (2 * h)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(GreenKernel::point3d(0.0), DomainError);
    CHECK_THROWS_AS(GreenKernel::point3d(-1.0), DomainError);
}

TEST_CASE("gram and t_norm") {
    const auto line = GreenKernel::line_massless();
    const FormFactor unit({{1.0, 0.0}}, unit_prefactor);
    CHECK(gram(unit, unit, line, 2.0) == 0.25);
    CHECK(t_norm(unit, line, 2.0) == doctest::Approx(0.8).epsilon(1e-15));

    const FormFactor far({{1.0, 1.0}}, unit_prefactor);
    CHECK(gram(unit, far, line, 1.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
    CHECK(trap_prefactor(0.0) == 2.0);
    CHECK(trap_prefactor(1.0) == 1.5);

    const FormFactor trapped({{1.0, 0.0}});
    CHECK(gram(trapped, trapped, line, 1.0) == doctest::Approx(2.25 * 0.5).epsilon(1e-15));

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        Body a, b;
        for (int i = 0; i < 3; ++i) {
            a.weights.push_back(u(rng));
            a.offsets.push_back(-u(rng));
            b.weights.push_back(u(rng));
            b.offsets.push_back(u(rng));
        }
        const double w = std::exp(-3.0 + 6.0 * u(rng));
        const auto p3 = GreenKernel::point3d(0.01);
        const double g = gram(make(a), make(b), p3, w);
        CHECK(oracle::rel_diff(g, static_cast<double>(gram_oracle(a, 0, b, 0, false, 0.01, w, true))) < 1e-13);
        const double tn = t_norm(make(a), p3, w);
        CHECK(tn > 0.0);
        CHECK(tn <= 1.0);
        // Cauchy-Schwarz for the positive kernel: gab^2 <= gaa gbb
        CHECK(g * g <= gram(make(a), make(a), p3, w) * gram(make(b), make(b), p3, w) * (1 + 1e-12));
    }
}

TEST_CASE("form factor construction") {
    CHECK_THROWS_AS(FormFactor(std::vector<PointSource>{}), DomainError);
    CHECK_THROWS_AS(FormFactor({{1.0, std::nan("")}}), DomainError);
    CHECK_THROWS_AS(FormFactor({{1.0, 0.0}}, Prefactor{}), DomainError);
    const FormFactor f({{2.0, 0.0}, {-0.5, 1.0}});
    CHECK(f.total_weight() == 1.5);
    const auto s = f.shifted(0.25);
    CHECK(s.points()[0].position == 0.25);
    CHECK(s.points()[1].position == 1.25);
    CHECK(s.points()[1].weight == -0.5);
}

TEST_CASE("zero weights decouple") {
    const FormFactor a({{1.0, 0.0}, {-2.0, -0.3}});
    const FormFactor zero({{0.0, 0.0}, {0.0, 0.4}});
    for (auto k : {GreenKernel::line_massless(), GreenKernel::point3d(0.01)}) {
        CHECK(separable_energy(a, zero, k, 0.5).value == 0.0);
        CHECK(separable_force(a, zero, k, 0.5).value == 0.0);
        CHECK(separable_log_determinant(a, zero, k, 1.0) == 0.0);
    }
}

TEST_CASE("log determinant is non-positive and matches the dense form") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<PointSource> pa, pb;
        const double sa = u(rng) < 0.5 ? -1.0 : 1.0, sb = u(rng) < 0.5 ? -1.0 : 1.0;
        const int na = 1 + static_cast<int>(rng() % 3), nb = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < na; ++i) pa.push_back({sa * (0.1 + 3.0 * u(rng)), -u(rng)});
        for (int i = 0; i < nb; ++i) pb.push_back({sb * (0.1 + 3.0 * u(rng)), 0.05 + u(rng)});
        const FormFactor fa(pa), fb(pb);
        const double w = std::exp(-3.0 + 6.0 * u(rng));
        for (auto k : {GreenKernel::line_massless(), GreenKernel::point3d(0.02)}) {
            const auto chk = explicit_matrix_check(fa, fb, k, w);
            CHECK(chk.closed_form <= 0.0);
            CHECK(oracle::rel_diff(chk.matrix_form, chk.closed_form) < 1e-12);
        }
    }
}

TEST_CASE("energy matches an independent integration") {
    const Body a{{1.0, 0.5}, {0.0, -0.2}}, b{{2.0}, {0.1}};
    for (double shift : {0.1, 0.4, 1.0}) {
        const double e = separable_energy(make(a), make(b), GreenKernel::point3d(0.01), shift).value;
        CHECK(oracle::rel_diff(e, energy_oracle(a, b, false, 0.01, shift, true)) < 1e-7);
        CHECK(e < 0.0);
    }
    const Body c{{1.5}, {0.0}}, d{{0.7}, {0.0}};
    for (double shift : {0.2, 1.0}) {
        const double e = separable_energy(make(c, false), make(d, false), GreenKernel::line_massless(), shift).value;
        CHECK(oracle::rel_diff(e, energy_oracle(c, d, true, 0.0, shift, false)) < 1e-7);
    }
}

TEST_CASE("force is minus the derivative of the energy") {
    const FormFactor fa({{1.0, 0.0}, {-4.0, -0.1}}), fb({{1.0, 0.0}, {-1.0, 1.0}});
    QuadratureSpec tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-18;
    for (auto k : {GreenKernel::line_massless(), GreenKernel::point3d(0.01)})
        for (double a : {0.05, 0.3, 1.2}) {
            const double h = 1e-4 * a;
            const double fd = -(separable_energy(fa, fb, k, a + h, tight).value -
                                separable_energy(fa, fb, k, a - h, tight).value) / (2 * h);
            CHECK(oracle::rel_diff(separable_force(fa, fb, k, a, tight).value, fd) < 1e-6);
        }
}

TEST_CASE("single points on the line attract monotonically") {
    const FormFactor fa({{1.0, 0.0}}), fb({{2.0, 0.0}});
    const auto grid = make_grid(0.05, 3.0, 12, Spacing::log);
    const auto curve = separable_curve(fa, fb, GreenKernel::line_massless(), grid);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].a == grid[i]);
        CHECK(curve[i].flags == 0);
        CHECK(curve[i].energy < 0.0);
        CHECK(curve[i].force < 0.0);
        if (i > 0) CHECK(curve[i].energy > curve[i - 1].energy);
    }
    CHECK(find_separable_equilibria(fa, fb, GreenKernel::line_massless(), {0.05, 3.0, 32}).zeros.empty());
}

TEST_CASE("second-order energy") {
    const FormFactor fa({{1.0, 0.0}}), fb({{1.0, 1.0}});
    const auto p3 = GreenKernel::point3d(0.01);
    const auto e2 = second_order_energy(fa, fb, p3);
    CHECK(e2.value < 0.0);

    // weak coupling: the full energy approaches the second-order one
    const double eps = 1e-3;
    const FormFactor wa({{eps, 0.0}}), wb({{eps, 1.0}});
    const double full = separable_energy(wa, wb, p3, 0.0).value;
    const double second = second_order_energy(wa, wb, p3).value;
    CHECK(full == doctest::Approx(second).epsilon(1e-3));
    CHECK(second == doctest::Approx(std::pow(eps, 4) * e2.value).epsilon(1e-9));

    CHECK_THROWS_AS(second_order_energy(fa, fb, GreenKernel::line_massless()), InfraredDivergenceError);
    const FormFactor neutral({{1.0, 0.0}, {-1.0, -0.5}}, unit_prefactor);
    const FormFactor other({{1.0, 1.0}}, unit_prefactor);
    CHECK(second_order_energy(neutral, other, GreenKernel::line_massless()).value < 0.0);
}

TEST_CASE("overlap and shift errors") {
    const FormFactor fa({{1.0, 0.0}}), fb({{1.0, 0.0}});
    const auto p3 = GreenKernel::point3d(0.02);
    CHECK_THROWS_AS(separable_energy(fa, fb, p3, 0.005), OverlapError);
    CHECK_THROWS_AS(separable_force(fa, fb, p3, 0.005), OverlapError);
    CHECK_NOTHROW(separable_energy(fa, fb, p3, 0.011));
    CHECK_THROWS_AS(second_order_energy(fa, fb, p3), OverlapError);
    CHECK_THROWS_AS(separable_energy(fa, fb, p3, INFINITY), DomainError);
    CHECK_THROWS_AS(separable_curve(fa, fb, p3, {}), DomainError);
    CHECK_THROWS_AS(separable_curve(fa, fb, p3, {0.5, 0.2}), DomainError);
}

}
