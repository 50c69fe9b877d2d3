#include "casimir/dispersion.hpp"
#include "casimir/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace casimir;

TEST_SUITE("dispersion") {

TEST_CASE("wavenumbers follow sqrt(w^2 + m^2)") {
    CHECK(wavenumbers(ChannelSet::from_masses({0.0}), FrequencyPoint(1.0))[0] == 1.0);

    const auto k = wavenumbers(ChannelSet::from_masses({1.0, 5.0}), FrequencyPoint(0.5));
    CHECK(k[0] == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
    CHECK(k[1] == doctest::Approx(std::sqrt(25.25)).epsilon(1e-15));
    CHECK(k[0] == doctest::Approx(1.118034).epsilon(1e-6));
    CHECK(k[1] == doctest::Approx(5.024938).epsilon(1e-6));

    CHECK(wavenumbers(ChannelSet::from_masses({3.0}), FrequencyPoint(4.0))[0] == 5.0);
}

TEST_CASE("propagation kernel") {
    const auto cs = ChannelSet::from_masses({1.0, 5.0});
    for (double p : propagation_kernel(cs, FrequencyPoint(0.7), 0.0)) CHECK(p == 1.0);

    CHECK(propagation_kernel(ChannelSet::from_masses({0.0}), FrequencyPoint(1.0), std::log(2.0))[0] ==
          doctest::Approx(0.5).epsilon(1e-15));

    const auto p = propagation_kernel(cs, FrequencyPoint(1.0), 1.0);
    CHECK(p[0] == doctest::Approx(std::exp(-std::sqrt(2.0))).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(std::exp(-std::sqrt(26.0))).epsilon(1e-15));
    CHECK(p[0] == doctest::Approx(0.243117).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(0.006097).epsilon(1e-3));

    CHECK_THROWS_AS(propagation_kernel(cs, FrequencyPoint(1.0), -0.1), DomainError);
}

TEST_CASE("kernel decreases in distance and in mass") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int t = 0; t < 200; ++t) {
        const double m1 = u(rng), m2 = m1 + u(rng), w = u(rng), x = u(rng), dx = 0.1 * u(rng);
        const auto cs = ChannelSet::from_masses({m1, m2});
        const auto p = propagation_kernel(cs, FrequencyPoint(w), x);
        const auto q = propagation_kernel(cs, FrequencyPoint(w), x + dx);
        CHECK(p[1] < p[0]);
        CHECK(q[0] < p[0]);
        CHECK(q[1] < p[1]);
        for (double v : p) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("massless channel is exactly k = w") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const auto d = Dispersion::massive(0.0);
    for (int t = 0; t < 500; ++t) {
        const double w = std::exp(u(rng));
        CHECK(d.k(w) == w);
        CHECK(d.dk_domega(w) == 1.0);
    }
}

TEST_CASE("group velocity times k equals w") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int t = 0; t < 500; ++t) {
        const auto d = Dispersion::massive(std::exp(u(rng)));
        const double w = std::exp(u(rng));
        CHECK(d.dk_domega(w) * d.k(w) == doctest::Approx(w).epsilon(1e-15));
        CHECK(d.dk_domega(w) > 0.0);
        CHECK(d.dk_domega(w) <= 1.0);
        CHECK(d.k(w) >= w);
        CHECK(d.k(w) >= d.mass());
    }
}

TEST_CASE("custom dispersion") {
    const Dispersion d(CustomDispersion{[](double w) { return 2.0 * w; }, [](double) { return 2.0; }});
    CHECK_FALSE(d.is_massive());
    CHECK(d.k(1.5) == 3.0);
    CHECK(d.dk_domega(1.5) == 2.0);
    CHECK_THROWS_AS(d.mass(), DomainError);
    CHECK_THROWS_AS(Dispersion(CustomDispersion{[](double w) { return w; }, nullptr}), DomainError);

    const ChannelSet cs({d, Dispersion::massive(1.0)});
    CHECK_FALSE(cs.all_massive());
    CHECK_THROWS_AS(cs.masses(), DomainError);
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(FrequencyPoint(0.0), DomainError);
    CHECK_THROWS_AS(FrequencyPoint(-1.0), DomainError);
    CHECK_THROWS_AS(FrequencyPoint(std::nan("")), DomainError);
    CHECK_THROWS_AS(Dispersion::massive(-1.0), DomainError);
    CHECK_THROWS_AS(ChannelSet(std::vector<Dispersion>{}), DomainError);
}

}
