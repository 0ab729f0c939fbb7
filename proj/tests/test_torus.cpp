#include <doctest.h>

#include <cmath>
#include <random>

#include "mfl/sequence.hpp"
#include "mfl/torus_measure.hpp"
#include "support.hpp"

using namespace mfl;
using support::kind_of;

namespace {

TorusMeasure random_measure(std::mt19937_64& rng, std::size_t bins) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> d(bins);
    for (auto& v : d) v = u(rng) < 0.3 ? 0.0 : u(rng);
    std::vector<Atom> atoms;
    const int n_atoms = static_cast<int>(rng() % 4);
    for (int i = 0; i < n_atoms; ++i) atoms.push_back({kTwoPi * static_cast<double>(rng() % 64) / 64.0, 0.1 + u(rng)});
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    atoms.erase(std::unique(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.position == b.position; }),
                atoms.end());
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; }) && atoms.empty()) d[0] = 1.0;
    return TorusMeasure(bins, std::move(d), std::move(atoms));
}

}  // namespace

TEST_SUITE("torus") {
    TEST_CASE("construction and masses") {
        const auto u = TorusMeasure::uniform(256, 3.0);
        CHECK(u.total_mass() == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(u.normalized().total_mass() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(u.scaled(2.0).total_mass() == doctest::Approx(6.0));
        CHECK(u.normalized().scaled(u.total_mass()).total_mass() == doctest::Approx(3.0).epsilon(1e-14));
        const auto p = TorusMeasure::point_mass(1.0, 0.5, 64);
        CHECK(p.atomic_mass() == 0.5);
        CHECK(p.continuous_mass() == 0.0);
        CHECK(u.midpoint(0) == doctest::Approx(kTwoPi / 512));

        CHECK_THROWS_AS(TorusMeasure(1, {1.0}), Error);
        CHECK_THROWS_AS(TorusMeasure(4, {1.0, 1.0}), Error);
        CHECK_THROWS_AS(TorusMeasure(2, {1.0, -1.0}), Error);
        CHECK_THROWS_AS(TorusMeasure(2, {1.0, 1.0}, {{0.5, 0.0}}), Error);
        CHECK_THROWS_AS(TorusMeasure(2, {1.0, 1.0}, {{0.5, 1.0}, {0.5, 2.0}}), Error);
        CHECK_THROWS_AS(TorusMeasure(2, {1.0, 1.0}, {{kTwoPi, 1.0}}), Error);
        CHECK(kind_of([] { TorusMeasure(4, {0, 0, 0, 0}).normalized(); }) == ErrorKind::zero_mass);

        const auto m = u.mixed(0.5, TorusMeasure::point_mass(1.0, 1.0, 256), 2.0);
        CHECK(m.total_mass() == doctest::Approx(3.5));
        CHECK(m.mixed(1.0, TorusMeasure::point_mass(1.0, 1.0, 256), 1.0).atoms().size() == 1);
    }

    TEST_CASE("affinity examples") {
        std::mt19937_64 rng(1);
        const auto eta = random_measure(rng, 128);
        CHECK(affinity(eta, eta) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(affinity(eta, eta.scaled(7.0)) == doctest::Approx(1.0).epsilon(1e-12));

        std::vector<double> a(128, 0.0), b(128, 0.0);
        for (int j = 0; j < 64; ++j) a[j] = 1.0 + j;
        for (int j = 64; j < 128; ++j) b[j] = 2.0;
        CHECK(affinity(TorusMeasure(128, a, {{1.0, 1.0}}), TorusMeasure(128, b, {{2.0, 1.0}})) == 0.0);
        CHECK(affinity(TorusMeasure::uniform(128), TorusMeasure::point_mass(0.0, 1.0, 128)) == 0.0);

        CHECK(kind_of([] { affinity(TorusMeasure::uniform(8), TorusMeasure::uniform(16)); }) == ErrorKind::grid_mismatch);
        CHECK(kind_of([] { affinity(TorusMeasure::uniform(8), TorusMeasure(8, std::vector<double>(8, 0.0))); }) ==
              ErrorKind::zero_mass);
    }

    TEST_CASE("affinity properties on random pairs") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 300; ++trial) {
            const auto eta = random_measure(rng, 64), nu = random_measure(rng, 64);
            const double G = affinity(eta, nu);
            CHECK(G >= 0.0);
            CHECK(G <= 1.0);
            CHECK(affinity(nu, eta) == G);
            for (const double t : {0.3, 0.5, 0.7}) CHECK(std::abs(affinity_with_dominating(eta, nu, t) - G) <= 1e-10);
            const double H = hellinger(eta, nu);
            CHECK(std::abs(H * H - 2.0 * (1.0 - G)) <= 1e-14);
        }
        CHECK_THROWS_AS(affinity_with_dominating(TorusMeasure::uniform(8), TorusMeasure::uniform(8), 1.0), Error);
    }

    TEST_CASE("hellinger examples") {
        const auto u = TorusMeasure::uniform(64);
        CHECK(hellinger(u, u) == doctest::Approx(0.0).epsilon(1e-7));
        CHECK(hellinger(u, TorusMeasure::point_mass(1.0, 1.0, 64)) == doctest::Approx(std::sqrt(2.0)));
    }

    TEST_CASE("fourier coefficients") {
        CHECK(std::abs(fourier_coeff(TorusMeasure::uniform(), 1)) <= 1e-12);
        CHECK(std::abs(fourier_coeff(TorusMeasure::uniform(), 0) - 1.0) <= 1e-12);
        const double x0 = 2.2;
        for (const std::int64_t k : {-5, 0, 1, 7, 2048})
            CHECK(std::abs(fourier_coeff(TorusMeasure::point_mass(x0), k) - std::polar(1.0, -k * x0)) < 1e-12);
        const auto c = TorusMeasure::from_density([](double x) { return (1.0 + std::cos(x)) / kTwoPi; });
        CHECK(std::abs(fourier_coeff(c, 1) - 0.5) < 1e-6);
        CHECK(std::abs(fourier_coeff(c, -1) - 0.5) < 1e-6);
        CHECK(kind_of([] { fourier_coeff(TorusMeasure::uniform(64), 33); }) == ErrorKind::resolution);
        CHECK_NOTHROW(fourier_coeff(TorusMeasure::uniform(64), -32));
    }

    TEST_CASE("wiener continuity statistic") {
        for (const std::uint64_t K : {0u, 5u, 100u}) {
            CHECK(wiener_continuity_stat(TorusMeasure::point_mass(0.7), K) == doctest::Approx(1.0));
            CHECK(wiener_continuity_stat(TorusMeasure::uniform(), K) == doctest::Approx(1.0 / (K + 1)));
        }
        const auto half = TorusMeasure::uniform(kDefaultBins, 0.5).mixed(1.0, TorusMeasure::point_mass(0.0, 0.5), 1.0);
        const std::uint64_t K = 2000;
        CHECK(wiener_continuity_stat(half, K) == doctest::Approx((1.0 + K * 0.25) / (K + 1)).epsilon(1e-9));
        CHECK(kind_of([] { wiener_continuity_stat(TorusMeasure::uniform(64), 40); }) == ErrorKind::resolution);
    }

    TEST_CASE("rajchman profile") {
        const auto atom = rajchman_profile(TorusMeasure::point_mass(0.0, 2.0), 100);
        for (const double m : atom.magnitudes) CHECK(m == doctest::Approx(1.0));
        CHECK(atom.dirichlet_flag);

        const auto c = rajchman_profile(TorusMeasure::from_density([](double x) { return (1.0 + std::cos(x)) / kTwoPi; }), 50);
        CHECK(c.magnitudes[0] == doctest::Approx(1.0));
        CHECK(c.magnitudes[1] == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(c.magnitudes[2] < 1e-9);
        CHECK_FALSE(c.dirichlet_flag);

        const auto u = rajchman_profile(TorusMeasure::uniform(), 64);
        CHECK(u.magnitudes[0] == doctest::Approx(1.0));
        CHECK(u.upper_half_max < 1e-12);
        CHECK_FALSE(u.dirichlet_flag);
        CHECK(u.tail_max.size() == 65);
    }

    TEST_CASE("json round trip") {
        std::mt19937_64 rng(4);
        const auto eta = random_measure(rng, 32);
        const auto back = measure_from_json(to_json(eta));
        CHECK(back.bins() == eta.bins());
        CHECK(back.density() == eta.density());
        REQUIRE(back.atoms().size() == eta.atoms().size());
        for (std::size_t i = 0; i < eta.atoms().size(); ++i) {
            CHECK(back.atoms()[i].position == eta.atoms()[i].position);
            CHECK(back.atoms()[i].mass == eta.atoms()[i].mass);
        }
        const auto path = support::scratch_dir("torus") / "m.json";
        save_measure(path, eta);
        CHECK(load_measure(path).density() == eta.density());
        CHECK(kind_of([] { measure_from_json(nlohmann::json{{"bins", 2}}); }) == ErrorKind::format);
    }
}
