#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qwalk/dirac.hpp"
#include "qwalk/errors.hpp"

using namespace qwalk;
using namespace qwalk::dirac;

namespace {

const double kPi = std::numbers::pi;

struct Draw {
    DiracMode a, b;
};

Draw random_pair(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> k(-5, 5), m(0, 3), mu(-4, 4);
    std::bernoulli_distribution coin;
    const double mass = m(rng);
    Draw d{{mass, mu(rng), k(rng), coin(rng) ? 1 : -1}, {mass, mu(rng), k(rng), coin(rng) ? 1 : -1}};
    if (d.a.mu == d.b.mu) d.b.mu += 0.5;
    return d;
}

} // namespace

TEST_CASE("energy") {
    CHECK(dirac_energy(0, 1, 1) == 1.0);
    CHECK(dirac_energy(3, 4, -1) == -5.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        const double k = u(rng), m = std::abs(u(rng));
        const double e = dirac_energy(k, m, 1);
        CHECK(std::abs(e * e - k * k - m * m) < 1e-10 * (1 + e * e));
    }
}

TEST_CASE("spinor values and pointwise normalization") {
    const auto s = dirac_spinor(0.0, {1.0, 0.0, 0.0, 1});
    CHECK(std::abs(s.upper - 1 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.lower - 1 / std::sqrt(2.0)) < 1e-15);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-50, 50);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_pair(rng);
        for (int j = 0; j < 100; ++j) {
            const auto v = dirac_spinor(x(rng), p.a);
            REQUIRE(std::abs(std::norm(v.upper) + std::norm(v.lower) - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(dirac_spinor(0.0, {0.0, 1.0, 2.0, 1}), DegenerateSpinor);
    CHECK_NOTHROW(dirac_spinor(0.0, {0.0, 1.0, 2.0, -1}));
}

TEST_CASE("spinors solve the Dirac equation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> x(-3, 3);
    for (int i = 0; i < 40; ++i) {
        const auto mode = random_pair(rng).a;
        const double e = dirac_energy(mode.k, mode.mass, mode.band);
        auto psi = [&](double at) {
            const auto s = dirac_spinor(at, mode);
            return std::pair<cd, cd>(s.upper, s.lower);
        };
        // the finite-difference truncation error scales with the local phase curvature
        const double x0 = x(rng);
        const double rate = std::abs(mode.mu * x0 + mode.k) + std::abs(mode.mu);
        CHECK(oracle::dirac_residual(psi, x0, mode.mu, mode.mass, e) < 1e-8 * (1 + rate * rate * rate));
    }
}

TEST_CASE("spinor factor") {
    CHECK(std::abs(gamma_factor(1.3, 1.3, 1, 1, 0.7) - 1.0) < 1e-12);
    CHECK(std::abs(gamma_factor(0, 0, 1, -1, 1.0)) < 1e-15);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10000; ++i) {
        const auto p = random_pair(rng);
        REQUIRE(std::abs(gamma_factor(p.a.k, p.b.k, p.a.band, p.b.band, p.a.mass)) <= 1 + 1e-12);
    }
}

TEST_CASE("closed form: bound, symmetries and equal-mode magnitude") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 10000; ++i) {
        const auto p = random_pair(rng);
        const auto ab = overlap_closed_form(p.a, p.b);
        REQUIRE(std::abs(ab) <= overlap_bound(p.a.mu, p.b.mu) + 1e-12);
        REQUIRE(std::abs(ab - std::conj(overlap_closed_form(p.b, p.a))) < 1e-12);
    }
    const DiracMode a{1.0, 1.0, 0.3, 1}, b{1.0, -0.5, 0.3, 1};
    CHECK(std::abs(overlap_closed_form(a, b)) == doctest::Approx(std::sqrt(kPi / 0.75)).epsilon(1e-14));
    CHECK(std::abs(overlap_closed_form(a, b)) == doctest::Approx(overlap_bound(1.0, -0.5)));
    CHECK_THROWS_AS(overlap_closed_form(a, a), EqualSlopes);
    CHECK_THROWS_AS(chirp_overlap(1, 0, 1, 2), EqualSlopes);
    CHECK_THROWS_AS(overlap_closed_form(a, DiracMode{2.0, 0.0, 0.3, 1}), InvalidArgument);
}

TEST_CASE("magnitude depends on the slopes only through their difference") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> shift(-3, 3);
    for (int i = 0; i < 200; ++i) {
        auto p = random_pair(rng);
        const double before = std::abs(overlap_closed_form(p.a, p.b));
        const double s = shift(rng);
        p.a.mu += s;
        p.b.mu += s;
        CHECK(std::abs(std::abs(overlap_closed_form(p.a, p.b)) - before) < 1e-12 * (1 + before));
    }
}

TEST_CASE("quadrature converges to the closed form") {
    const DiracMode a{1.0, 1.0, 0.0, 1}, b{1.0, 0.0, 1.0, 1};
    const auto exact = overlap_closed_form(a, b);
    CHECK(std::abs(exact) <= overlap_bound(1.0, 0.0));
    double last = 1e9;
    for (double w : {20.0, 40.0, 80.0}) {
        const auto r = quadrature_overlap(a, b, w);
        const double err = std::abs(r.tail_corrected - exact);
        CHECK(err < 1e-3);
        CHECK(std::abs(r.value - exact) <= r.truncation_estimate + 1e-6);
        last = err;
    }
    CHECK(last < 1e-6);

    const auto zero = quadrature_overlap(a, b, 0.0);
    CHECK(zero.value == cd(0.0));
    CHECK(zero.evaluations == 0);
    CHECK_THROWS_AS(quadrature_overlap(a, b, -1.0), InvalidArgument);
}

TEST_CASE("quadrature on random draws") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto p = random_pair(rng);
        if (std::abs(p.a.mu - p.b.mu) < 0.2) continue;
        const auto exact = overlap_closed_form(p.a, p.b);
        const auto r = quadrature_overlap(p.a, p.b, 40.0);
        CHECK(std::abs(r.tail_corrected - exact) < 1e-3);
    }
}

TEST_CASE("massless rotated quadratures") {
    const auto pq = massless_xtheta_check(kPi / 2, 0.0, 0.4, -1.1);
    CHECK(pq.holds);
    CHECK(pq.expected == doctest::Approx(1 / std::sqrt(2 * kPi)));
    CHECK(pq.computed == doctest::Approx(1 / std::sqrt(2 * kPi)).epsilon(1e-12));
    CHECK(massless_xtheta_check(3 * kPi / 4, kPi / 4, 0.0, 0.0).holds);
    CHECK(massless_xtheta_check(3 * kPi / 4, kPi / 4, 0.0, 0.0).expected == doctest::Approx(1 / std::sqrt(2 * kPi)));

    const auto near = massless_xtheta_check(0.7 + 1e-6, 0.7, 0.2, 0.1);
    CHECK(near.holds);
    CHECK(near.expected > 100.0);
    CHECK_THROWS_AS(massless_xtheta_check(0.3, 0.3 + kPi, 0, 0), ParallelQuadratures);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> th(0.05, kPi - 0.05), k(-3, 3);
    for (int i = 0; i < 100; ++i) CHECK(massless_xtheta_check(th(rng), th(rng), k(rng), k(rng)).holds);
}
