#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qwalk/complementarity.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/numtheory.hpp"

using namespace qwalk;

namespace {

// Direct inner product <b|a> over the full position-coin space.
cd inner(const EigenPair& b, const EigenPair& a) { return b.vector.dot(a.vector); }

} // namespace

TEST_CASE("overlap of a basis with itself is the identity") {
    const auto basis = full_eigenbasis(3, random_coin(1), 11);
    const auto om = overlap_matrix(basis, basis);
    CHECK((om.entries - Eigen::MatrixXd::Identity(22, 22)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(om.stochastic_defect() < 1e-9);
}

TEST_CASE("overlap matrix orientation and labels") {
    const auto a = full_eigenbasis(1, CoinParams::hadamard(), 7);
    const auto b = full_eigenbasis(2, CoinParams::hadamard(), 7);
    const auto om = overlap_matrix(a, b);
    CHECK(om.q == 1);
    CHECK(om.q_prime == 2);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(om.row_labels[i] == b[i].label);
        for (std::size_t j = 0; j < a.size(); ++j)
            CHECK(om.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                  doctest::Approx(std::abs(inner(b[i], a[j]))).epsilon(1e-12));
    }
    const auto c = full_eigenbasis(1, CoinParams::hadamard(), 5);
    CHECK_THROWS_AS(overlap_matrix(a, c), DimensionMismatch);
}

TEST_CASE("largest overlaps on 31 and 33 sites") {
    const auto r31 = check_overlap_bound(31, 1, 7, CoinParams::hadamard());
    CHECK(r31.bound_satisfied);
    CHECK(r31.max_overlap_sq <= 1.0 / 31 + 1e-10);
    CHECK(r31.violation_count == 0);
    CHECK(r31.amub);

    const auto r33 = check_overlap_bound(33, 1, 7, CoinParams::hadamard());
    CHECK_FALSE(r33.bound_satisfied);
    CHECK(r33.max_overlap_sq > 1.0 / 33 + 1e-9);
    CHECK(r33.violation_count > 0);
    CHECK(r33.violations.size() == std::min(r33.violation_count, kViolationCap));
}

TEST_CASE("bound on small primes, every ordered pair, random coins") {
    std::mt19937_64 rng(5);
    for (std::int64_t d : {3, 5, 7, 11, 13}) {
        for (int c = 0; c < 3; ++c) {
            const auto coin = c == 0 ? CoinParams::hadamard() : random_coin(rng());
            for (std::int64_t q = 0; q < d; ++q)
                for (std::int64_t qp = 0; qp < d; ++qp) {
                    if (q == qp) continue;
                    const auto r = check_overlap_bound(d, q, qp, coin);
                    REQUIRE(r.bound_satisfied);
                }
        }
    }
}

TEST_CASE("overlap matrices are doubly stochastic") {
    const auto coin = random_coin(12);
    for (std::int64_t d : {5, 12, 16, 31}) {
        for (std::int64_t q = 0; q < d; q += 3) {
            const auto a = eigenbasis(q, coin, d);
            const auto b = eigenbasis((q + 1) % d, coin, d);
            CHECK(overlap_matrix(a.pairs, b.pairs).stochastic_defect() < 1e-7);
        }
    }
}

TEST_CASE("summary fields") {
    OverlapMatrix om;
    om.d = 2;
    om.q = 0;
    om.q_prime = 1;
    om.row_labels = {{1, 0, 1}, {1, 0, -1}, {1, 1, 1}, {1, 1, -1}};
    om.col_labels = {{0, 0, 1}, {0, 0, -1}, {0, 1, 1}, {0, 1, -1}};
    om.entries = Eigen::MatrixXd::Constant(4, 4, 0.5); // exact MUB in dimension 4
    auto r = summarize(om, CoinParams::hadamard());
    CHECK(r.bound_satisfied);
    CHECK_FALSE(r.amub);
    CHECK(r.max_overlap_sq == doctest::Approx(0.25));
    CHECK(r.bound == doctest::Approx(std::sqrt(0.5)));

    om.entries.setZero();
    om.entries.topLeftCorner(2, 2).setConstant(std::sqrt(0.5));
    om.entries.bottomRightCorner(2, 2).setConstant(std::sqrt(0.5));
    r = summarize(om, CoinParams::hadamard());
    CHECK(r.bound_satisfied); // 1/2 sits on the 1/d bound
    CHECK(r.amub);

    om.entries.setIdentity();
    r = summarize(om, CoinParams::hadamard());
    CHECK_FALSE(r.bound_satisfied);
    CHECK(r.violation_count == 4);
    CHECK(r.violations.front().label == om.col_labels[0]);
    CHECK(r.violations.front().label_prime == om.row_labels[0]);
}

TEST_CASE("theta zero bases are mutually unbiased") {
    const auto r = mub_check_theta0(7, 1, 2);
    CHECK(r.holds);
    CHECK(r.max_deviation <= 1e-10);
    CHECK(r.max_cross_overlap <= 1e-12);
    for (std::int64_t q = 0; q < 5; ++q)
        for (std::int64_t qp = 0; qp < 5; ++qp)
            if (q != qp) CHECK(mub_check_theta0(5, q, qp).holds);
    CHECK_THROWS_AS(mub_check_theta0(9, 1, 2), UnsupportedRegime);
    CHECK_THROWS_AS(mub_check_theta0(7, 3, 3), InvalidArgument);
}

TEST_CASE("companion-index overlap equals the direct inner product") {
    const auto coin = CoinParams::hadamard();
    const auto a = analytic_eigenvector({1, 0, 1}, coin, 31);
    const auto b = analytic_eigenvector({7, 0, 1}, coin, 31);
    const auto io = companion_inner_overlap(31, a.label, b.label, coin);
    CHECK(std::abs(io.value - inner(b, a)) < 1e-9);

    std::mt19937_64 rng(9);
    for (std::int64_t d : {5, 7, 13}) {
        const auto c = random_coin(rng());
        for (std::int64_t q = 1; q < d; ++q)
            for (std::int64_t qp = 1; qp < d; ++qp) {
                if (q == qp) continue;
                const auto A = full_eigenbasis(q, c, d);
                const auto B = full_eigenbasis(qp, c, d);
                for (std::size_t i = 0; i < A.size(); i += 3)
                    for (std::size_t j = 0; j < B.size(); j += 2) {
                        const auto r = companion_inner_overlap(d, A[i].label, B[j].label, c);
                        REQUIRE(std::abs(r.value - inner(B[j], A[i])) < 1e-9);
                        REQUIRE(std::abs(std::norm(r.phase_sum) - static_cast<double>(d)) < 1e-8);
                        REQUIRE(r.amplitude_factor <= 1.0 + 1e-12);
                    }
            }
    }
}

TEST_CASE("gauss coefficients reproduce the phase difference") {
    const std::int64_t d = 11;
    for (std::int64_t q = 1; q < d; ++q)
        for (std::int64_t qp = 1; qp < d; ++qp) {
            if (q == qp) continue;
            for (std::int64_t m = 0; m < d; m += 2)
                for (std::int64_t mp = 0; mp < d; mp += 3) {
                    const auto g = gauss_coefficients(d, q, m, qp, mp);
                    CHECK(g.x % d != 0);
                    for (std::int64_t j = 0; j < d; ++j) {
                        const auto jt = numtheory::companion_index(numtheory::Residue(j, d), numtheory::Residue(q, d),
                                                                   numtheory::Residue(qp, d))
                                            .value();
                        // chi in units of pi/d; the difference must equal 2 (x j^2 + y j) mod 2d
                        const auto diff = ladder_phase_index(q, m, j, d) - ladder_phase_index(qp, mp, jt, d);
                        const auto rhs = 2 * ((g.x * j % d * j + g.y * j) % d);
                        REQUIRE(((diff - rhs) % (2 * d) + 2 * d) % (2 * d) == 0);
                    }
                }
        }
}

TEST_CASE("sweep ordering, determinism and composite extremes") {
    const std::vector<std::int64_t> ds{7, 5};
    const std::vector<SweepCoin> coins{{CoinParams::hadamard(), std::nullopt}, {random_coin(3), 3}};
    SweepOptions opts;
    opts.selection = PairSelection::All;
    opts.threads = 3;
    const auto rows = sweep(ds, coins, opts);
    CHECK(rows.size() == 2 * (5 * 4 + 7 * 6));
    CHECK(rows.front().d == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& p = rows[i - 1];
        const auto& c = rows[i];
        CHECK(std::tie(p.d, p.coin_index, p.q, p.q_prime) < std::tie(c.d, c.coin_index, c.q, c.q_prime));
    }
    opts.threads = 1;
    const auto serial = sweep(ds, coins, opts);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].report.has_value());
        CHECK(rows[i].report->max_overlap_sq == serial[i].report->max_overlap_sq);
        CHECK(rows[i].report->bound_satisfied);
    }

    CHECK(sweep({}, coins, opts).empty());

    SweepOptions pick;
    pick.selection = PairSelection::Explicit;
    pick.pairs = {{1, 7}};
    const std::vector<std::int64_t> d33{33};
    const auto bad = sweep(d33, coins, pick);
    REQUIRE(bad.size() == 2);
    CHECK_FALSE(bad[0].report->bound_satisfied);

    pick.pairs = {{2, 2}};
    const auto same = sweep(d33, coins, pick);
    CHECK_FALSE(same[0].report.has_value());
    CHECK_FALSE(same[0].error.empty());

    const std::vector<SweepCoin> h{{CoinParams::hadamard(), std::nullopt}};
    for (auto [d, target] : {std::pair<std::int64_t, double>{16, 0.5}, {18, 1.0 / 3}}) {
        const std::vector<std::int64_t> one{d};
        double best = 0;
        for (const auto& r : sweep(one, h, SweepOptions{})) best = std::max(best, r.report->max_overlap_sq);
        CHECK(std::abs(std::sqrt(best) - std::sqrt(target)) < 1e-6);
    }
}

TEST_CASE("random coins are reproducible and valid") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto a = random_coin(s);
        CHECK(a == random_coin(s));
        CHECK_NOTHROW(a.validate());
    }
    CHECK_FALSE(random_coin(1) == random_coin(2));
}
