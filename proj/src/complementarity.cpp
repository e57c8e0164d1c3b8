#include "qwalk/complementarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <tuple>

#include "qwalk/errors.hpp"
#include "qwalk/numtheory.hpp"

namespace qwalk {

namespace {

Eigen::MatrixXcd stack(std::span<const EigenPair> basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    const Eigen::Index dim = n == 0 ? 0 : basis.front().vector.size();
    Eigen::MatrixXcd m(dim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (basis[static_cast<std::size_t>(i)].vector.size() != dim)
            throw DimensionMismatch("basis vectors have inconsistent lengths");
        m.col(i) = basis[static_cast<std::size_t>(i)].vector;
    }
    return m;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
}

std::int64_t reduce(std::int64_t v, std::int64_t d) {
    v %= d;
    return v < 0 ? v + d : v;
}

} // namespace

double OverlapMatrix::max_squared() const {
    if (entries.size() == 0) return 0.0;
    return entries.cwiseAbs2().maxCoeff();
}

double OverlapMatrix::stochastic_defect() const {
    if (entries.size() == 0) return 0.0;
    const Eigen::MatrixXd sq = entries.cwiseAbs2();
    const double rows = (sq.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double cols = (sq.colwise().sum().array() - 1.0).abs().maxCoeff();
    return std::max(rows, cols);
}

OverlapMatrix overlap_matrix(std::span<const EigenPair> basis_a, std::span<const EigenPair> basis_b) {
    if (basis_a.empty() || basis_a.size() != basis_b.size())
        throw DimensionMismatch("overlap_matrix needs two non-empty bases of equal size");
    const Eigen::MatrixXcd a = stack(basis_a);
    const Eigen::MatrixXcd b = stack(basis_b);
    if (a.rows() != b.rows()) throw DimensionMismatch("bases live in spaces of different dimension");
    if (a.rows() != a.cols()) throw DimensionMismatch("basis is not complete");

    OverlapMatrix out;
    out.d = a.rows() / 2;
    out.q = basis_a.front().label.q;
    out.q_prime = basis_b.front().label.q;
    for (const auto& p : basis_a) out.col_labels.push_back(p.label);
    for (const auto& p : basis_b) out.row_labels.push_back(p.label);
    out.entries = (b.adjoint() * a).cwiseAbs();
    return out;
}

ComplementarityReport summarize(const OverlapMatrix& overlaps, const CoinParams& coin) {
    ComplementarityReport r;
    r.d = overlaps.d;
    r.q = overlaps.q;
    r.q_prime = overlaps.q_prime;
    r.coin = coin;
    r.bound = 1.0 / std::sqrt(static_cast<double>(overlaps.d));
    const double limit = 1.0 / static_cast<double>(overlaps.d) + kBoundTolerance;
    const double mub_level = 1.0 / static_cast<double>(2 * overlaps.d);
    bool all_mub = true;
    for (Eigen::Index i = 0; i < overlaps.entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < overlaps.entries.cols(); ++j) {
            const double sq = overlaps.entries(i, j) * overlaps.entries(i, j);
            r.max_overlap_sq = std::max(r.max_overlap_sq, sq);
            if (std::abs(sq - mub_level) > kBoundTolerance) all_mub = false;
            if (sq > limit) {
                ++r.violation_count;
                if (r.violations.size() < kViolationCap)
                    r.violations.push_back({overlaps.col_labels[static_cast<std::size_t>(j)],
                                            overlaps.row_labels[static_cast<std::size_t>(i)], sq});
            }
        }
    }
    r.max_overlap = std::sqrt(r.max_overlap_sq);
    r.bound_satisfied = r.violation_count == 0;
    r.amub = r.bound_satisfied && !all_mub;
    return r;
}

ComplementarityReport check_overlap_bound(std::int64_t d, std::int64_t q, std::int64_t q_prime, const CoinParams& coin) {
    if (d < 2) throw InvalidArgument("cycle size d must be >= 2");
    if (reduce(q, d) == reduce(q_prime, d)) throw InvalidArgument("check_overlap_bound needs q != q' (mod d)");
    const Eigenbasis a = eigenbasis(q, coin, d);
    const Eigenbasis b = eigenbasis(q_prime, coin, d);
    ComplementarityReport r = summarize(overlap_matrix(a.pairs, b.pairs), coin);
    r.source_q = a.source;
    r.source_q_prime = b.source;
    return r;
}

MubCheck mub_check_theta0(std::int64_t d, std::int64_t q, std::int64_t q_prime) {
    if (d < 2 || !numtheory::is_prime(static_cast<std::uint64_t>(d)))
        throw UnsupportedRegime("exact MUB relation is only established for prime d, got " + std::to_string(d));
    if (reduce(q, d) == reduce(q_prime, d)) throw InvalidArgument("mub_check_theta0 needs q != q' (mod d)");
    const CoinParams flat = CoinParams::identity();
    const auto a = full_eigenbasis(q, flat, d);
    const auto b = full_eigenbasis(q_prime, flat, d);
    const OverlapMatrix o = overlap_matrix(a, b);
    MubCheck out;
    const double target = 1.0 / static_cast<double>(d);
    for (Eigen::Index i = 0; i < o.entries.rows(); ++i) {
        for (Eigen::Index j = 0; j < o.entries.cols(); ++j) {
            const double v = o.entries(i, j);
            if (o.row_labels[static_cast<std::size_t>(i)].tau == o.col_labels[static_cast<std::size_t>(j)].tau)
                out.max_deviation = std::max(out.max_deviation, std::abs(v * v - target));
            else
                out.max_cross_overlap = std::max(out.max_cross_overlap, v);
        }
    }
    out.holds = out.max_deviation <= 1e-10 && out.max_cross_overlap <= 1e-12;
    return out;
}

InnerOverlap companion_inner_overlap(std::int64_t d, const EigenLabel& label, const EigenLabel& label_prime,
                                    const CoinParams& coin) {
    if (d < 2 || !numtheory::is_prime(static_cast<std::uint64_t>(d)))
        throw UnsupportedRegime("companion-index overlap requires prime d, got " + std::to_string(d));
    const std::int64_t q = reduce(label.q, d);
    const std::int64_t qp = reduce(label_prime.q, d);
    if (q == 0 || qp == 0) throw InvalidArgument("companion_inner_overlap needs q, q' != 0");
    if (q == qp) throw InvalidArgument("companion_inner_overlap needs q != q'");

    const auto sc = spinor_coefficients({q, label.m, label.tau}, coin, d);
    const auto scp = spinor_coefficients({qp, label_prime.m, label_prime.tau}, coin, d);

    const RootTable half_roots(2 * d);
    const numtheory::Residue q_res(q, d), qp_res(qp, d);
    cd phase_sum{0.0, 0.0};
    for (std::int64_t j = 0; j < d; ++j) {
        const std::int64_t jt = numtheory::companion_index(numtheory::Residue(j, d), q_res, qp_res).value();
        const std::int64_t n =
            ladder_phase_index(q, label.m, j, d) - ladder_phase_index(qp, label_prime.m, jt, d);
        phase_sum += half_roots.at(n);
    }
    InnerOverlap out;
    out.phase_sum = phase_sum;
    out.value = scp.norm * sc.norm * (1.0 + std::conj(scp.beta) * sc.beta) * phase_sum / static_cast<double>(d);
    out.amplitude_factor = scp.norm * sc.norm * (1.0 + std::abs(scp.beta) * std::abs(sc.beta));
    return out;
}

GaussCoefficients gauss_coefficients(std::int64_t d, std::int64_t q, std::int64_t m, std::int64_t q_prime,
                                     std::int64_t m_prime) {
    if (d < 3 || !numtheory::is_prime(static_cast<std::uint64_t>(d)))
        throw UnsupportedRegime("Gauss-sum reduction needs an odd prime d, got " + std::to_string(d));
    using numtheory::Residue;
    const Residue ratio = numtheory::companion_index(Residue(1, d), Residue(q, d), Residue(q_prime, d)); // Q
    const Residue half = numtheory::mod_inverse(Residue(2, d));
    const std::int64_t big_q = ratio.value();
    const auto x = static_cast<std::int64_t>(static_cast<__int128>(half.value()) * reduce(big_q - 1, d) % d *
                                             reduce(q, d) % d);
    const std::int64_t y = reduce(m - static_cast<std::int64_t>(static_cast<__int128>(m_prime) * big_q % d), d);
    return {x, y};
}

std::vector<SweepRow> sweep(std::span<const std::int64_t> d_values, std::span<const SweepCoin> coins,
                            const SweepOptions& options) {
    std::vector<std::int64_t> ds(d_values.begin(), d_values.end());
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());

    std::vector<SweepRow> rows;
    for (const std::int64_t d : ds) {
        if (d < 2) {
            SweepRow bad;
            bad.d = d;
            bad.error = "cycle size d must be >= 2";
            rows.push_back(std::move(bad));
            continue;
        }
        std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
        if (options.selection == PairSelection::Explicit) {
            for (auto [q, qp] : options.pairs) pairs.emplace_back(reduce(q, d), reduce(qp, d));
        } else {
            std::vector<std::int64_t> qs;
            for (std::int64_t q = 0; q < d; ++q)
                if (options.selection == PairSelection::All || q == 0 || numtheory::gcd(q, d) == 1) qs.push_back(q);
            for (std::int64_t q : qs)
                for (std::int64_t qp : qs)
                    if (q != qp) pairs.emplace_back(q, qp);
        }

        for (std::size_t ci = 0; ci < coins.size(); ++ci) {
            const CoinParams& coin = coins[ci].coin;
            // One basis per distinct q, shared by all cells of this (d, coin).
            std::vector<std::int64_t> needed;
            for (auto [q, qp] : pairs) {
                needed.push_back(q);
                needed.push_back(qp);
            }
            std::sort(needed.begin(), needed.end());
            needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
            std::vector<std::optional<Eigenbasis>> bases(needed.size());
            std::vector<std::string> basis_errors(needed.size());
            parallel_for(needed.size(), options.threads, [&](std::size_t i) {
                try {
                    bases[i] = eigenbasis(needed[i], coin, d);
                } catch (const std::exception& e) {
                    basis_errors[i] = e.what();
                }
            });
            auto slot = [&](std::int64_t q) {
                return static_cast<std::size_t>(std::lower_bound(needed.begin(), needed.end(), q) - needed.begin());
            };

            std::vector<SweepRow> cells(pairs.size());
            parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
                auto [q, qp] = pairs[i];
                SweepRow& row = cells[i];
                row.d = d;
                row.coin_index = ci;
                row.q = q;
                row.q_prime = qp;
                try {
                    if (q == qp) throw InvalidArgument("q == q'");
                    const auto& a = bases[slot(q)];
                    const auto& b = bases[slot(qp)];
                    if (!a) throw Error(basis_errors[slot(q)]);
                    if (!b) throw Error(basis_errors[slot(qp)]);
                    ComplementarityReport r = summarize(overlap_matrix(a->pairs, b->pairs), coin);
                    r.coin_seed = coins[ci].seed;
                    r.source_q = a->source;
                    r.source_q_prime = b->source;
                    row.report = std::move(r);
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            });
            std::sort(cells.begin(), cells.end(), [](const SweepRow& x, const SweepRow& y) {
                return std::tie(x.q, x.q_prime) < std::tie(y.q, y.q_prime);
            });
            for (auto& c : cells) rows.push_back(std::move(c));
        }
    }
    return rows;
}

CoinParams random_coin(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Draw raw 53-bit fractions so the coin does not depend on the library's distribution code.
    auto unit = [&] { return static_cast<double>(rng() >> 11U) * 0x1.0p-53; };
    CoinParams c;
    c.theta = unit() * std::numbers::pi / 2.0;
    c.gamma = unit() * 2.0 * std::numbers::pi;
    c.sigma = unit() * 2.0 * std::numbers::pi;
    c.delta = unit() * 2.0 * std::numbers::pi;
    return c;
}

} // namespace qwalk
