#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qwalk/spectra.hpp"

namespace qwalk {

/// entries(i, j) = |<b_i | a_j>|: rows follow basis B (primed), columns basis A.
struct OverlapMatrix {
    std::int64_t d = 0;
    std::int64_t q = 0;
    std::int64_t q_prime = 0;
    std::vector<EigenLabel> row_labels;
    std::vector<EigenLabel> col_labels;
    Eigen::MatrixXd entries;

    double max_squared() const;
    /// Largest deviation of any row or column sum of squares from 1.
    double stochastic_defect() const;
};

OverlapMatrix overlap_matrix(std::span<const EigenPair> basis_a, std::span<const EigenPair> basis_b);

inline constexpr double kBoundTolerance = 1e-9;
inline constexpr std::size_t kViolationCap = 100;

struct Violation {
    EigenLabel label;       // from basis q
    EigenLabel label_prime; // from basis q'
    double overlap_sq = 0.0;
};

struct ComplementarityReport {
    std::int64_t d = 0;
    std::int64_t q = 0;
    std::int64_t q_prime = 0;
    CoinParams coin;
    std::optional<std::uint64_t> coin_seed;
    BasisSource source_q = BasisSource::Analytic;
    BasisSource source_q_prime = BasisSource::Analytic;
    double max_overlap = 0.0;    // max |<psi'|psi>|
    double max_overlap_sq = 0.0;
    double bound = 0.0;          // 1/sqrt(d)
    bool bound_satisfied = false; // max_overlap_sq <= 1/d + kBoundTolerance
    bool amub = false;            // bound holds but overlaps are not all equal
    std::size_t violation_count = 0;
    std::vector<Violation> violations; // first kViolationCap, in row-major grid order
};

ComplementarityReport summarize(const OverlapMatrix& overlaps, const CoinParams& coin);

/// Builds both eigenbases (closed form when available, dense oracle otherwise) and
/// compares every squared overlap with 1/d. Requires q != q' (mod d).
ComplementarityReport check_overlap_bound(std::int64_t d, std::int64_t q, std::int64_t q_prime, const CoinParams& coin);

struct MubCheck {
    bool holds = false;
    double max_deviation = 0.0;       // same-tau: | |<.|.>|^2 - 1/d |
    double max_cross_overlap = 0.0;   // cross-tau: |<.|.>|
};

/// theta = 0 bases of q and q' for prime d: same-tau squared overlaps are 1/d, cross-tau 0.
MubCheck mub_check_theta0(std::int64_t d, std::int64_t q, std::int64_t q_prime);

/// Overlap <psi'_{m',tau'}^{(q')} | psi_{m,tau}^{(q)}> from the companion-index sum
/// N'N (1 + beta'^* beta) (1/d) sum_j e^{i(chi_{m,j} - chi_{m',j~})}, without forming vectors.
/// Requires prime d, q, q' != 0 and sin(theta) != 0.
struct InnerOverlap {
    cd value;
    cd phase_sum;              // sum_j e^{i(chi - chi~)}
    double amplitude_factor = 0.0; // N'N (1 + |beta'||beta|)
};
InnerOverlap companion_inner_overlap(std::int64_t d, const EigenLabel& label, const EigenLabel& label_prime,
                                    const CoinParams& coin);

/// Gauss-sum coefficients (x, y) with chi_{m,j} - chi_{m',j~} = eps (x j^2 + y j) mod 2pi, odd prime d.
struct GaussCoefficients {
    std::int64_t x = 0;
    std::int64_t y = 0;
};
GaussCoefficients gauss_coefficients(std::int64_t d, std::int64_t q, std::int64_t m, std::int64_t q_prime,
                                     std::int64_t m_prime);

enum class PairSelection {
    Labelled, // q, q' in {0} U units mod d: both bases closed form
    All,      // every ordered pair q != q'
    Explicit
};

struct SweepCoin {
    CoinParams coin;
    std::optional<std::uint64_t> seed;
};

struct SweepRow {
    std::int64_t d = 0;
    std::size_t coin_index = 0;
    std::int64_t q = 0;
    std::int64_t q_prime = 0;
    std::optional<ComplementarityReport> report;
    std::string error; // set when the cell failed
};

struct SweepOptions {
    PairSelection selection = PairSelection::Labelled;
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs; // for Explicit
    unsigned threads = 0;                                     // 0: hardware concurrency
};

/// One row per (d, coin, q, q') cell, ordered lexicographically; repeated d values collapse.
/// Cells run on a worker pool.
std::vector<SweepRow> sweep(std::span<const std::int64_t> d_values, std::span<const SweepCoin> coins,
                            const SweepOptions& options);

/// Coin with theta uniform in [0, pi/2] and the other angles uniform in [0, 2pi).
CoinParams random_coin(std::uint64_t seed);

} // namespace qwalk
