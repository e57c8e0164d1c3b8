#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qwalk/walk.hpp"

namespace qwalk {

struct EigenLabel {
    std::int64_t q = 0;
    std::int64_t m = 0; // [0, d)
    int tau = 1;        // +1 or -1

    friend bool operator==(const EigenLabel&, const EigenLabel&) = default;
};

struct EigenPair {
    EigenLabel label;
    cd eigenvalue;
    Eigen::VectorXcd vector; // PureState layout
};

/// Closed-form families of eigenvectors of U.
enum class SpectralBranch {
    ZeroPhase,      // q = 0, sin(theta) != 0: |m> (x) (1, beta)
    Coprime,        // gcd(q, d) = 1, sin(theta) != 0: quadratic-phase ladder over |jq>
    Theta0,         // sin(theta) = 0, gcd(q, d) = 1: ladder with coin part |tau>
    Theta0ZeroPhase // sin(theta) = 0, q = 0: |m> (x) |tau>
};

enum class BasisSource { Analytic, Numerical };

const char* to_string(BasisSource source) noexcept;

/// nullopt when no closed form is available (q != 0 and gcd(q, d) > 1).
std::optional<SpectralBranch> analytic_branch(std::int64_t q, const CoinParams& coin, std::int64_t d);

/// arccos((-1)^q cos(theta) cos((m+q) eps - gamma)), in [0, pi].
double xi_angle(std::int64_t m, std::int64_t q, const CoinParams& coin, std::int64_t d);

struct LabelledEigenvalue {
    EigenLabel label;
    cd value;
};

/// Full labelled spectrum, canonical order. Throws UnsupportedRegime outside the closed-form branches.
std::vector<LabelledEigenvalue> analytic_eigenvalues(std::int64_t q, const CoinParams& coin, std::int64_t d);

/// Lower-to-upper spinor ratio beta and N = 1/sqrt(1 + |beta|^2) of the sin(theta) != 0 branches.
/// Throws DegenerateBranch when sin(theta) = 0.
struct SpinorCoefficients {
    cd beta;
    double norm = 1.0;
};
SpinorCoefficients spinor_coefficients(const EigenLabel& label, const CoinParams& coin, std::int64_t d);

/// Integer n in [0, 2d) with chi_{m,j} = pi n / d, where chi = -(q eps / 2) j^2 + (m eps + q pi) j.
std::int64_t ladder_phase_index(std::int64_t q, std::int64_t m, std::int64_t j, std::int64_t d);

EigenPair analytic_eigenvector(const EigenLabel& label, const CoinParams& coin, std::int64_t d);

/// 2d pairs sorted by (m ascending, tau = +1 first).
std::vector<EigenPair> full_eigenbasis(std::int64_t q, const CoinParams& coin, std::int64_t d);

inline constexpr std::int64_t kDefaultDenseCap = 4096;

/// Column j is step() applied to basis vector j. Throws DimensionCap when d > cap.
Eigen::MatrixXcd build_unitary(const WalkConfig& config, std::int64_t cap = kDefaultDenseCap);

/// Dense Schur-based eigendecomposition of a unitary matrix. Pairs are sorted by
/// eigenvalue angle in (-pi, pi]; labels are synthesized as m = i / 2, tau = +1 for
/// even i. Vectors are orthonormalized within clusters whose angles differ by <= cluster_tol.
/// Throws NonUnitaryInput if ||U^dagger U - I||_max > 1e-8.
std::vector<EigenPair> numerical_eigenbasis(const Eigen::MatrixXcd& unitary, std::int64_t q = 0,
                                            double cluster_tol = 1e-8);

/// ||U v - lambda v||_2 computed with step(), no dense matrix.
double residual(const WalkConfig& config, const EigenPair& pair);

struct Eigenbasis {
    BasisSource source = BasisSource::Analytic;
    std::vector<EigenPair> pairs;
};

/// Closed form when analytic_branch() allows it, dense oracle otherwise.
Eigenbasis eigenbasis(std::int64_t q, const CoinParams& coin, std::int64_t d,
                      std::int64_t dense_cap = kDefaultDenseCap);

/// Groups of indices whose eigenvalue angles agree within tol (cyclically).
std::vector<std::vector<std::size_t>> eigenvalue_clusters(std::span<const EigenPair> pairs, double tol = 1e-8);

/// Distance between two eigenvalue multisets: both are sorted by angle and the best
/// cyclic alignment of the max |a_i - b_i| is returned.
double spectrum_distance(std::vector<cd> a, std::vector<cd> b);

} // namespace qwalk
