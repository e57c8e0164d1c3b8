#include "qwalk/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"
#include "qwalk/numtheory.hpp"

namespace qwalk {

using std::numbers::pi;

namespace {

std::int64_t reduce(std::int64_t v, std::int64_t d) {
    v %= d;
    return v < 0 ? v + d : v;
}

void check_label(const EigenLabel& label, std::int64_t d) {
    if (d < 2) throw InvalidArgument("cycle size d must be >= 2");
    if (label.m < 0 || label.m >= d) throw InvalidArgument("label m must lie in [0, d)");
    if (label.tau != 1 && label.tau != -1) throw InvalidArgument("label tau must be +1 or -1");
}

// Position-basis vector from per-momentum spinor coefficients:
// v[2x+b] = (1/sqrt d) sum_k coeffs[b][k] e^{i k eps x}.
Eigen::VectorXcd from_momentum(const std::vector<cd>& upper, const std::vector<cd>& lower, std::int64_t d) {
    const RootTable roots(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * d);
    for (std::int64_t k = 0; k < d; ++k) {
        const cd a = upper[static_cast<std::size_t>(k)];
        const cd b = lower[static_cast<std::size_t>(k)];
        if (a == cd{} && b == cd{}) continue;
        for (std::int64_t x = 0; x < d; ++x) {
            const cd w = scale * roots[k * x % d];
            v(2 * x) += a * w;
            v(2 * x + 1) += b * w;
        }
    }
    return v;
}

cd analytic_value(const EigenLabel& label, const CoinParams& coin, std::int64_t d, SpectralBranch branch) {
    const double eps = 2.0 * pi / static_cast<double>(d);
    const double q = static_cast<double>(label.q);
    const double m = static_cast<double>(label.m);
    const double tau = label.tau;
    switch (branch) {
    case SpectralBranch::ZeroPhase:
    case SpectralBranch::Coprime:
        return std::polar(1.0, coin.delta + q * eps / 2.0 + tau * xi_angle(label.m, label.q, coin, d));
    case SpectralBranch::Theta0:
        return std::polar(1.0, coin.delta + tau * coin.gamma - (tau * q * eps / 2.0 + m * eps + q * pi));
    case SpectralBranch::Theta0ZeroPhase:
        return std::polar(1.0, coin.delta + tau * coin.gamma - tau * m * eps);
    }
    return {};
}

} // namespace

const char* to_string(BasisSource source) noexcept {
    return source == BasisSource::Analytic ? "analytic" : "numerical";
}

std::optional<SpectralBranch> analytic_branch(std::int64_t q, const CoinParams& coin, std::int64_t d) {
    if (d < 2) throw InvalidArgument("cycle size d must be >= 2");
    q = reduce(q, d);
    const bool flat_coin = std::sin(coin.theta) == 0.0;
    if (q == 0) return flat_coin ? SpectralBranch::Theta0ZeroPhase : SpectralBranch::ZeroPhase;
    if (numtheory::gcd(q, d) != 1) return std::nullopt;
    return flat_coin ? SpectralBranch::Theta0 : SpectralBranch::Coprime;
}

double xi_angle(std::int64_t m, std::int64_t q, const CoinParams& coin, std::int64_t d) {
    const double eps = 2.0 * pi / static_cast<double>(d);
    const double sign = (reduce(q, d) % 2 == 0) ? 1.0 : -1.0;
    const double c = sign * std::cos(coin.theta) * std::cos(static_cast<double>(m + q) * eps - coin.gamma);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<LabelledEigenvalue> analytic_eigenvalues(std::int64_t q, const CoinParams& coin, std::int64_t d) {
    const auto branch = analytic_branch(q, coin, d);
    if (!branch)
        throw UnsupportedRegime("no closed-form spectrum for d=" + std::to_string(d) + ", q=" + std::to_string(q) +
                                " (gcd(q,d) > 1); use the numerical oracle");
    q = reduce(q, d);
    std::vector<LabelledEigenvalue> out;
    out.reserve(static_cast<std::size_t>(2 * d));
    for (std::int64_t m = 0; m < d; ++m) {
        for (int tau : {1, -1}) {
            const EigenLabel label{q, m, tau};
            out.push_back({label, analytic_value(label, coin, d, *branch)});
        }
    }
    return out;
}

SpinorCoefficients spinor_coefficients(const EigenLabel& label, const CoinParams& coin, std::int64_t d) {
    check_label(label, d);
    const double s_abs = std::sin(coin.theta);
    if (s_abs == 0.0) throw DegenerateBranch("spinor ratio beta is undefined for sin(theta) = 0");
    const double eps = 2.0 * pi / static_cast<double>(d);
    const std::int64_t q = reduce(label.q, d);
    const double xi = xi_angle(label.m, q, coin, d);
    const cd c = std::polar(std::cos(coin.theta), coin.gamma);
    const cd s = std::polar(s_abs, coin.sigma);
    const cd rotor = std::polar(1.0, label.tau * xi);
    cd beta;
    if (q == 0) {
        beta = (rotor * std::polar(1.0, static_cast<double>(label.m) * eps) - c) / s;
    } else {
        const double sign = (q % 2 == 0) ? 1.0 : -1.0;
        const double theta_mq = static_cast<double>(label.m + q) * eps;
        beta = (sign * rotor * std::polar(1.0, -theta_mq) - c * std::polar(1.0, -2.0 * theta_mq)) / s;
    }
    return {beta, 1.0 / std::sqrt(1.0 + std::norm(beta))};
}

std::int64_t ladder_phase_index(std::int64_t q, std::int64_t m, std::int64_t j, std::int64_t d) {
    // -(q eps/2) j^2 + (m eps + q pi) j = (pi/d) (q j (d - j) + 2 m j)
    const std::int64_t two_d = 2 * d;
    const auto n = (static_cast<__int128>(q) * j % two_d * (d - j) + static_cast<__int128>(2) * m * j) % two_d;
    return reduce(static_cast<std::int64_t>(n), two_d);
}

EigenPair analytic_eigenvector(const EigenLabel& label_in, const CoinParams& coin, std::int64_t d) {
    check_label(label_in, d);
    EigenLabel label = label_in;
    label.q = reduce(label.q, d);
    const auto branch = analytic_branch(label.q, coin, d);
    if (!branch)
        throw UnsupportedRegime("no closed-form eigenvector for d=" + std::to_string(d) +
                                ", q=" + std::to_string(label.q));

    const auto du = static_cast<std::size_t>(d);
    std::vector<cd> upper(du), lower(du);
    const std::int64_t q = label.q;

    switch (*branch) {
    case SpectralBranch::ZeroPhase: {
        const auto sc = spinor_coefficients(label, coin, d);
        upper[static_cast<std::size_t>(label.m)] = sc.norm;
        lower[static_cast<std::size_t>(label.m)] = sc.norm * sc.beta;
        break;
    }
    case SpectralBranch::Theta0ZeroPhase:
        (label.tau == 1 ? upper : lower)[static_cast<std::size_t>(label.m)] = 1.0;
        break;
    case SpectralBranch::Coprime: {
        const auto sc = spinor_coefficients(label, coin, d);
        const RootTable half_roots(2 * d);
        const RootTable roots(d);
        const double scale = sc.norm / std::sqrt(static_cast<double>(d));
        for (std::int64_t j = 0; j < d; ++j) {
            const auto k = static_cast<std::size_t>(q * j % d);
            const cd amp = scale * half_roots[ladder_phase_index(q, label.m, j, d)];
            upper[k] = amp;
            lower[k] = amp * sc.beta * roots[2 * q * j % d];
        }
        break;
    }
    case SpectralBranch::Theta0: {
        // The lower sector carries the same quadratic phase with linear index q - m.
        const std::int64_t linear = label.tau == 1 ? label.m : reduce(q - label.m, d);
        const RootTable half_roots(2 * d);
        const double scale = 1.0 / std::sqrt(static_cast<double>(d));
        auto& sector = label.tau == 1 ? upper : lower;
        for (std::int64_t j = 0; j < d; ++j)
            sector[static_cast<std::size_t>(q * j % d)] = scale * half_roots[ladder_phase_index(q, linear, j, d)];
        break;
    }
    }
    return {label, analytic_value(label, coin, d, *branch), from_momentum(upper, lower, d)};
}

std::vector<EigenPair> full_eigenbasis(std::int64_t q, const CoinParams& coin, std::int64_t d) {
    if (!analytic_branch(q, coin, d))
        throw UnsupportedRegime("no closed-form eigenbasis for d=" + std::to_string(d) + ", q=" + std::to_string(q));
    std::vector<EigenPair> out;
    out.reserve(static_cast<std::size_t>(2 * d));
    for (std::int64_t m = 0; m < d; ++m)
        for (int tau : {1, -1}) out.push_back(analytic_eigenvector({q, m, tau}, coin, d));
    return out;
}

Eigen::MatrixXcd build_unitary(const WalkConfig& config, std::int64_t cap) {
    const std::int64_t d = config.d();
    if (d > cap)
        throw DimensionCap("dense unitary requested for d=" + std::to_string(d) + " above cap " + std::to_string(cap));
    const Eigen::Index n = 2 * d;
    Eigen::MatrixXcd u(n, n);
    Stepper stepper(d, config.coin());
    for (Eigen::Index col = 0; col < n; ++col) {
        PureState e(d);
        e.amplitudes()[static_cast<std::size_t>(col)] = 1.0;
        stepper.step(e, config.q());
        u.col(col) = e.as_vector();
    }
    return u;
}

std::vector<EigenPair> numerical_eigenbasis(const Eigen::MatrixXcd& unitary, std::int64_t q, double cluster_tol) {
    const Eigen::Index n = unitary.rows();
    if (n != unitary.cols() || n == 0) throw DimensionMismatch("numerical_eigenbasis needs a non-empty square matrix");
    const double defect =
        (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > 1e-8) throw NonUnitaryInput("matrix is not unitary (defect " + std::to_string(defect) + ")");

    // For a normal matrix the Schur form is diagonal and the Schur vectors are eigenvectors.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(unitary);
    if (schur.info() != Eigen::Success) throw Error("complex Schur decomposition did not converge");
    const auto& t = schur.matrixT();
    const auto& z = schur.matrixU();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return std::arg(t(a, a)) < std::arg(t(b, b)); });

    std::vector<EigenPair> pairs;
    pairs.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const Eigen::Index src = order[i];
        const EigenLabel label{q, static_cast<std::int64_t>(i / 2), (i % 2 == 0) ? 1 : -1};
        pairs.push_back({label, t(src, src), z.col(src)});
    }

    for (const auto& cluster : eigenvalue_clusters(pairs, cluster_tol)) {
        if (cluster.size() < 2) continue;
        for (std::size_t a = 0; a < cluster.size(); ++a) {
            Eigen::VectorXcd& v = pairs[cluster[a]].vector;
            for (std::size_t b = 0; b < a; ++b) {
                const Eigen::VectorXcd& u = pairs[cluster[b]].vector;
                v -= u.dot(v) * u;
            }
            v.normalize();
        }
    }
    return pairs;
}

double residual(const WalkConfig& config, const EigenPair& pair) {
    const std::int64_t d = config.d();
    if (pair.vector.size() != 2 * d) throw DimensionMismatch("eigenvector length does not match 2d");
    PureState v(d, std::vector<cd>(pair.vector.data(), pair.vector.data() + pair.vector.size()));
    const PureState uv = step(v, config);
    return (uv.as_vector() - pair.eigenvalue * pair.vector).norm();
}

Eigenbasis eigenbasis(std::int64_t q, const CoinParams& coin, std::int64_t d, std::int64_t dense_cap) {
    if (analytic_branch(q, coin, d)) return {BasisSource::Analytic, full_eigenbasis(q, coin, d)};
    const WalkConfig config(d, q, coin);
    return {BasisSource::Numerical, numerical_eigenbasis(build_unitary(config, dense_cap), config.q())};
}

std::vector<std::vector<std::size_t>> eigenvalue_clusters(std::span<const EigenPair> pairs, double tol) {
    const std::size_t n = pairs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::arg(pairs[a].eigenvalue) < std::arg(pairs[b].eigenvalue);
    });
    auto close = [&](std::size_t a, std::size_t b) {
        double gap = std::abs(std::arg(pairs[a].eigenvalue) - std::arg(pairs[b].eigenvalue));
        gap = std::min(gap, 2.0 * pi - gap);
        return gap <= tol;
    };
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) {
        if (!clusters.empty() && close(clusters.back().back(), order[i]))
            clusters.back().push_back(order[i]);
        else
            clusters.push_back({order[i]});
    }
    // Merge across the branch cut at angle pi.
    if (clusters.size() > 1 && close(clusters.back().back(), clusters.front().front())) {
        auto& first = clusters.front();
        first.insert(first.begin(), clusters.back().begin(), clusters.back().end());
        clusters.pop_back();
    }
    return clusters;
}

double spectrum_distance(std::vector<cd> a, std::vector<cd> b) {
    if (a.size() != b.size()) throw DimensionMismatch("spectra have different sizes");
    if (a.empty()) return 0.0;
    auto by_angle = [](const cd& x, const cd& y) { return std::arg(x) < std::arg(y); };
    std::sort(a.begin(), a.end(), by_angle);
    std::sort(b.begin(), b.end(), by_angle);
    const std::size_t n = a.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t shift = 0; shift < n; ++shift) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[(i + shift) % n]));
        best = std::min(best, worst);
    }
    return best;
}

} // namespace qwalk
