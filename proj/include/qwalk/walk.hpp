#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qwalk/phase.hpp"

namespace qwalk {

/// Coin angles: C = e^{i delta} [[c, s], [-s*, c*]], c = cos(theta) e^{i gamma}, s = sin(theta) e^{i sigma}.
struct CoinParams {
    double theta = 0.0; // [0, pi/2]
    double gamma = 0.0;
    double sigma = 0.0;
    double delta = 0.0;

    static CoinParams hadamard() noexcept; // theta = pi/4, others 0
    static CoinParams identity() noexcept;

    // Throws InvalidArgument if theta is outside [0, pi/2] or any angle is not finite.
    void validate() const;

    friend bool operator==(const CoinParams&, const CoinParams&) = default;
};

class WalkConfig {
public:
    /// q is reduced mod d. Requires d >= 2.
    WalkConfig(std::int64_t d, std::int64_t q, CoinParams coin);

    std::int64_t d() const noexcept { return d_; }
    std::int64_t q() const noexcept { return q_; }
    const CoinParams& coin() const noexcept { return coin_; }
    double epsilon() const noexcept; // 2 pi / d
    double phi() const noexcept;     // epsilon * q

private:
    std::int64_t d_;
    std::int64_t q_;
    CoinParams coin_;
};

enum class CoinState : int { Plus = 0, Minus = 1 };

/// 2d amplitudes, position-major: index = 2x + (0 for |+>, 1 for |->).
class PureState {
public:
    explicit PureState(std::int64_t d);
    PureState(std::int64_t d, std::vector<cd> amplitudes);

    static PureState basis(std::int64_t d, std::int64_t x, CoinState c);

    std::int64_t d() const noexcept { return d_; }
    std::size_t dim() const noexcept { return amps_.size(); }

    cd& at(std::int64_t x, CoinState c) { return amps_[index(x, c)]; }
    const cd& at(std::int64_t x, CoinState c) const { return amps_[index(x, c)]; }

    std::span<cd> amplitudes() noexcept { return amps_; }
    std::span<const cd> amplitudes() const noexcept { return amps_; }

    double norm() const noexcept;
    void normalize();

    Eigen::Map<const Eigen::VectorXcd> as_vector() const;

    static std::size_t index(std::int64_t x, CoinState c) noexcept {
        return static_cast<std::size_t>(2 * x + static_cast<int>(c));
    }

private:
    std::int64_t d_;
    std::vector<cd> amps_;
};

Eigen::Matrix2cd coin_matrix(const CoinParams& coin);

// F: (x,+) *= e^{i phi x}, (x,-) *= e^{-i phi x}.
PureState apply_phase(const PureState& state, const WalkConfig& config);
PureState apply_coin(const PureState& state, const CoinParams& coin);
// S: (x,+) -> (x+1,+), (x,-) -> (x-1,-), cyclic.
PureState apply_shift(const PureState& state);
/// One application of U = S (1 x C) F.
PureState step(const PureState& state, const WalkConfig& config);

/// Repeated evolution on a fixed cycle with precomputed coin and phase tables.
/// Mutates the state it owns; the q value may change from step to step.
class Stepper {
public:
    Stepper(std::int64_t d, const CoinParams& coin);

    void step(PureState& state, std::int64_t q);

private:
    std::int64_t d_;
    Eigen::Matrix2cd coin_;
    RootTable roots_;
    std::vector<cd> scratch_;
};

struct QSegment {
    std::size_t begin = 0; // first application index (0-based)
    std::size_t end = 0;   // one past the last
    std::int64_t q = 0;
};

/// Piecewise-constant q over application indices [0, T).
class QSchedule {
public:
    QSchedule() = default;

    static QSchedule constant(std::int64_t q, std::size_t steps);

    QSchedule& append(std::size_t length, std::int64_t q);

    const std::vector<QSegment>& segments() const noexcept { return segments_; }
    std::size_t length() const noexcept { return segments_.empty() ? 0 : segments_.back().end; }

    // Throws ScheduleGap unless the segments cover [0, steps).
    void validate(std::size_t steps) const;

    /// q of application t, reduced mod d.
    std::int64_t q_at(std::size_t t, std::int64_t d) const;

private:
    std::vector<QSegment> segments_;
};

enum class SwitchScenario { Constant, Left, Middle, Right };

/// Steps are numbered 1..steps. Steps before switch_step use q=0. Left: q=1 from
/// switch_step on. Middle: q=1 at switch_step only. Right: q=t at step t >= switch_step.
QSchedule switch_schedule(SwitchScenario scenario, std::size_t steps, std::size_t switch_step);

struct StepRecord {
    std::size_t step = 0; // applications performed so far
    std::int64_t q = 0;   // q of the last application (0 for the initial record)
    std::vector<double> distribution;
};

struct Evolution {
    PureState final_state;
    std::vector<StepRecord> records;
};

/// Applies the scheduled walk `steps` times. record_every = 0 disables recording;
/// otherwise the initial state and every record_every-th step (and the last) are recorded.
Evolution evolve_schedule(const PureState& initial, const CoinParams& coin, const QSchedule& schedule,
                          std::size_t steps, std::size_t record_every = 1);

/// (1/sqrt d) e^{i k eps x}, x in [0, d).
std::vector<cd> momentum_state(std::int64_t k, std::int64_t d);

/// (1/sqrt 2) |k=0> (x) (|+> + i|->).
PureState uniform_initial_state(std::int64_t d);

std::vector<double> position_distribution(const PureState& state);

/// (1/2) sum_x |p(x) - 1/d|.
double tv_from_uniform(std::span<const double> distribution);

/// Euclidean norm of a - b.
double distance(const PureState& a, const PureState& b);

} // namespace qwalk
