#include "qwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

using std::numbers::pi;

RootTable::RootTable(std::int64_t n) : n_(n) {
    if (n < 1) throw InvalidArgument("root table size must be positive");
    roots_.reserve(static_cast<std::size_t>(n));
    const double eps = 2.0 * pi / static_cast<double>(n);
    for (std::int64_t k = 0; k < n; ++k) roots_.push_back(std::polar(1.0, eps * static_cast<double>(k)));
}

cd RootTable::at(std::int64_t k) const noexcept {
    k %= n_;
    if (k < 0) k += n_;
    return roots_[static_cast<std::size_t>(k)];
}

CoinParams CoinParams::hadamard() noexcept { return {pi / 4.0, 0.0, 0.0, 0.0}; }

CoinParams CoinParams::identity() noexcept { return {}; }

void CoinParams::validate() const {
    if (!std::isfinite(theta) || !std::isfinite(gamma) || !std::isfinite(sigma) || !std::isfinite(delta))
        throw InvalidArgument("coin angles must be finite");
    if (theta < 0.0 || theta > pi / 2.0 + 1e-15)
        throw InvalidArgument("coin theta must lie in [0, pi/2], got " + std::to_string(theta));
}

WalkConfig::WalkConfig(std::int64_t d, std::int64_t q, CoinParams coin) : d_(d), q_(0), coin_(coin) {
    if (d < 2) throw InvalidArgument("cycle size d must be >= 2, got " + std::to_string(d));
    coin_.validate();
    q_ = q % d;
    if (q_ < 0) q_ += d;
}

double WalkConfig::epsilon() const noexcept { return 2.0 * pi / static_cast<double>(d_); }

double WalkConfig::phi() const noexcept { return epsilon() * static_cast<double>(q_); }

PureState::PureState(std::int64_t d) : d_(d), amps_(static_cast<std::size_t>(2 * d)) {
    if (d < 1) throw InvalidArgument("state needs at least one position");
}

PureState::PureState(std::int64_t d, std::vector<cd> amplitudes) : d_(d), amps_(std::move(amplitudes)) {
    if (d < 1 || amps_.size() != static_cast<std::size_t>(2 * d))
        throw DimensionMismatch("expected " + std::to_string(2 * d) + " amplitudes, got " +
                                std::to_string(amps_.size()));
}

PureState PureState::basis(std::int64_t d, std::int64_t x, CoinState c) {
    PureState s(d);
    s.at(((x % d) + d) % d, c) = 1.0;
    return s;
}

double PureState::norm() const noexcept {
    double sum = 0.0;
    for (const cd& a : amps_) sum += std::norm(a);
    return std::sqrt(sum);
}

void PureState::normalize() {
    const double n = norm();
    if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
    for (cd& a : amps_) a /= n;
}

Eigen::Map<const Eigen::VectorXcd> PureState::as_vector() const {
    return {amps_.data(), static_cast<Eigen::Index>(amps_.size())};
}

Eigen::Matrix2cd coin_matrix(const CoinParams& coin) {
    const cd c = std::polar(std::cos(coin.theta), coin.gamma);
    const cd s = std::polar(std::sin(coin.theta), coin.sigma);
    Eigen::Matrix2cd m;
    m << c, s, -std::conj(s), std::conj(c);
    return std::polar(1.0, coin.delta) * m;
}

PureState apply_phase(const PureState& state, const WalkConfig& config) {
    if (state.d() != config.d()) throw DimensionMismatch("state and walk have different cycle sizes");
    const RootTable roots(config.d());
    PureState out = state;
    for (std::int64_t x = 0; x < config.d(); ++x) {
        const std::int64_t k = config.q() * x % config.d();
        out.at(x, CoinState::Plus) *= roots[k];
        out.at(x, CoinState::Minus) *= std::conj(roots[k]);
    }
    return out;
}

PureState apply_coin(const PureState& state, const CoinParams& coin) {
    const Eigen::Matrix2cd c = coin_matrix(coin);
    PureState out = state;
    for (std::int64_t x = 0; x < state.d(); ++x) {
        const cd up = state.at(x, CoinState::Plus);
        const cd down = state.at(x, CoinState::Minus);
        out.at(x, CoinState::Plus) = c(0, 0) * up + c(0, 1) * down;
        out.at(x, CoinState::Minus) = c(1, 0) * up + c(1, 1) * down;
    }
    return out;
}

PureState apply_shift(const PureState& state) {
    const std::int64_t d = state.d();
    PureState out(d);
    for (std::int64_t x = 0; x < d; ++x) {
        out.at((x + 1) % d, CoinState::Plus) = state.at(x, CoinState::Plus);
        out.at((x + d - 1) % d, CoinState::Minus) = state.at(x, CoinState::Minus);
    }
    return out;
}

PureState step(const PureState& state, const WalkConfig& config) {
    return apply_shift(apply_coin(apply_phase(state, config), config.coin()));
}

Stepper::Stepper(std::int64_t d, const CoinParams& coin)
    : d_(d), coin_(coin_matrix(coin)), roots_(d), scratch_(static_cast<std::size_t>(2 * d)) {
    coin.validate();
}

void Stepper::step(PureState& state, std::int64_t q) {
    if (state.d() != d_) throw DimensionMismatch("state and stepper have different cycle sizes");
    q %= d_;
    if (q < 0) q += d_;
    const auto amps = state.amplitudes();
    for (std::int64_t x = 0; x < d_; ++x) {
        const cd phase = roots_[q * x % d_];
        const cd up = amps[PureState::index(x, CoinState::Plus)] * phase;
        const cd down = amps[PureState::index(x, CoinState::Minus)] * std::conj(phase);
        scratch_[PureState::index((x + 1) % d_, CoinState::Plus)] = coin_(0, 0) * up + coin_(0, 1) * down;
        scratch_[PureState::index((x + d_ - 1) % d_, CoinState::Minus)] = coin_(1, 0) * up + coin_(1, 1) * down;
    }
    std::copy(scratch_.begin(), scratch_.end(), amps.begin());
}

QSchedule QSchedule::constant(std::int64_t q, std::size_t steps) {
    QSchedule s;
    if (steps > 0) s.append(steps, q);
    return s;
}

QSchedule& QSchedule::append(std::size_t length, std::int64_t q) {
    if (length == 0) return *this;
    const std::size_t begin = this->length();
    if (!segments_.empty() && segments_.back().q == q) {
        segments_.back().end += length;
    } else {
        segments_.push_back({begin, begin + length, q});
    }
    return *this;
}

void QSchedule::validate(std::size_t steps) const {
    std::size_t covered = 0;
    for (const QSegment& seg : segments_) {
        if (seg.begin != covered || seg.end <= seg.begin)
            throw ScheduleGap("schedule segment [" + std::to_string(seg.begin) + ", " + std::to_string(seg.end) +
                              ") does not continue at " + std::to_string(covered));
        covered = seg.end;
    }
    if (covered < steps)
        throw ScheduleGap("schedule covers " + std::to_string(covered) + " steps, " + std::to_string(steps) +
                          " requested");
}

std::int64_t QSchedule::q_at(std::size_t t, std::int64_t d) const {
    // Segments are sorted and contiguous, so binary search on begin.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](std::size_t value, const QSegment& seg) { return value < seg.begin; });
    if (it == segments_.begin() || t >= (it - 1)->end)
        throw ScheduleGap("no schedule segment covers step index " + std::to_string(t));
    std::int64_t q = (it - 1)->q % d;
    return q < 0 ? q + d : q;
}

QSchedule switch_schedule(SwitchScenario scenario, std::size_t steps, std::size_t switch_step) {
    if (scenario == SwitchScenario::Constant) return QSchedule::constant(0, steps);
    if (switch_step == 0) throw InvalidArgument("switch step is 1-based and must be >= 1");
    QSchedule s;
    const std::size_t quiet = std::min(steps, switch_step - 1);
    s.append(quiet, 0);
    switch (scenario) {
    case SwitchScenario::Left:
        s.append(steps - quiet, 1);
        break;
    case SwitchScenario::Middle:
        if (steps > quiet) {
            s.append(1, 1);
            s.append(steps - quiet - 1, 0);
        }
        break;
    case SwitchScenario::Right:
        for (std::size_t t = switch_step; t <= steps; ++t) s.append(1, static_cast<std::int64_t>(t));
        break;
    case SwitchScenario::Constant:
        break;
    }
    return s;
}

Evolution evolve_schedule(const PureState& initial, const CoinParams& coin, const QSchedule& schedule,
                          std::size_t steps, std::size_t record_every) {
    schedule.validate(steps);
    Evolution result{initial, {}};
    if (record_every > 0) result.records.push_back({0, 0, position_distribution(initial)});
    if (steps == 0) return result;

    const std::int64_t d = initial.d();
    Stepper stepper(d, coin);
    for (std::size_t t = 0; t < steps; ++t) {
        const std::int64_t q = schedule.q_at(t, d);
        stepper.step(result.final_state, q);
        const std::size_t done = t + 1;
        if (record_every > 0 && (done % record_every == 0 || done == steps))
            result.records.push_back({done, q, position_distribution(result.final_state)});
    }
    return result;
}

std::vector<cd> momentum_state(std::int64_t k, std::int64_t d) {
    if (d < 1 || k < 0 || k >= d) throw InvalidArgument("momentum index must lie in [0, d)");
    const RootTable roots(d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<cd> out(static_cast<std::size_t>(d));
    for (std::int64_t x = 0; x < d; ++x) out[static_cast<std::size_t>(x)] = scale * roots[k * x % d];
    return out;
}

PureState uniform_initial_state(std::int64_t d) {
    if (d < 2) throw InvalidArgument("uniform_initial_state needs d >= 2");
    const auto k0 = momentum_state(0, d);
    const double r = 1.0 / std::sqrt(2.0);
    PureState s(d);
    for (std::int64_t x = 0; x < d; ++x) {
        s.at(x, CoinState::Plus) = r * k0[static_cast<std::size_t>(x)];
        s.at(x, CoinState::Minus) = cd{0.0, r} * k0[static_cast<std::size_t>(x)];
    }
    return s;
}

std::vector<double> position_distribution(const PureState& state) {
    std::vector<double> p(static_cast<std::size_t>(state.d()));
    for (std::int64_t x = 0; x < state.d(); ++x)
        p[static_cast<std::size_t>(x)] = std::norm(state.at(x, CoinState::Plus)) + std::norm(state.at(x, CoinState::Minus));
    return p;
}

double tv_from_uniform(std::span<const double> distribution) {
    if (distribution.empty()) return 0.0;
    const double u = 1.0 / static_cast<double>(distribution.size());
    double sum = 0.0;
    for (double p : distribution) sum += std::abs(p - u);
    return 0.5 * sum;
}

double distance(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("states have different dimensions");
    return (a.as_vector() - b.as_vector()).norm();
}

} // namespace qwalk
