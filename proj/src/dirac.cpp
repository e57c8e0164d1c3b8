#include "qwalk/dirac.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk::dirac {

using std::numbers::pi;

namespace {

void check_mode(const DiracMode& mode) {
    if (!(mode.mass >= 0.0)) throw InvalidArgument("Dirac mass must be >= 0");
    if (mode.band != 1 && mode.band != -1) throw InvalidArgument("band must be +1 or -1");
    if (!std::isfinite(mode.mu) || !std::isfinite(mode.k)) throw InvalidArgument("mu and k must be finite");
}

struct Spinor {
    double upper;
    double lower;
};

Spinor unit_spinor(double k, double mass, int band) {
    const double upper = mass;
    const double lower = dirac_energy(k, mass, band) - k;
    const double n2 = upper * upper + lower * lower;
    if (n2 == 0.0)
        throw DegenerateSpinor("spinor vanishes for m = 0, band " + std::to_string(band) + ", k = " +
                               std::to_string(k) + "; use the massless plane-wave branch");
    const double inv = 1.0 / std::sqrt(n2);
    return {upper * inv, lower * inv};
}

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kNodes{0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                       0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kWeights{0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                         0.1494513491505806, 0.0666713443086881};

} // namespace

double dirac_energy(double k, double mass, int band) {
    if (mass < 0.0) throw InvalidArgument("Dirac mass must be >= 0");
    return band * std::hypot(k, mass);
}

SpinorSample dirac_spinor(double x, const DiracMode& mode) {
    check_mode(mode);
    const Spinor s = unit_spinor(mode.k, mode.mass, mode.band);
    const cd phase = std::polar(1.0, 0.5 * mode.mu * x * x + mode.k * x);
    return {x, phase * s.upper, phase * s.lower};
}

cd gamma_factor(double k, double k_prime, int band, int band_prime, double mass) {
    const Spinor a = unit_spinor(k, mass, band);
    const Spinor b = unit_spinor(k_prime, mass, band_prime);
    return {a.upper * b.upper + a.lower * b.lower, 0.0};
}

cd chirp_overlap(double mu, double k, double mu_prime, double k_prime) {
    if (mu == mu_prime) throw EqualSlopes("overlap between equal gauge slopes is a delta distribution");
    const double half_gap = 0.5 * (mu - mu_prime);
    const double dk = k - k_prime;
    const double sign = half_gap > 0.0 ? 1.0 : -1.0;
    return std::sqrt(pi / std::abs(half_gap)) * std::polar(1.0, sign * pi / 4.0 - dk * dk / (4.0 * half_gap));
}

cd overlap_closed_form(const DiracMode& a, const DiracMode& b) {
    check_mode(a);
    check_mode(b);
    if (a.mass != b.mass) throw InvalidArgument("modes must share the particle mass");
    if (a.mu == b.mu) throw EqualSlopes("overlap between equal gauge slopes is a delta distribution");
    return gamma_factor(a.k, b.k, a.band, b.band, a.mass) * chirp_overlap(a.mu, a.k, b.mu, b.k);
}

double overlap_bound(double mu, double mu_prime) {
    if (mu == mu_prime) throw EqualSlopes("bound diverges for equal gauge slopes");
    return std::sqrt(2.0 * pi / std::abs(mu - mu_prime));
}

QuadratureResult quadrature_overlap(const DiracMode& a, const DiracMode& b, double window,
                                    double samples_per_period) {
    check_mode(a);
    check_mode(b);
    if (a.mass != b.mass) throw InvalidArgument("modes must share the particle mass");
    if (a.mu == b.mu) throw EqualSlopes("overlap between equal gauge slopes is a delta distribution");
    if (window < 0.0) throw InvalidArgument("window must be >= 0");
    if (samples_per_period < 10.0) throw InvalidArgument("need at least 10 samples per period");

    QuadratureResult out;
    const double half_gap = 0.5 * (a.mu - b.mu);
    const double dk = a.k - b.k;
    auto slope = [&](double x) { return 2.0 * half_gap * x + dk; }; // phi'(x)
    auto integrand = [&](double x) {
        const SpinorSample sa = dirac_spinor(x, a);
        const SpinorSample sb = dirac_spinor(x, b);
        return sa.upper * std::conj(sb.upper) + sa.lower * std::conj(sb.lower);
    };

    const double panels_per_period = samples_per_period / 10.0;
    double x = -window;
    while (x < window) {
        // phi' is linear, so its largest magnitude over [x, x+1] sits at an end.
        const double rate = std::max({std::abs(slope(x)), std::abs(slope(std::min(x + 1.0, window))), 1e-12});
        const double width = std::min({1.0, 2.0 * pi / (rate * panels_per_period), window - x});
        const double mid = x + 0.5 * width;
        const double half = 0.5 * width;
        cd panel{0.0, 0.0};
        for (std::size_t i = 0; i < kNodes.size(); ++i)
            panel += kWeights[i] * (integrand(mid - half * kNodes[i]) + integrand(mid + half * kNodes[i]));
        out.value += half * panel;
        out.evaluations += 2 * kNodes.size();
        x += width;
    }

    if (window > 0.0) {
        const double curvature = 2.0 * half_gap;
        const cd fr = integrand(window);
        const cd fl = integrand(-window);
        const double sr = slope(window);
        const double sl = slope(-window);
        const cd i{0.0, 1.0};
        // Integration by parts, two terms, for the tails beyond +W and below -W.
        const cd right = -fr / (i * sr) + fr * curvature / (sr * sr * sr);
        const cd left = fl / (i * sl) - fl * curvature / (sl * sl * sl);
        out.tail_corrected = out.value + right + left;
        out.truncation_estimate = std::abs(fr) / std::abs(sr) + std::abs(fl) / std::abs(sl);
    } else {
        out.tail_corrected = out.value;
        out.truncation_estimate = std::numeric_limits<double>::infinity();
    }
    return out;
}

XThetaCheck massless_xtheta_check(double theta, double theta_prime, double k, double k_prime, double tolerance) {
    const double gap = std::sin(theta - theta_prime);
    if (std::abs(gap) < 1e-15) throw ParallelQuadratures("sin(theta - theta') = 0: the bases coincide");

    XThetaCheck out;
    out.expected = 1.0 / std::sqrt(2.0 * pi * std::abs(gap));
    const double s = std::sin(theta);
    const double sp = std::sin(theta_prime);
    auto norm_const = [](double sine) { return 1.0 / std::sqrt(2.0 * pi * std::abs(sine)); };

    if (s == 0.0 || sp == 0.0) {
        // Position eigenstate against a chirp: the overlap is the chirp's value, of unit modulus.
        out.computed = norm_const(s == 0.0 ? sp : s);
    } else {
        const double mu = -std::cos(theta) / s;
        const double mu_prime = -std::cos(theta_prime) / sp;
        // m = 0 modes: the spinor sits in one component, so pick the non-degenerate band.
        auto band_for = [](double kk) { return kk > 0.0 ? -1 : 1; };
        double magnitude;
        if (k != 0.0 && k_prime != 0.0) {
            magnitude = std::abs(overlap_closed_form({0.0, mu, k, band_for(k)}, {0.0, mu_prime, k_prime, band_for(k_prime)}));
        } else {
            magnitude = std::abs(chirp_overlap(mu, k, mu_prime, k_prime));
        }
        out.computed = norm_const(s) * norm_const(sp) * magnitude;
    }
    out.deviation = std::abs(out.computed - out.expected) / out.expected;
    out.holds = out.deviation <= tolerance;
    return out;
}

} // namespace qwalk::dirac
