#pragma once

#include <complex>
#include <cstddef>

namespace qwalk::dirac {

using cd = std::complex<double>;

/// Eigenmode of H = (p - mu x) sigma_z + m sigma_x in natural units (hbar = c = e = 1).
struct DiracMode {
    double mass = 0.0; // >= 0
    double mu = 0.0;   // gauge slope, A = mu x
    double k = 0.0;
    int band = 1;      // +1 or -1
};

double dirac_energy(double k, double mass, int band);

struct SpinorSample {
    double x = 0.0;
    cd upper;
    cd lower;
};

/// e^{i(mu x^2/2 + k x)} (m, E - k) / sqrt(m^2 + (E - k)^2), so |upper|^2 + |lower|^2 = 1.
/// Throws DegenerateSpinor when the unnormalized spinor vanishes (m = 0 and E = k).
SpinorSample dirac_spinor(double x, const DiracMode& mode);

/// Spinor inner product (m^2 + (E - k)(E' - k')) / sqrt(N N'), |Gamma| <= 1.
cd gamma_factor(double k, double k_prime, int band, int band_prime, double mass);

/// Integral over the real line of e^{i(mu x^2/2 + k x)} e^{-i(mu' x^2/2 + k' x)}:
/// sqrt(pi/|D|) e^{i sgn(D) pi/4} e^{-i d^2/(4D)} with D = (mu - mu')/2, d = k - k'.
/// Throws EqualSlopes when mu == mu'.
cd chirp_overlap(double mu, double k, double mu_prime, double k_prime);

/// Integral of psi_a(x) psi_b(x)^* over the real line, Gamma times the chirp overlap.
cd overlap_closed_form(const DiracMode& a, const DiracMode& b);

/// sqrt(2 pi / |mu - mu'|).
double overlap_bound(double mu, double mu_prime);

struct QuadratureResult {
    cd value;                  // integral over [-W, W]
    cd tail_corrected;         // value plus asymptotic endpoint tails
    double truncation_estimate = 0.0; // |Gamma| (1/|phi'(W)| + 1/|phi'(-W)|)
    std::size_t evaluations = 0;
};

/// Composite 10-point Gauss-Legendre over [-W, W] with at least `samples_per_period`
/// nodes per local period of the integrand phase. Panels are summed in fixed order.
QuadratureResult quadrature_overlap(const DiracMode& a, const DiracMode& b, double window,
                                    double samples_per_period = 40.0);

struct XThetaCheck {
    bool holds = false;
    double computed = 0.0; // from the massless closed form
    double expected = 0.0; // 1 / sqrt(2 pi |sin(theta - theta')|)
    double deviation = 0.0; // relative: |computed - expected| / expected
};

/// Massless limit: eigenfunctions of x_theta = x cos(theta) + p sin(theta) are the m = 0
/// modes with mu = -cot(theta), delta-normalized by 1/sqrt(2 pi |sin(theta)|).
/// Throws ParallelQuadratures when sin(theta - theta') = 0.
XThetaCheck massless_xtheta_check(double theta, double theta_prime, double k, double k_prime,
                                  double tolerance = 1e-10);

} // namespace qwalk::dirac
