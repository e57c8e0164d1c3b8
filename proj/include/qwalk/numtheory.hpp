#pragma once

#include <complex>
#include <cstdint>

namespace qwalk::numtheory {

/// Element of Z/dZ. Construction reduces any integer into [0, d).
class Residue {
public:
    Residue(std::int64_t value, std::int64_t modulus);

    std::int64_t value() const noexcept { return value_; }
    std::int64_t modulus() const noexcept { return modulus_; }

    friend bool operator==(const Residue&, const Residue&) = default;

private:
    std::int64_t value_;
    std::int64_t modulus_;
};

/// Deterministic Miller-Rabin, exact for every n < 2^63.
bool is_prime(std::uint64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Multiplicative inverse via extended Euclid. Throws NotInvertible when gcd(a, d) != 1.
Residue mod_inverse(const Residue& a);

/// Unique j~ in [0, d) with j~ * q' == j * q (mod d). Requires gcd(q', d) == 1.
Residue companion_index(const Residue& j, const Residue& q, const Residue& q_prime);

/// S = sum_{j=0}^{d-1} exp(i 2pi/d (x j^2 + y j)), summed directly. Exponents are
/// reduced mod d in exact integer arithmetic before the single complex exponential.
std::complex<double> gauss_sum(std::int64_t x, std::int64_t y, std::int64_t d);

} // namespace qwalk::numtheory
