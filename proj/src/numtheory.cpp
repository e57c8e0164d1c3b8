#include "qwalk/numtheory.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk::numtheory {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1U;
    }
    return result;
}

} // namespace

Residue::Residue(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
    if (modulus <= 0) throw InvalidArgument("residue modulus must be positive, got " + std::to_string(modulus));
    value_ = value % modulus;
    if (value_ < 0) value_ += modulus;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    constexpr std::array<std::uint64_t, 12> witnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : witnesses) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t odd = n - 1;
    int twos = 0;
    while ((odd & 1U) == 0) {
        odd >>= 1U;
        ++twos;
    }
    for (std::uint64_t a : witnesses) {
        std::uint64_t x = pow_mod(a, odd, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < twos; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Residue mod_inverse(const Residue& a) {
    const std::int64_t d = a.modulus();
    std::int64_t old_r = a.value(), r = d;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quotient = old_r / r;
        std::int64_t t = old_r - quotient * r;
        old_r = r;
        r = t;
        t = old_s - quotient * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1 && d != 1) {
        throw NotInvertible(std::to_string(a.value()) + " has no inverse modulo " + std::to_string(d) +
                            " (gcd " + std::to_string(old_r) + ")");
    }
    return Residue(old_s, d);
}

Residue companion_index(const Residue& j, const Residue& q, const Residue& q_prime) {
    const std::int64_t d = j.modulus();
    if (q.modulus() != d || q_prime.modulus() != d) throw InvalidArgument("companion_index: mixed moduli");
    const Residue inv = mod_inverse(q_prime);
    // Q = q * q'^{-1}; j~ = Q * j.
    const auto ratio = static_cast<std::int64_t>(static_cast<__int128>(q.value()) * inv.value() % d);
    return Residue(static_cast<std::int64_t>(static_cast<__int128>(ratio) * j.value() % d), d);
}

std::complex<double> gauss_sum(std::int64_t x, std::int64_t y, std::int64_t d) {
    if (d < 1) throw InvalidArgument("gauss_sum: modulus must be >= 1");
    const Residue xr(x, d), yr(y, d);
    const double eps = 2.0 * std::numbers::pi / static_cast<double>(d);
    std::complex<double> sum{0.0, 0.0};
    for (std::int64_t j = 0; j < d; ++j) {
        const auto jj = static_cast<__int128>(j);
        const auto n = static_cast<std::int64_t>((xr.value() * jj % d * jj + yr.value() * jj) % d);
        sum += std::polar(1.0, eps * static_cast<double>(n));
    }
    return sum;
}

} // namespace qwalk::numtheory
