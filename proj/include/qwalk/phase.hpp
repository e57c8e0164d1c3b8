#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qwalk {

using cd = std::complex<double>;

// Table of the n-th roots of unity, exp(2 pi i k / n). Callers reduce integer
// phase indices mod n first, so a phase never accumulates rounding error.
class RootTable {
public:
    explicit RootTable(std::int64_t n);

    std::int64_t size() const noexcept { return n_; }
    const cd& operator[](std::int64_t k) const noexcept { return roots_[static_cast<std::size_t>(k)]; }
    // Reduces k into [0, n) before lookup.
    cd at(std::int64_t k) const noexcept;

private:
    std::int64_t n_;
    std::vector<cd> roots_;
};

} // namespace qwalk
