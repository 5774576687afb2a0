#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "gravmc/rng.hpp"

using namespace gravmc;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Random123 reference vectors: counter/key all zeros, all ones, pi digits
    {
        const auto r = philox4x32(0, 0, 0);
        CHECK(r[0] == 0x6627e8d5u);
        CHECK(r[1] == 0xe169c58du);
        CHECK(r[2] == 0xbc57ac4cu);
        CHECK(r[3] == 0x9b00dbd8u);
    }
    {
        // counter = key = all 0xff...
        const auto r = philox4x32(~0ull, ~0ull, ~0ull);
        CHECK(r[0] == 0x408f276du);
        CHECK(r[1] == 0x41c83b0eu);
        CHECK(r[2] == 0xa20bc7c6u);
        CHECK(r[3] == 0x6d5451fdu);
    }
    {
        // ctr = 243f6a88 85a308d3 13198a2e 03707344, key = a4093822 299f31d0
        const std::uint64_t block = (0x85a308d3ull << 32) | 0x243f6a88ull;
        const std::uint64_t stream = (0x03707344ull << 32) | 0x13198a2eull;
        const std::uint64_t seed = (0x299f31d0ull << 32) | 0xa4093822ull;
        const auto r = philox4x32(seed, stream, block);
        CHECK(r[0] == 0xd16cfe09u);
        CHECK(r[1] == 0x94fdccebu);
        CHECK(r[2] == 0x5001e420u);
        CHECK(r[3] == 0x24126ea1u);
    }
}

TEST_CASE("streams replay and differ across ids") {
    RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool all_equal = true, any_equal_c = false, any_equal_d = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_equal_c = any_equal_c || (va == c.next_u64());
        any_equal_d = any_equal_d || (va == d.next_u64());
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);
    CHECK_FALSE(any_equal_d);
}

TEST_CASE("unit uniforms stay in [0,1)") {
    RandomStream s(1, 2);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

namespace {

template <class Real>
void check_moments() {
    NormalSource<Real> ns(2024, 0);
    const std::int64_t n = 10'000'000;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double z = ns.next();
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
        s4 += z * z * z * z;
    }
    const double inv = 1.0 / double(n);
    // tolerances near 4-5 sigma of the estimators
    CHECK(std::abs(s1 * inv) < 1.5e-3);
    CHECK(std::abs(s2 * inv - 1.0) < 2.2e-3);
    CHECK(std::abs(s3 * inv) < 6e-3);
    CHECK(std::abs(s4 * inv - 3.0) < 2e-2);
}

} // namespace

TEST_CASE("normal moments, double") { check_moments<double>(); }
TEST_CASE("normal moments, float") { check_moments<float>(); }

TEST_CASE("normal sample CDF matches erf") {
    NormalSource<double> ns(77, 5);
    const int n = 1'000'000;
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = ns.next();
    std::sort(z.begin(), z.end());
    double dmax = 0;
    for (int i = 0; i < n; ++i) {
        const double cdf = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
        const double emp_hi = double(i + 1) / n;
        const double emp_lo = double(i) / n;
        dmax = std::max({dmax, std::abs(cdf - emp_hi), std::abs(cdf - emp_lo)});
    }
    // Kolmogorov statistic: sqrt(n)*D below 2.2 (~alpha 1e-4)
    CHECK(dmax * std::sqrt(double(n)) < 2.2);
}
