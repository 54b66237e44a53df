#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "stirlab/rng.hpp"

using namespace stirlab;

TEST_SUITE("rng") {

TEST_CASE("philox 4x32-10 reproduces the reference known-answer vectors") {
    // Reference vectors from the Random123 distribution (kat_vectors).
    {
        const auto out = Philox4x32::block(0u, 0u, 0u);
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = Philox4x32::block(0xffffffffffffffffull,
                                           0xffffffffffffffffull,
                                           0xffffffffffffffffull);
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const auto out = Philox4x32::block(0x299f31d0a4093822ull,
                                           0x85a308d3243f6a88ull,
                                           0x0370734413198a2eull);
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("streams replay bit for bit and are keyed by sample index") {
    NormalStream a(42, 7);
    NormalStream b(42, 7);
    NormalStream c(42, 8);
    bool all_equal = true;
    bool any_differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto pa = a.pair();
        const auto pb = b.pair();
        const auto pc = c.pair();
        all_equal = all_equal && pa[0] == pb[0] && pa[1] == pb[1];
        any_differs = any_differs || pa[0] != pc[0];
    }
    CHECK(all_equal);
    CHECK(any_differs);
    CHECK(a.blocks_used() == 1000);
}

TEST_CASE("uniforms are strictly inside the unit interval with flat moments") {
    NormalStream s(2024, 0);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0, lo = 1.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        sum += u;
        sumsq += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sumsq / n - 0.25 == doctest::Approx(1.0 / 12.0).epsilon(0.03));
}

TEST_CASE("normal pairs have standard moments and no cross correlation") {
    const int n = 100000;
    double m1 = 0.0, m2 = 0.0, cross = 0.0, kurt = 0.0;
    for (int i = 0; i < n; ++i) {
        NormalStream s(99, static_cast<std::uint64_t>(i));
        const auto z = s.pair();
        m1 += z[0] + z[1];
        m2 += z[0] * z[0] + z[1] * z[1];
        cross += z[0] * z[1];
        kurt += z[0] * z[0] * z[0] * z[0];
    }
    CHECK(m1 / (2 * n) == doctest::Approx(0.0).epsilon(1).scale(0.02));
    CHECK(m2 / (2 * n) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cross / n == doctest::Approx(0.0).epsilon(1).scale(0.02));
    CHECK(kurt / n == doctest::Approx(3.0).epsilon(0.1));
}

}  // TEST_SUITE
