#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "discendo/disc.hpp"
#include "testing_util.hpp"

using namespace discendo;
using Catch::Approx;

TEST_CASE("disc points stay strictly interior") {
    CHECK(DiscPoint(0.5).value() == Complex(0.5, 0.0));
    CHECK(DiscPoint(0.3, -0.4).modulus() == Approx(0.5));
    CHECK(DiscPoint().value() == Complex(0.0, 0.0));
    CHECK_NOTHROW(DiscPoint(1.0 - 1e-13));
    CHECK_THROWS_AS(DiscPoint(1.0), std::domain_error);
    CHECK_THROWS_AS(DiscPoint(-1.0), std::domain_error);
    CHECK_THROWS_AS(DiscPoint(0.8, 0.7), std::domain_error);
    // Inside the guard band counts as "on the boundary".
    CHECK_THROWS_AS(DiscPoint(1.0 - 1e-16), std::domain_error);
}

TEST_CASE("pseudohyperbolic distance on reference pairs") {
    CHECK(pseudo_distance(DiscPoint(0.5), DiscPoint(-0.5)) == Approx(0.8).margin(1e-15));
    CHECK(pseudo_distance(DiscPoint(0.0), DiscPoint(0.5)) == Approx(0.5).margin(1e-15));
    CHECK(pseudo_distance(DiscPoint(0.3, 0.1), DiscPoint(0.3, 0.1)) == 0.0);
    // rho(0, w) = |w|.
    CHECK(pseudo_distance(DiscPoint(), DiscPoint(0.3, -0.4)) == Approx(0.5).margin(1e-15));
}

TEST_CASE("hyperbolic distance is atanh of rho") {
    CHECK(hyperbolic_distance(DiscPoint(0.0), DiscPoint(0.5)) ==
          Approx(0.5493061443340549).margin(1e-15));
    CHECK(hyperbolic_distance(DiscPoint(0.5), DiscPoint(-0.5)) ==
          Approx(1.0986122886681098).margin(1e-15));
    // Twice the distance 0 -> 1/2, by the automorphism group's transitivity.
    CHECK(hyperbolic_distance(DiscPoint(0.5), DiscPoint(-0.5)) ==
          Approx(2.0 * hyperbolic_distance(DiscPoint(0.0), DiscPoint(0.5))).margin(1e-14));
}

TEST_CASE("moebius shift: evaluation, derivative, reference values") {
    const MoebiusShift a{DiscPoint(0.9)};
    CHECK(moebius_eval(a, DiscPoint(0.0)).value() == Complex(0.9, 0.0));
    CHECK(moebius_eval(a, DiscPoint(0.5)).value().real() ==
          Approx(0.9655172413793104).margin(1e-15));

    const MoebiusShift half{DiscPoint(0.5)};
    CHECK(moebius_derivative(half, DiscPoint(0.5)) == Complex(0.48, 0.0));
    // a'(0) = 1 - |alpha|^2.
    CHECK(moebius_derivative(half, DiscPoint(0.0)).real() == Approx(0.75).margin(1e-15));
}

TEST_CASE("moebius shifts are rho-isometries and atanh(rho) satisfies the triangle inequality") {
    std::mt19937_64 rng(20260823);
    for (int trial = 0; trial < 2000; ++trial) {
        const DiscPoint z{testutil::random_interior(rng, 0.9)};
        const DiscPoint w{testutil::random_interior(rng, 0.9)};
        const DiscPoint v{testutil::random_interior(rng, 0.9)};
        const MoebiusShift a{DiscPoint(testutil::random_interior(rng, 0.7))};

        // Symmetry and separation.
        CHECK(pseudo_distance(z, w) == Approx(pseudo_distance(w, z)).margin(1e-15));
        CHECK(pseudo_distance(z, w) < 1.0);

        // Invariance under the shift.
        CHECK(pseudo_distance(moebius_eval(a, z), moebius_eval(a, w)) ==
              Approx(pseudo_distance(z, w)).margin(1e-12));

        // Triangle inequality for the hyperbolic metric.
        CHECK(hyperbolic_distance(z, w) <=
              hyperbolic_distance(z, v) + hyperbolic_distance(v, w) + 1e-12);
    }
}

TEST_CASE("shift by alpha and shift by -alpha invert each other") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const Complex alpha = testutil::random_interior(rng, 0.8);
        const DiscPoint z{testutil::random_interior(rng, 0.9)};
        const MoebiusShift forward{alpha};
        const MoebiusShift backward{-alpha};
        const DiscPoint round = moebius_eval(backward, moebius_eval(forward, z));
        CHECK(std::abs(round.value() - z.value()) < 1e-13);
    }
}

TEST_CASE("moebius derivative matches a finite difference") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Complex alpha = testutil::random_interior(rng, 0.6);
        const DiscPoint z{testutil::random_interior(rng, 0.7)};
        const MoebiusShift a{alpha};
        const Complex numeric = testutil::numeric_derivative(
            [&](Complex x) { return detail::moebius_apply(alpha, x); }, z.value());
        CHECK(std::abs(moebius_derivative(a, z) - numeric) < 1e-9);
    }
}
