#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "discendo/parse.hpp"
#include "testing_util.hpp"

using namespace discendo;
using Catch::Approx;

TEST_CASE("parsing atoms") {
    CHECK(holds<nodes::Identity>(parse_map("z")));
    CHECK(holds<nodes::Tau>(parse_map("tau")));
    CHECK(holds<nodes::Monomial>(parse_map("z^3")));
    CHECK(get<nodes::Monomial>(parse_map("z^3")).degree == 3);
    CHECK(holds<nodes::Constant>(parse_map("c(0.2,-0.3)")));
    CHECK(get<nodes::Constant>(parse_map("c(0.2,-0.3)")).value == Complex(0.2, -0.3));
    CHECK(holds<nodes::Shift>(parse_map("mobius(0.4)")));
    CHECK(get<nodes::Shift>(parse_map("mobius(0.3,-0.2)")).alpha == Complex(0.3, -0.2));
    CHECK(holds<nodes::Affine>(parse_map("affine(0.5,0.25)")));
    CHECK(holds<nodes::Rotation>(parse_map("rot(1.5)")));
    CHECK(holds<nodes::BlaschkeProduct>(parse_map("blaschke[0,0.5]")));
    CHECK(holds<nodes::Compose>(parse_map("compose(tau,mobius(0.5))")));
}

TEST_CASE("parsed maps evaluate like their factory counterparts") {
    CHECK(eval(parse_map("z^2"), Complex(0.3, 0.0)).real() == Approx(0.09).margin(1e-15));
    CHECK(eval(parse_map("mobius(0.4)"), Complex(0.0, 0.0)) == Complex(0.4, 0.0));
    CHECK(eval(parse_map("affine(0.5,0.25)"), Complex(0.5, 0.0)).real() ==
          Approx(0.5).margin(1e-15));
    CHECK(eval(parse_map("compose(tau,mobius(0.5))"), Complex(0.0, 0.0)).real() ==
          Approx(0.012446767091965986).margin(1e-15));
    CHECK(std::abs(eval(parse_map("blaschke[0,0.5]"), Complex(0.5, 0.0))) < 1e-15);
}

TEST_CASE("rotation angle spellings") {
    auto angle_of = [](const char* text) { return get<nodes::Rotation>(parse_map(text)).angle; };
    CHECK(angle_of("rot(pi)") == Approx(std::numbers::pi));
    CHECK(angle_of("rot(-pi)") == Approx(-std::numbers::pi));
    CHECK(angle_of("rot(pi/3)") == Approx(std::numbers::pi / 3));
    CHECK(angle_of("rot(2*pi/8)") == Approx(std::numbers::pi / 4));
    CHECK(angle_of("rot(0.5*pi)") == Approx(std::numbers::pi / 2));
    CHECK(angle_of("rot(1.5)") == Approx(1.5));
    CHECK(angle_of("rot(-0.25*pi)") == Approx(-std::numbers::pi / 4));
}

TEST_CASE("scalar prefixes") {
    const MapExpr half = parse_map("0.5*z");
    CHECK(holds<nodes::Scale>(half));
    CHECK(get<nodes::Scale>(half).factor == Complex(0.5, 0.0));
    CHECK(eval(half, Complex(0.4, 0.0)).real() == Approx(0.2).margin(1e-15));

    CHECK(eval(parse_map("-0.5*z"), Complex(0.4, 0.0)).real() == Approx(-0.2).margin(1e-15));
    CHECK(std::abs(eval(parse_map("c(0,0.5)*z"), Complex(0.4, 0.0)) - Complex(0.0, 0.2)) <
          1e-15);
    CHECK(eval(parse_map("0.5*0.5*z"), Complex(0.4, 0.0)).real() == Approx(0.1).margin(1e-15));

    // Same structure through text and through factories.
    const MapExpr parsed = parse_map("0.5*blaschke[0,0.5]");
    const MapExpr built = scale(0.5, blaschke(std::vector<Complex>{0.0, 0.5}));
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Complex z = testutil::random_interior(rng, 0.8);
        CHECK(std::abs(eval(parsed, z) - eval(built, z)) < 1e-15);
    }
}

TEST_CASE("geometric zero shorthand") {
    const MapExpr b = parse_map("blaschke[geometric:8]");
    REQUIRE(holds<nodes::BlaschkeProduct>(b));
    const auto& zeros = get<nodes::BlaschkeProduct>(b).zeros;
    REQUIRE(zeros.size() == 8);
    CHECK(zeros[0] == Complex(0.0));
    CHECK(zeros[2] == Complex(0.75));
    CHECK(std::abs(eval(b, Complex(0.75, 0.0))) < 1e-15);
}

TEST_CASE("whitespace is insignificant") {
    const MapExpr m = parse_map("  compose( tau ,  mobius( 0.5 ) )  ");
    CHECK(holds<nodes::Compose>(m));
    CHECK(eval(m, Complex(0.0, 0.0)).real() == Approx(0.012446767091965986).margin(1e-15));
}

TEST_CASE("syntax errors carry positions") {
    CHECK_THROWS_AS(parse_map(""), parse_error);
    CHECK_THROWS_AS(parse_map("frob(0.3)"), parse_error);
    CHECK_THROWS_AS(parse_map("cz"), parse_error);
    CHECK_THROWS_AS(parse_map("composer(z,z)"), parse_error);
    CHECK_THROWS_AS(parse_map("z^"), parse_error);
    CHECK_THROWS_AS(parse_map("mobius(0.5"), parse_error);
    CHECK_THROWS_AS(parse_map("compose(z)"), parse_error);
    CHECK_THROWS_AS(parse_map("c(0.5)"), parse_error);
    CHECK_THROWS_AS(parse_map("rot(2*3)"), parse_error);
    CHECK_THROWS_AS(parse_map("blaschke[]"), parse_error);
    CHECK_THROWS_AS(parse_map("blaschke[geometric:0]"), parse_error);

    try {
        parse_map("z z");
        FAIL("expected trailing-input error");
    } catch (const parse_error& e) {
        CHECK(e.position() == 2);
    }
    try {
        parse_map("0.5*frob");
        FAIL("expected unknown-map error");
    } catch (const parse_error& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("semantic violations surface as parse errors") {
    CHECK_THROWS_AS(parse_map("1.5*z"), parse_error);
    CHECK_THROWS_AS(parse_map("mobius(1.2)"), parse_error);
    CHECK_THROWS_AS(parse_map("affine(0.9,0.3)"), parse_error);
    CHECK_THROWS_AS(parse_map("c(1,0)"), parse_error);
    CHECK_THROWS_AS(parse_map("blaschke[1.0]"), parse_error);
    CHECK_THROWS_AS(parse_map("z^0"), parse_error);
    try {
        parse_map("compose(tau,mobius(1.2))");
        FAIL("expected semantic error");
    } catch (const parse_error& e) {
        CHECK(e.position() == 12);
    }
}
