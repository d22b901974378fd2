#include <doctest.h>

#include <cmath>

#include "eibounds/data_model.hpp"

using namespace eib;

namespace {

Precinct mk(double n, double x, double t) {
    Precinct p;
    p.id = "p";
    p.n = n;
    p.x = x;
    p.t = t;
    return p;
}

Precinct mk_truth(double n, double x, double bb, double bw) {
    Precinct p = mk(n, x, x * bb + (1.0 - x) * bw);
    p.beta_b = bb;
    p.beta_w = bw;
    return p;
}

}  // namespace

TEST_CASE("accounting tolerance") {
    CHECK(accounting_tolerance(100.0) == doctest::Approx(1.0 / 200.0 + 1e-9));
    CHECK(accounting_tolerance(1.0) == doctest::Approx(0.5 + 1e-9));
    CHECK(std::isinf(accounting_tolerance(0.0)));
    ValidationOptions o;
    o.absolute_override = 0.01;
    CHECK(accounting_tolerance(5.0, o) == 0.01);
}

TEST_CASE("validate accepts clean data and rejects range violations") {
    Dataset ds;
    ds.name = "d";
    ds.precincts = {mk(100, 0.5, 0.3), mk(100, 0.2, 0.9)};
    CHECK_NOTHROW(validate_dataset(ds));

    Dataset bad = ds;
    bad.precincts[1].x = 1.2;
    CHECK_THROWS_AS(validate_dataset(bad), validation_error);

    bad = ds;
    bad.precincts[0].t = -0.1;
    CHECK_THROWS_AS(validate_dataset(bad), validation_error);

    bad = ds;
    bad.precincts[0].n = -1.0;
    CHECK_THROWS_AS(validate_dataset(bad), validation_error);
}

TEST_CASE("validate enforces the accounting identity when truth is present") {
    Dataset ds;
    ds.name = "d";
    ds.has_ground_truth = true;
    ds.precincts = {mk_truth(100, 0.4, 0.25, 0.75)};
    CHECK_NOTHROW(validate_dataset(ds));

    // push t past 1/(2n)+slack
    Dataset bad = ds;
    bad.precincts[0].t += 0.006;
    CHECK_THROWS_AS(validate_dataset(bad), validation_error);

    // within the rounding allowance passes
    Dataset near = ds;
    near.precincts[0].t += 0.004;
    CHECK_NOTHROW(validate_dataset(near));

    // n = 0 precincts skip the accounting check entirely
    Dataset zero = ds;
    zero.precincts[0].n = 0.0;
    zero.precincts[0].t = 0.9;
    zero.precincts.push_back(mk(10, 0.5, 0.5));
    CHECK_NOTHROW(validate_dataset(zero));
}

TEST_CASE("validate requires a positive weight total") {
    Dataset ds;
    ds.name = "d";
    ds.precincts = {mk(100, 0.0, 0.3), mk(0, 0.5, 0.2)};
    CHECK_THROWS_AS(validate_dataset(ds), validation_error);
}

TEST_CASE("true district rate") {
    Dataset ds;
    ds.name = "d";
    ds.has_ground_truth = true;

    SUBCASE("hand-computed average") {
        ds.precincts = {mk_truth(100, 0.5, 0.2, 0.5),
                        mk_truth(100, 0.5, 0.6, 0.5)};
        CHECK(true_district_b(ds) == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("all zero rates") {
        ds.precincts = {mk_truth(100, 0.5, 0.0, 0.4),
                        mk_truth(50, 0.3, 0.0, 0.6)};
        CHECK(true_district_b(ds) == 0.0);
    }
    SUBCASE("single precinct is the identity") {
        ds.precincts = {mk_truth(80, 0.6, 0.7, 0.1)};
        CHECK(true_district_b(ds) == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("invariant under uniform population scaling") {
        ds.precincts = {mk_truth(100, 0.5, 0.2, 0.5),
                        mk_truth(300, 0.25, 0.9, 0.1)};
        const double before = true_district_b(ds);
        for (Precinct& p : ds.precincts) p.n *= 17.5;
        CHECK(true_district_b(ds) == doctest::Approx(before).epsilon(1e-12));
    }
    SUBCASE("missing ground truth is an error") {
        ds.has_ground_truth = false;
        ds.precincts = {mk(100, 0.5, 0.3)};
        CHECK_THROWS_AS(true_district_b(ds), validation_error);
    }
    SUBCASE("zero denominator is an error") {
        ds.precincts = {mk_truth(100, 0.0, 0.5, 0.5)};
        CHECK_THROWS_AS(true_district_b(ds), validation_error);
    }
}

TEST_CASE("group swap") {
    Dataset ds;
    ds.name = "d";
    ds.has_ground_truth = true;
    ds.precincts = {mk_truth(100, 0.3, 0.2, 0.8), mk_truth(50, 0.7, 0.4, 0.1)};
    Dataset sw = swap_groups(ds);
    CHECK(sw.precincts[0].x == doctest::Approx(0.7));
    CHECK(sw.precincts[0].t == ds.precincts[0].t);
    CHECK(*sw.precincts[0].beta_b == 0.8);
    CHECK(*sw.precincts[0].beta_w == 0.2);
    // swapped data still satisfies the accounting identity
    CHECK_NOTHROW(validate_dataset(sw));
    // double swap is the original
    Dataset back = swap_groups(sw);
    CHECK(back.precincts[0].x == doctest::Approx(ds.precincts[0].x));
    CHECK(*back.precincts[1].beta_b == *ds.precincts[1].beta_b);
}
