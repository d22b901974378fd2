#include <doctest.h>

#include "eibounds/interval.hpp"

using eib::Interval;

TEST_CASE("make and width") {
    Interval a = Interval::make(0.2, 0.7);
    CHECK(!a.empty);
    CHECK(a.width() == doctest::Approx(0.5));

    Interval point = Interval::make(0.3, 0.3);
    CHECK(!point.empty);
    CHECK(point.width() == 0.0);

    Interval flipped = Interval::make(0.7, 0.2);
    CHECK(flipped.empty);
    CHECK(flipped.width() == 0.0);
}

TEST_CASE("contains is closed and rejects on empty") {
    Interval a = Interval::make(0.2, 0.7);
    CHECK(a.contains(0.2));
    CHECK(a.contains(0.7));
    CHECK(a.contains(0.5));
    CHECK(!a.contains(0.19999));
    CHECK(!Interval::none().contains(0.5));
}

TEST_CASE("intersect") {
    Interval a = Interval::make(0.0, 0.5);
    Interval b = Interval::make(0.3, 0.9);
    Interval c = a.intersect(b);
    CHECK(c.lo == doctest::Approx(0.3));
    CHECK(c.hi == doctest::Approx(0.5));

    // touching endpoints leave a point, not empty
    Interval touch = a.intersect(Interval::make(0.5, 0.8));
    CHECK(!touch.empty);
    CHECK(touch.width() == 0.0);

    CHECK(a.intersect(Interval::make(0.6, 0.8)).empty);
    CHECK(a.intersect(Interval::none()).empty);
    CHECK(Interval::none().intersect(a).empty);
}
