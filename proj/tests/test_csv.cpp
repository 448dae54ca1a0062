#include <doctest.h>

#include <cmath>
#include <limits>

#include "spdnn/csv.hpp"
#include "spdnn/rng.hpp"

using namespace spdnn;

TEST_CASE("format_double round-trips exactly") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-30.0, 30.0));
        double back = 0.0;
        REQUIRE(parse_double(format_double(v), back));
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("non-finite values format as nan and inf") {
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    double v = 0.0;
    CHECK(parse_double("nan", v));
    CHECK(std::isnan(v));
}

TEST_CASE("split_csv_line trims fields and keeps empties") {
    const auto f = split_csv_line(" a, b ,,c\r");
    REQUIRE(f.size() == 4);
    CHECK(f[0] == "a");
    CHECK(f[1] == "b");
    CHECK(f[2].empty());
    CHECK(f[3] == "c");
}

TEST_CASE("parse_double rejects partial numbers") {
    double v = 0.0;
    CHECK_FALSE(parse_double("1.5x", v));
    CHECK_FALSE(parse_double("", v));
    CHECK(parse_double("-2.5e3", v));
    CHECK(v == -2500.0);
}
