#include <catch2/catch_amalgamated.hpp>

#include "laneguard/core.hpp"

using namespace laneguard;
using Catch::Approx;

TEST_CASE("flow_rate extrapolates interval counts to vehicles per hour") {
    CHECK(flow_rate(5, 30) == Approx(600.0));
    CHECK(flow_rate(0, 30) == Approx(0.0));
    CHECK(flow_rate(12, 30) == Approx(1440.0));
    CHECK(flow_rate(10, 60) == Approx(600.0));
}

TEST_CASE("flow_rate is linear in count") {
    for (int a : {0, 1, 3, 7, 19}) {
        for (int b : {0, 2, 5, 11}) {
            CHECK(flow_rate(a + b) == Approx(flow_rate(a) + flow_rate(b)));
        }
    }
}

TEST_CASE("flow_rate rejects bad arguments") {
    CHECK_THROWS_AS(flow_rate(5, 0), Error);
    CHECK_THROWS_AS(flow_rate(5, -30), Error);
    CHECK_THROWS_AS(flow_rate(-1, 30), Error);
}

TEST_CASE("truck_percentage basics") {
    CHECK(truck_percentage(2, 8) == Approx(25.0));
    CHECK(truck_percentage(0, 0) == 0.0);  // empty interval counts as 0 %
    CHECK(truck_percentage(7, 7) == Approx(100.0));
    CHECK_THROWS_AS(truck_percentage(5, 3), Error);
}

TEST_CASE("truck_percentage stays within [0,100]") {
    for (int c = 0; c <= 20; ++c) {
        for (int t = 0; t <= c; ++t) {
            const double p = truck_percentage(t, c);
            CHECK(p >= 0.0);
            CHECK(p <= 100.0);
        }
    }
}

TEST_CASE("average_occupancy sums height ratios per frame") {
    const std::vector<double> two{50.0, 100.0};
    CHECK(average_occupancy(two, 200.0, 2) == Approx(0.375));
    CHECK(average_occupancy(std::vector<double>{}, 200.0, 10) == 0.0);

    // Independent summation oracle for the third example.
    const std::vector<double> three{120.0, 60.0, 60.0};
    double oracle = 0.0;
    for (double h : three) oracle += h / 240.0;
    oracle /= 4.0;
    CHECK(average_occupancy(three, 240.0, 4) == Approx(oracle));
    CHECK(average_occupancy(three, 240.0, 4) == Approx(0.25));
}

TEST_CASE("average_occupancy scales inversely with frame count") {
    const std::vector<double> heights{30.0, 80.0, 45.0};
    const double once = average_occupancy(heights, 200.0, 3);
    const double twice = average_occupancy(heights, 200.0, 6);
    CHECK(once == Approx(2.0 * twice));
}

TEST_CASE("average_occupancy rejects bad arguments") {
    const std::vector<double> h{10.0};
    CHECK_THROWS_AS(average_occupancy(h, 0.0, 1), Error);
    CHECK_THROWS_AS(average_occupancy(h, -5.0, 1), Error);
    CHECK_THROWS_AS(average_occupancy(h, 200.0, 0), Error);
    const std::vector<double> too_tall{500.0};
    CHECK_THROWS_AS(average_occupancy(too_tall, 200.0, 1), Error);
}

TEST_CASE("hour_group buckets") {
    CHECK(hour_group(3) == TimeOfDayGroup::Night);
    CHECK(hour_group(13) == TimeOfDayGroup::Afternoon);
    CHECK(hour_group(23) == TimeOfDayGroup::Evening);
    CHECK(hour_group(0) == TimeOfDayGroup::Night);
    CHECK(hour_group(5) == TimeOfDayGroup::Night);
    CHECK(hour_group(6) == TimeOfDayGroup::Morning);
    CHECK(hour_group(11) == TimeOfDayGroup::Morning);
    CHECK(hour_group(12) == TimeOfDayGroup::Afternoon);
    CHECK(hour_group(17) == TimeOfDayGroup::Afternoon);
    CHECK(hour_group(18) == TimeOfDayGroup::Evening);
    CHECK_THROWS_AS(hour_group(-1), Error);
    CHECK_THROWS_AS(hour_group(24), Error);
}

TEST_CASE("hour_group preimages partition the day") {
    int counts[kGroupCount] = {0, 0, 0, 0};
    for (int h = 0; h < 24; ++h) ++counts[static_cast<int>(hour_group(h))];
    for (int g = 0; g < kGroupCount; ++g) CHECK(counts[g] == 6);
}

TEST_CASE("local_hour applies the UTC offset") {
    CHECK(local_hour(0, 0) == 0);
    CHECK(local_hour(13 * 3600, 0) == 13);
    CHECK(local_hour(13 * 3600, -5) == 8);
    CHECK(local_hour(2 * 3600, -5) == 21);  // wraps to previous day
    CHECK(local_hour(23 * 3600, 3) == 2);
}

TEST_CASE("LaneSample validation") {
    LaneSample s;
    s.key = {"cam", 1, 2};
    s.interval_start = 300;
    s.count = 4;
    s.truck_count = 1;
    s.occupancy = 0.3;
    CHECK_FALSE(s.validate());

    SECTION("truck count above count") {
        s.truck_count = 5;
        CHECK_THROWS_AS(s.validate(), Error);
    }
    SECTION("misaligned timestamp") {
        s.interval_start = 301;
        CHECK_THROWS_AS(s.validate(), Error);
    }
    SECTION("occupancy above 2 is corrupt") {
        s.occupancy = 2.5;
        CHECK_THROWS_AS(s.validate(), Error);
    }
    SECTION("occupancy in (1,2] is a warning, not an error") {
        s.occupancy = 1.4;
        CHECK(s.validate());
    }
    SECTION("lane sign must match direction") {
        s.key.lane = -2;
        CHECK_THROWS_AS(s.validate(), Error);
    }
    SECTION("zero direction rejected") {
        s.key.direction = 0;
        CHECK_THROWS_AS(s.validate(), Error);
    }
}
