#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "helpers.hpp"
#include "lvstor/battery.hpp"

using namespace lvstor;
using namespace lvstor::testing;

TEST_CASE("full charge and discharge times") {
    const auto pw1 = make_pw1();
    CHECK(full_charge_time(pw1) == doctest::Approx(1.5127).epsilon(1e-4));
    CHECK(full_discharge_time(pw1) == doctest::Approx(1.5127).epsilon(1e-4));

    auto degenerate = pw1;
    degenerate.b_max = degenerate.b_min;
    CHECK(full_charge_time(degenerate) == 0.0);

    auto slow = pw1;
    slow.delta_max = 0.5;
    CHECK(full_charge_time(slow) == doctest::Approx(9.984).epsilon(1e-12));
}

TEST_CASE("grid power of a stored delta") {
    auto spec = make_pw1();
    CHECK(grid_power_of_delta(1.0, 1.0, spec) == doctest::Approx(1.0 / 0.95).epsilon(1e-12));
    CHECK(grid_power_of_delta(-1.0, 1.0, spec) == doctest::Approx(-0.95).epsilon(1e-12));
    CHECK(grid_power_of_delta(0.0, 1.0, spec) == 0.0);

    CHECK_THROWS_WITH_AS(grid_power_of_delta(4.0, 1.0, spec),
                         doctest::Contains("delta_max"), ConstraintError);
    CHECK_THROWS_WITH_AS(grid_power_of_delta(-4.0, 1.0, spec),
                         doctest::Contains("delta_min"), ConstraintError);
}

TEST_CASE("grid power is monotone with a kink only at zero") {
    const auto spec = make_pw1();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-3.3, 3.3);
    for (int i = 0; i < 200; ++i) {
        double a = dist(rng), b = dist(rng);
        if (a > b) std::swap(a, b);
        CHECK(grid_power_of_delta(a, 1.0, spec) <= grid_power_of_delta(b, 1.0, spec) + 1e-12);
    }
    // Constant slope on each side of zero.
    const double pos_slope =
        (grid_power_of_delta(2.0, 1.0, spec) - grid_power_of_delta(1.0, 1.0, spec)) / 1.0;
    const double pos_slope2 =
        (grid_power_of_delta(3.0, 1.0, spec) - grid_power_of_delta(2.0, 1.0, spec)) / 1.0;
    const double neg_slope =
        (grid_power_of_delta(-1.0, 1.0, spec) - grid_power_of_delta(-2.0, 1.0, spec)) / 1.0;
    CHECK(pos_slope == doctest::Approx(pos_slope2).epsilon(1e-12));
    CHECK(pos_slope != doctest::Approx(neg_slope).epsilon(1e-6));
}

TEST_CASE("delta of grid power inverts the efficiency mapping") {
    const auto spec = make_pw1();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.5, 1.5); // ramp stays in bounds at h=0.5
    for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        const double p = grid_power_of_delta(x, 0.5, spec);
        CHECK(delta_of_grid_power(p, 0.5, spec) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("round-trip efficiency loss") {
    const auto spec = make_pw1();
    const double x = 2.0;
    const double grid_in = grid_power_of_delta(x, 1.0, spec) * 1.0;
    const double grid_out = -grid_power_of_delta(-x, 1.0, spec) * 1.0;
    CHECK(grid_out / grid_in == doctest::Approx(0.95 * 0.95).epsilon(1e-12));
    CHECK(grid_out < grid_in);
}

TEST_CASE("reactive headroom") {
    auto spec = make_pw1();
    spec.s_b_max = 5.0;
    CHECK(reactive_headroom(3.0, spec) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(reactive_headroom(5.0, spec) == doctest::Approx(0.0));
    CHECK(reactive_headroom(0.0, spec) == doctest::Approx(5.0));
    CHECK_THROWS_AS(reactive_headroom(5.1, spec), ConstraintError);

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const double p = dist(rng);
        const double q = reactive_headroom(p, spec);
        CHECK(q * q + p * p == doctest::Approx(25.0).epsilon(1e-12));
    }
}

TEST_CASE("power factor") {
    CHECK(power_factor(1.0, 0.0) == doctest::Approx(1.0));
    CHECK(power_factor(0.92, 0.39192) == doctest::Approx(0.92).epsilon(1e-4));
    CHECK(power_factor(-1.0, 0.0) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(power_factor(0.0, 0.0), DomainError);
}

TEST_CASE("charge recursion does not drift") {
    const auto spec = make_pw1();
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double b = spec.b_min;
    double sum = 0.0;
    double total_moved = 0.0;
    const int steps = 100000;
    for (int i = 0; i < steps; ++i) {
        const double lo = std::max(spec.delta_min * 0.25, spec.b_min - b);
        const double hi = std::min(spec.delta_max * 0.25, spec.b_max - b);
        const double x = lo + (hi - lo) * uni(rng);
        b += x;
        sum += x;
        total_moved += std::abs(x);
        REQUIRE(b >= spec.b_min - 1e-9);
        REQUIRE(b <= spec.b_max + 1e-9);
    }
    CHECK(std::abs(sum - (b - spec.b_min)) <= 1e-9 * std::max(1.0, total_moved));
}

TEST_CASE("battery spec validation") {
    auto bad = make_pw1();
    bad.b_min = 7.0; // above b_max
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = make_pw1();
    bad.delta_min = 0.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = make_pw1();
    bad.eta_ch = 1.2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    CHECK_NOTHROW(make_pw1().validate());
    CHECK_NOTHROW(make_pw2().validate());
    CHECK_NOTHROW(make_null_battery().validate());
}

TEST_CASE("soc accessors derive from the charge window") {
    const auto pw1 = make_pw1();
    CHECK(pw1.soc_min() == doctest::Approx(0.2));
    CHECK(pw1.soc_max() == doctest::Approx(0.98));
    CHECK(pw1.usable_kwh() == doctest::Approx(4.992));
}
