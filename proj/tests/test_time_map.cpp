#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tdho/errors.hpp"
#include "tdho/time_map.hpp"

using namespace tdho;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SystemSpec sine_nu() {
    SystemSpec s;
    s.nu = TimeProfile::sinusoidal(0.0, 0.25, 1.0);
    return s;
}

}  // namespace

TEST_CASE("zero nu gives the identity map") {
    const TimeMap map = TimeMap::build(presets::harmonic(), 10.0);
    CHECK(map.is_identity());
    CHECK(map.forward(0.7) == 0.7);
    CHECK(map.inverse(0.7) == 0.7);
}

TEST_CASE("linear nu has a closed-form map") {
    const double lambda = 0.5;
    const TimeMap map = TimeMap::build(presets::caldirola_kanai(lambda), 8.0);
    CHECK_THAT(map.forward(1.0), WithinAbs(1.0 - std::exp(-1.0), 1e-14));
    CHECK_THAT(map.inverse(1.0 - std::exp(-1.0)), WithinAbs(1.0, 1e-9));
    for (double t : {0.1, 0.77, 2.5, 5.0, 7.9}) {
        CHECK_THAT(map.forward(t), WithinAbs((1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda), 1e-14));
        const double tp = (1.0 - std::exp(-2.0 * lambda * t)) / (2.0 * lambda);
        CHECK_THAT(map.inverse(tp), WithinRel(-std::log(1.0 - 2.0 * lambda * tp) / (2.0 * lambda), 1e-9));
    }
}

TEST_CASE("quadrature agrees with a brute-force Riemann sum") {
    const SystemSpec s = sine_nu();
    const TimeMap map = TimeMap::build(s, 4.0);
    const int n = 1000000;
    const double h = 2.0 / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::exp(-2.0 * eval_nu(s, (i + 0.5) * h));
    CHECK_THAT(map.forward(2.0), WithinAbs(acc * h, 1e-9));
}

TEST_CASE("round trip over random points") {
    const SystemSpec s = sine_nu();
    const TimeMap map = TimeMap::build(s, 20.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    double worst = 0.0, worst_back = 0.0;
    const double span = map.tprime_range().span();
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng);
        worst = std::max(worst, std::abs(map.inverse(map.forward(t)) - t));
        const double y = map.tprime_range().lo + span * (t / 20.0);
        worst_back = std::max(worst_back, std::abs(map.forward(map.inverse(y)) - y));
    }
    CHECK(worst < 1e-10);
    CHECK(worst_back < 1e-10 * span);
    for (std::size_t k = 0; k < map.t_nodes().size(); ++k) {
        CHECK(std::abs(map.inverse(map.tprime_nodes()[k]) - map.t_nodes()[k]) < 1e-10);
    }
}

TEST_CASE("nodes are strictly increasing and the rate matches differences") {
    const SystemSpec s = sine_nu();
    const TimeMap map = TimeMap::build(s, 12.0, 500);
    const auto& tp = map.tprime_nodes();
    for (std::size_t k = 1; k < tp.size(); ++k) CHECK(tp[k] > tp[k - 1]);
    for (double t : {0.5, 3.3, 7.1, 11.0}) {
        const double h = 1e-4;
        const double fd = (map.forward(t + h) - map.forward(t - h)) / (2.0 * h);
        CHECK_THAT(fd, WithinRel(std::exp(-2.0 * eval_nu(s, t)), 1e-6));
        CHECK_THAT(map.rate(t), WithinRel(std::exp(-2.0 * eval_nu(s, t)), 1e-15));
    }
}

TEST_CASE("custom origin shifts the oscillator clock") {
    const TimeMap map = TimeMap::build(sine_nu(), 5.0, 256, 3.0);
    CHECK(map.forward(0.0) == 3.0);
    CHECK_THAT(map.inverse(3.0), WithinAbs(0.0, 1e-12));
}

TEST_CASE("out-of-range arguments are domain errors") {
    const TimeMap map = TimeMap::build(sine_nu(), 5.0);
    CHECK_THROWS_AS(map.forward(5.5), DomainError);
    CHECK_THROWS_AS(map.forward(-0.5), DomainError);
    CHECK_THROWS_AS(map.inverse(map.tprime_range().hi + 0.1), DomainError);
}

TEST_CASE("saturating maps are rejected") {
    CHECK_THROWS_AS(TimeMap::build(presets::caldirola_kanai(0.5), 100.0), ValidationError);
}

TEST_CASE("non-finite nu is an evaluation error") {
    SystemSpec s;
    s.nu = TimeProfile::linear(0.0, -400.0);
    CHECK_THROWS_AS(TimeMap::build(s, 5.0), EvaluationError);
}
