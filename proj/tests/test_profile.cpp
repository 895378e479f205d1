#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "tdho/config.hpp"
#include "tdho/errors.hpp"
#include "tdho/profile.hpp"
#include "tdho/time_map.hpp"

using namespace tdho;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("constant and linear profiles evaluate analytically") {
    SystemSpec s;
    s.nu = TimeProfile::constant(0.0);
    CHECK(eval_nu(s, 3.7) == 0.0);
    CHECK(eval_h(s, 3.7) == 0.0);
    s.nu = TimeProfile::linear(0.0, 0.5);
    CHECK(eval_nu(s, 2.0) == 1.0);
    CHECK(eval_nu_dot(s, 2.0) == 0.5);
    CHECK(eval_h(s, 2.0) == -1.0);
}

TEST_CASE("sinusoidal and polynomial derivatives") {
    const auto p = TimeProfile::sinusoidal(0.1, 0.25, 2.0, 0.3);
    CHECK_THAT(p(1.1), WithinAbs(0.1 + 0.25 * std::sin(2.2 + 0.3), 1e-15));
    CHECK_THAT(p.derivative(1.1), WithinAbs(0.5 * std::cos(2.2 + 0.3), 1e-15));
    const auto q = TimeProfile::polynomial({1.0, -2.0, 0.5, 0.25});
    CHECK_THAT(q(2.0), WithinAbs(1.0 - 4.0 + 2.0 + 2.0, 1e-14));
    CHECK_THAT(q.derivative(2.0), WithinAbs(-2.0 + 2.0 + 3.0, 1e-14));
}

TEST_CASE("tabulated profile reproduces its generator off the nodes") {
    std::vector<double> t(101), v(101);
    for (int i = 0; i <= 100; ++i) {
        t[i] = 0.03 * i;
        v[i] = 0.5 * t[i];
    }
    const auto lin = TimeProfile::tabulated(t, v);
    CHECK_THAT(lin(1.3), WithinAbs(0.65, 1e-8));
    CHECK_THAT(lin(1.3 + 0.011), WithinAbs(0.5 * 1.311, 1e-8));

    // Monotone cubic is third order away from extrema and second order at them.
    auto sine_error = [](int n) {
        std::vector<double> ts(n + 1), vs(n + 1);
        for (int i = 0; i <= n; ++i) {
            ts[i] = 3.0 * i / n;
            vs[i] = std::sin(ts[i]);
        }
        const auto cub = TimeProfile::tabulated(ts, vs);
        double worst = 0.0;
        for (int i = 0; i < 997; ++i) {
            const double x = 0.1 + 2.8 * i / 997.0;
            worst = std::max(worst, std::abs(cub(x) - std::sin(x)));
        }
        return worst;
    };
    const double e1 = sine_error(100), e2 = sine_error(200);
    CHECK(e1 < 1e-4);
    CHECK(e1 / e2 > 3.5);
}

TEST_CASE("monotone cubic does not overshoot a step") {
    const auto p = TimeProfile::tabulated({0, 1, 2, 3, 4}, {0, 0, 1, 1, 1});
    for (int i = 0; i <= 400; ++i) {
        const double y = p(0.01 * i);
        CHECK(y >= -1e-15);
        CHECK(y <= 1.0 + 1e-15);
    }
}

TEST_CASE("linear tabulated derivative falls back to differences") {
    const auto p = TimeProfile::tabulated({0, 1, 2, 3}, {0, 2, 4, 6}, Interpolation::linear);
    CHECK_FALSE(p.has_analytic_derivative());
    CHECK_THAT(p.derivative(1.5), WithinAbs(2.0, 1e-8));
}

TEST_CASE("tabulated profile rejects bad samples") {
    CHECK_THROWS_AS(TimeProfile::tabulated({0, 1, 1}, {0, 1, 2}), ValidationError);
    CHECK_THROWS_AS(TimeProfile::tabulated({0, 1}, {0, NAN}), ValidationError);
    CHECK_THROWS_AS(TimeProfile::tabulated({0}, {0}), ValidationError);
}

TEST_CASE("evaluation outside the domain is a domain error") {
    SystemSpec s;
    s.nu = TimeProfile::linear(0.0, 1.0, {0.0, 2.0});
    CHECK_THROWS_AS(eval_nu(s, 2.5), DomainError);
    CHECK_NOTHROW(eval_nu(s, 2.0));
}

TEST_CASE("spec validation names the violated invariant") {
    SystemSpec s;
    s.nu = TimeProfile::constant(0.0, {1.0, 2.0});
    s.t0 = 0.0;
    try {
        s.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("SystemSpec.") == 0);
    }
}

TEST_CASE("h integrates back to nu") {
    SystemSpec s;
    s.nu = TimeProfile::sinusoidal(0.0, 0.25, 1.0);
    // Simpson on -1/2 int h.
    const int n = 2000;
    const double a = 0.0, b = 2.0, hstep = (b - a) / n;
    double acc = eval_h(s, a) + eval_h(s, b);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * eval_h(s, a + i * hstep);
    const double integral = acc * hstep / 3.0;
    CHECK_THAT(-0.5 * integral, WithinAbs(eval_nu(s, b) - eval_nu(s, a), 1e-12));
}

TEST_CASE("natural period") {
    CHECK_THAT(natural_period(presets::harmonic(2.0)), WithinRel(std::numbers::pi, 1e-15));
    CHECK_THAT(natural_period(presets::free_particle()), WithinRel(2.0 * std::numbers::pi, 1e-15));
    // Omega^2 = 1 - 0.25
    CHECK_THAT(natural_period(presets::caldirola_kanai()), WithinRel(2.0 * std::numbers::pi / std::sqrt(0.75), 1e-15));
}

TEST_CASE("g2 in the oscillator clock") {
    const SystemSpec h = presets::harmonic();
    const TimeMap id = TimeMap::build(h, 10.0);
    CHECK(eval_g2_of_tprime(h, id, 3.3) == 0.5);

    const SystemSpec f = presets::free_particle();
    CHECK(eval_g2_of_tprime(f, TimeMap::build(f, 5.0), 2.0) == 0.0);

    const SystemSpec ck = presets::caldirola_kanai(0.5, 1.0);
    const TimeMap map = TimeMap::build(ck, 6.0);
    // t(t') = -ln(1 - t') / (2 lambda), e^{4 nu} = (1 - t')^{-2}
    const double tp = 0.5;
    CHECK_THAT(eval_g2_of_tprime(ck, map, tp), WithinRel(0.5 / ((1 - tp) * (1 - tp)), 1e-10));
    CHECK_THROWS_AS(eval_g2_of_tprime(ck, map, 1.2), DomainError);
}

TEST_CASE("spec JSON round trip and hash") {
    const nlohmann::json j = nlohmann::json::parse(R"({
        "t0": 0.5,
        "nu": {"family": "linear", "params": {"intercept": 0, "slope": 0.5}, "domain": [0, 50]},
        "h2": {"family": "sinusoidal", "params": {"offset": 0.5, "amplitude": 0.1, "frequency": 1, "phase": 0}}
    })");
    const SystemSpec s = spec_from_json(j);
    CHECK(s.t0 == 0.5);
    CHECK(eval_nu(s, 2.0) == 1.0);
    const SystemSpec back = spec_from_json(spec_to_json(s));
    CHECK(spec_hash(back) == spec_hash(s));
    CHECK(spec_hash(s).size() == 16);
    CHECK(spec_hash(s) != spec_hash(presets::harmonic()));
    CHECK_THAT(eval_h2(back, 1.3), WithinAbs(eval_h2(s, 1.3), 0.0));
}

TEST_CASE("numbers are constant profiles and bad families are rejected") {
    const SystemSpec s = spec_from_json(nlohmann::json::parse(R"({"nu": 0, "h2": 2.0})"));
    CHECK(s.nu_is_zero());
    CHECK(eval_h2(s, 10.0) == 2.0);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"nu": {"family": "bogus"}})")), ValidationError);
}

TEST_CASE("tabulated profile from CSV") {
    const auto dir = std::filesystem::temp_directory_path() / "tdho_profile_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "nu.csv");
        f << "time,value\n";
        for (int i = 0; i <= 50; ++i) f << 0.1 * i << ',' << 0.05 * i << '\n';
    }
    {
        std::ofstream f(dir / "spec.json");
        f << R"({"nu": {"family": "tabulated", "params": {"csv": "nu.csv"}, "interpolation": "linear"}, "h2": 0.5})";
    }
    const SystemSpec s = load_spec_file((dir / "spec.json").string());
    CHECK_THAT(eval_nu(s, 2.05), WithinAbs(1.025, 1e-12));
    CHECK_THROWS_AS(load_spec_file((dir / "missing.json").string()), ValidationError);
}

TEST_CASE("preset lookup") {
    CHECK(presets::by_name("ck").nu.family() == ProfileFamily::linear);
    CHECK(presets::by_name("modulated").h2.family() == ProfileFamily::sinusoidal);
    CHECK_THROWS_AS(presets::by_name("nope"), ValidationError);
}
