#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "tdho/auxiliary.hpp"
#include "tdho/errors.hpp"
#include "tdho/model.hpp"

using namespace tdho;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr cplx I{0.0, 1.0};
const double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double modulated_g2(double tp) { return 0.5 * (1.0 + 0.2 * std::sin(tp)); }

// Fixed-step RK4 on (xi, xi') for g2 = modulated_g2, returning samples every `stride` steps.
std::vector<std::array<cplx, 2>> rk4_reference(double t1, long steps, long stride) {
    std::array<cplx, 2> y{kInvSqrt2, I * kInvSqrt2};
    const double h = t1 / static_cast<double>(steps);
    auto f = [](double t, const std::array<cplx, 2>& s) {
        return std::array<cplx, 2>{s[1], -2.0 * modulated_g2(t) * s[0]};
    };
    std::vector<std::array<cplx, 2>> out{y};
    for (long i = 0; i < steps; ++i) {
        const double t = i * h;
        const auto k1 = f(t, y);
        const auto k2 = f(t + h / 2, {y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
        const auto k3 = f(t + h / 2, {y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
        const auto k4 = f(t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
        for (int j = 0; j < 2; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if ((i + 1) % stride == 0) out.push_back(y);
    }
    return out;
}

// Caldirola-Kanai, lambda = 1/2, omega = 1: in u = 1 - t' the equation becomes
// xi_uu + xi / u^2 = 0 with solutions u^s, s = 1/2 +- i sqrt(3)/2.
struct CkExact {
    cplx s1{0.5, std::sqrt(3.0) / 2.0}, s2{0.5, -std::sqrt(3.0) / 2.0};
    cplx a, b;
    CkExact() {
        const cplx xi0 = kInvSqrt2, xid0 = I * kInvSqrt2;
        // a + b = xi0, -(a s1 + b s2) = xid0
        b = (-xid0 - s1 * xi0) / (s2 - s1);
        a = xi0 - b;
    }
    cplx xi_of_t(double t) const { return a * std::exp(-s1 * t) + b * std::exp(-s2 * t); }
    cplx xi_dot_of_t(double t) const {
        return -(a * s1 * std::exp(-(s1 - 1.0) * t) + b * s2 * std::exp(-(s2 - 1.0) * t));
    }
};

}  // namespace

TEST_CASE("default initial conditions") {
    const auto a = default_ic(0.5);
    CHECK_THAT(a.xi0.real(), WithinAbs(kInvSqrt2, 1e-16));
    CHECK_THAT(a.xi_dot0.imag(), WithinAbs(kInvSqrt2, 1e-16));
    const auto b = default_ic(2.0);
    CHECK_THAT(std::abs(b.xi0 - 0.5), WithinAbs(0.0, 1e-16));
    CHECK_THAT(std::abs(b.xi_dot0 - I), WithinAbs(0.0, 1e-15));
    const auto c = default_ic(-1.0);
    CHECK_THAT(std::abs(c.xi0 - kInvSqrt2), WithinAbs(0.0, 1e-16));
    for (const auto& ic : {a, b, c}) CHECK(std::abs(ic.wronskian() + I) < 1e-15);
}

TEST_CASE("initial conditions must satisfy the Wronskian") {
    AuxInitialConditions bad{1.0, I};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(solve_xi([](double) { return 0.5; }, {0.0, 1.0}, bad), ValidationError);
}

TEST_CASE("harmonic solution is the plane wave") {
    const auto sol = solve_xi([](double) { return 0.5; }, {0.0, 2.0 * kPi}, default_ic(0.5));
    const AuxPoint p = sol.at(kPi);
    CHECK(std::abs(p.xi - cplx(-kInvSqrt2, 0.0)) < 1e-10);
    CHECK_THAT(p.theta, WithinAbs(kPi, 1e-10));
    double worst = 0.0;
    for (const auto& n : sol.nodes()) worst = std::max(worst, std::abs(n.xi - kInvSqrt2 * std::exp(I * n.s)));
    CHECK(worst < 1e-10);
    CHECK(sol.max_wronskian_residual() < 1e-9);
}

TEST_CASE("free particle solution is linear") {
    const auto sol = solve_xi([](double) { return 0.0; }, {0.0, 10.0}, {kInvSqrt2, I * kInvSqrt2});
    for (double t : {0.5, 1.0, 7.3}) {
        CHECK(std::abs(sol.at(t).xi - (1.0 + I * t) * kInvSqrt2) < 1e-12);
        CHECK(sol.at(t).wronskian_residual() < 1e-12);
    }
    const PhiValues phi = phi_values(sol.at(1.0));
    CHECK_THAT(phi.phi3, WithinAbs(2.0, 1e-12));
    CHECK_THAT(phi.phi3_dot, WithinAbs(2.0, 1e-12));
}

TEST_CASE("modulated solution matches a fine fixed-step RK4") {
    const auto sol = solve_xi(modulated_g2, {0.0, 20.0}, default_ic(0.5));
    const long steps = 1000000, stride = 5000;
    const auto ref = rk4_reference(20.0, steps, stride);
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        const double t = 20.0 * static_cast<double>(k * stride) / steps;
        const AuxPoint p = sol.at(t);
        worst = std::max({worst, std::abs(p.xi - ref[k][0]), std::abs(p.xi_dot - ref[k][1])});
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("phi functions of the harmonic solution") {
    const auto sol = solve_xi([](double) { return 0.5; }, {0.0, 10.0}, default_ic(0.5));
    for (double t : {0.0, 1.3, 6.0}) {
        const PhiValues phi = phi_values(sol.at(t));
        CHECK_THAT(phi.phi3, WithinAbs(1.0, 1e-10));
        CHECK_THAT(phi.phi3_dot, WithinAbs(0.0, 1e-10));
        CHECK(std::abs(phi.phi1 - 0.5 * std::exp(2.0 * I * t)) < 1e-10);
        CHECK(phi.phi2 == std::conj(phi.phi1));
    }
}

TEST_CASE("derivative identities hold for the modulated solution") {
    const auto sol = solve_xi(modulated_g2, {0.0, 20.0}, default_ic(0.5));
    const double h = 1e-4;
    for (double t : {1.0, 4.4, 9.9, 17.2}) {
        const AuxPoint m = sol.at(t - h), c = sol.at(t), p = sol.at(t + h);
        const PhiValues pm = phi_values(m), pc = phi_values(c), pp = phi_values(p);
        CHECK_THAT((pp.phi3 - pm.phi3) / (2 * h), WithinAbs(pc.phi3_dot, 1e-6));
        CHECK_THAT((pp.phi3_dot - pm.phi3_dot) / (2 * h), WithinRel(pc.phi3_ddot, 1e-6));
        const cplx xi_ddot = (p.xi_dot - m.xi_dot) / (2 * h);
        CHECK(std::abs(xi_ddot + 2.0 * c.g2 * c.xi) < 1e-6 * std::abs(xi_ddot));
    }
    double closure = 0.0;
    for (const auto& n : sol.nodes()) {
        const PhiValues phi = phi_values(n);
        closure = std::max(closure, std::abs(I * n.xi - (phi.phi3 * n.xi_dot - 0.5 * phi.phi3_dot * n.xi)));
    }
    CHECK(closure < 1e-9);
}

TEST_CASE("phase is unwrapped continuously") {
    const auto sol = solve_xi([](double) { return 0.5; }, {0.0, 100.0}, default_ic(0.5), 4096);
    const auto& nodes = sol.nodes();
    for (std::size_t k = 1; k < nodes.size(); ++k) CHECK(std::abs(nodes[k].theta - nodes[k - 1].theta) < kPi);
    CHECK_THAT(nodes.back().theta, WithinAbs(100.0, 1e-8));
}

TEST_CASE("sparse output sampling is rejected") {
    CHECK_THROWS_AS(solve_xi([](double) { return 50.0; }, {0.0, 100.0}, default_ic(50.0), 10), SamplingError);
}

TEST_CASE("Wronskian drift beyond tolerance is an accuracy error") {
    SolveOptions loose;
    loose.rtol = 1e-4;
    loose.wronskian_tol = 1e-12;
    CHECK_THROWS_AS(solve_xi(modulated_g2, {0.0, 50.0}, default_ic(0.5), 2048, loose), AccuracyError);
}

TEST_CASE("Caldirola-Kanai solution matches the Euler-equation closed form") {
    const CkExact exact;
    const Model model = build_model(presets::caldirola_kanai(0.5, 1.0), 8.0);
    REQUIRE(model.map);
    for (double t : {0.3, 1.0, 2.5, 6.0, 8.0}) {
        const AuxPoint p = model.aux->hatted(t);
        CHECK(std::abs(p.xi - exact.xi_of_t(t)) < 1e-9 * std::abs(exact.xi_of_t(t)));
        CHECK(std::abs(p.xi_dot - exact.xi_dot_of_t(t)) < 1e-9 * std::abs(exact.xi_dot_of_t(t)));
    }
    // t = 1 sits at t' = 1 - 1/e.
    const AuxPoint q = model.aux->at_tprime(1.0 - std::exp(-1.0));
    CHECK(std::abs(q.xi - exact.xi_of_t(1.0)) < 1e-9);
}

TEST_CASE("Caldirola-Kanai over long spans uses the mass clock") {
    const CkExact exact;
    const double t_end = 10.0 * natural_period(presets::caldirola_kanai());
    const Model model = build_model(presets::caldirola_kanai(), t_end);
    CHECK(model.aux->clock() == Clock::tm);
    CHECK(model.aux->max_wronskian_residual() < 1e-9);
    const AuxPoint p = model.aux->hatted(t_end);
    CHECK(std::abs(p.xi - exact.xi_of_t(t_end)) < 1e-8 * std::abs(exact.xi_of_t(t_end)));
}

TEST_CASE("hatted values obey the chain rule") {
    SystemSpec s = presets::modulated();
    s.nu = TimeProfile::sinusoidal(0.0, 0.3, 0.7);
    const Model model = build_model(s, 15.0);
    const double h = 1e-4;
    for (double t : {0.8, 5.0, 12.5}) {
        const cplx fd = (model.aux->hatted(t + h).xi - model.aux->hatted(t - h).xi) / (2 * h);
        const cplx expected = std::exp(-2.0 * eval_nu(s, t)) * model.aux->hatted(t).xi_dot;
        CHECK(std::abs(fd - expected) < 1e-6 * std::abs(expected));
    }
}

TEST_CASE("hatted values equal oscillator values when nu vanishes") {
    const Model model = build_model(presets::modulated(), 10.0);
    for (double t : {0.0, 3.1, 9.7}) {
        const AuxPoint a = model.aux->hatted(t), b = model.aux->at_tprime(t);
        CHECK(a.xi == b.xi);
        CHECK(a.xi_dot == b.xi_dot);
    }
}

TEST_CASE("mass-clock and oscillator-clock integrations agree") {
    SystemSpec s = presets::harmonic();
    s.nu = TimeProfile::sinusoidal(0.0, 0.25, 1.0);
    ModelOptions to_opts;
    to_opts.clock = Clock::to;
    ModelOptions tm_opts;
    tm_opts.clock = Clock::tm;
    const Model a = build_model(s, 12.0, to_opts);
    const Model b = build_model(s, 12.0, tm_opts);
    for (double t : {1.0, 6.0, 11.5}) {
        CHECK(std::abs(a.aux->hatted(t).xi - b.aux->hatted(t).xi) < 1e-9);
        CHECK(std::abs(a.aux->hatted(t).xi_dot - b.aux->hatted(t).xi_dot) < 1e-9);
    }
}

TEST_CASE("out-of-span evaluation is a domain error") {
    const auto sol = solve_xi([](double) { return 0.5; }, {0.0, 2.0}, default_ic(0.5));
    CHECK_THROWS_AS(sol.at(2.5), DomainError);
    const Model model = build_model(presets::caldirola_kanai(), 4.0);
    CHECK_THROWS_AS(model.aux->hatted(5.0), DomainError);
}

TEST_CASE("Wronskian is conserved over ten natural periods for every test profile") {
    for (const char* name : {"harmonic", "free", "caldirola-kanai", "modulated"}) {
        const SystemSpec s = presets::by_name(name);
        const Model model = build_model(s, s.t0 + 10.0 * natural_period(s));
        INFO(name);
        CHECK(model.aux->max_wronskian_residual() <= 1e-9);
        for (const auto& n : model.aux->nodes()) CHECK(n.wronskian_residual() <= 1e-9);
    }
}
