#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdho/config.hpp"
#include "tdho/errors.hpp"
#include "tdho/model.hpp"
#include "tdho/operators.hpp"
#include "tdho/propagator.hpp"
#include "tdho/states.hpp"

namespace tdho::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Common {
    std::string spec_path;
    std::string spec_json;
    std::string preset;
    std::string config;
    std::string output;
    std::string format = "csv";
    std::optional<double> t_end;
    std::string clock = "auto";
    long long seed = 0;  // reserved
    std::string base_dir = ".";
};

struct StateOptions {
    std::string frame = "to";
    std::string kind = "number";
    int n = 0;
    double x0 = 0.0, p0 = 0.0, r = 0.0, theta = 0.0;
    std::optional<double> time;
    std::size_t grid = 1025;
    std::optional<double> xmin, xmax;
    std::string route = "dilation";
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--spec", c.spec_path, "System spec JSON file");
    app->add_option("--spec-json", c.spec_json, "Inline system spec JSON");
    app->add_option("--preset", c.preset, "harmonic | free | caldirola-kanai | modulated");
    app->add_option("--config", c.config, "Run config JSON; command-line flags override it");
    app->add_option("-o,--output", c.output, "Output path (default stdout)");
    app->add_option("--format", c.format, "csv | json");
    app->add_option("--t-end", c.t_end, "End of the model span in t");
    app->add_option("--clock", c.clock, "Auxiliary integration clock: auto | to | tm");
    app->add_option("--seed", c.seed, "Reserved");
}

void add_state_options(CLI::App* app, StateOptions& s) {
    app->add_option("--frame", s.frame, "to | tm | tq");
    app->add_option("--kind", s.kind, "number | coherent | squeezed");
    app->add_option("-n", s.n, "Number-state index");
    app->add_option("--x0", s.x0);
    app->add_option("--p0", s.p0);
    app->add_option("-r", s.r, "Squeeze modulus");
    app->add_option("--theta", s.theta, "Squeeze angle");
    app->add_option("--time", s.time, "t' for the TO frame, t otherwise (default: initial time)");
    app->add_option("--grid", s.grid, "Grid nodes");
    app->add_option("--xmin", s.xmin);
    app->add_option("--xmax", s.xmax);
    app->add_option("--route", s.route, "TQ evaluation: dilation | direct");
}

void check_format(const Common& c) {
    if (c.format != "csv" && c.format != "json") {
        throw ValidationError("RunConfig.format: expected csv or json, got '" + c.format + "'");
    }
}

SystemSpec resolve_spec(const Common& c) {
    if (!c.spec_json.empty()) {
        json j;
        try {
            j = json::parse(c.spec_json);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("RunConfig.spec_json: ") + e.what());
        }
        return spec_from_json(j, c.base_dir);
    }
    if (!c.spec_path.empty()) return load_spec_file(c.spec_path);
    if (!c.preset.empty()) return presets::by_name(c.preset);
    return presets::harmonic();
}

Model make_model(const SystemSpec& spec, const Common& c, double t_end) {
    ModelOptions opts;
    if (c.clock == "to") {
        opts.clock = Clock::to;
    } else if (c.clock == "tm") {
        opts.clock = Clock::tm;
    } else if (c.clock != "auto") {
        throw ValidationError("RunConfig.clock: expected auto, to or tm");
    }
    return build_model(spec, c.t_end.value_or(t_end), opts);
}

StateLabel make_label(const StateOptions& s) {
    StateLabel label;
    switch (state_kind_from_string(s.kind)) {
        case StateKind::number: label = StateLabel::number(s.n); break;
        case StateKind::coherent: label = StateLabel::coherent(s.x0, s.p0); break;
        case StateKind::squeezed: label = StateLabel::squeezed(s.x0, s.p0, s.r, s.theta); break;
    }
    label.validate();
    return label;
}

void require_time(const Model& model, Frame frame, double time) {
    if (frame == Frame::to && !model.map && model.aux->clock() == Clock::tm) {
        throw DomainError("t'(t) saturates over the model span; use a shorter --t-end");
    }
    const Interval range = frame_time_range(model, frame);
    if (!range.contains(time)) {
        throw DomainError("time " + num(time) + " outside the frame range [" + num(range.lo) + ", " +
                          num(range.hi) + "]; adjust --t-end");
    }
}

std::optional<UniformGrid> explicit_grid(const StateOptions& s, std::size_t n) {
    if (!s.xmin && !s.xmax) return std::nullopt;
    if (!s.xmin || !s.xmax) throw ValidationError("RunConfig.grid: --xmin and --xmax go together");
    UniformGrid g{*s.xmin, *s.xmax, n};
    g.validate();
    return g;
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ValidationError("RunConfig.output: cannot open '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

void write_table(std::ostream& os, const std::string& format, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows, json meta = json::object()) {
    if (format == "json") {
        meta["columns"] = columns;
        meta["rows"] = rows;
        os << meta.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
        os << '\n';
    }
}

void write_wave(std::ostream& os, const std::string& format, const WaveSample& w, json meta) {
    if (format == "json") {
        json x = json::array(), re = json::array(), im = json::array();
        for (std::size_t i = 0; i < w.values.size(); ++i) {
            x.push_back(w.grid.x(i));
            re.push_back(w.values[i].real());
            im.push_back(w.values[i].imag());
        }
        meta["frame"] = to_string(w.frame);
        meta["time"] = w.time;
        meta["warnings"] = w.warnings;
        meta["x"] = std::move(x);
        meta["re"] = std::move(re);
        meta["im"] = std::move(im);
        os << meta.dump(2) << '\n';
        return;
    }
    os << "x,re,im,abs2\n";
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        const cplx v = w.values[i];
        os << num(w.grid.x(i)) << ',' << num(v.real()) << ',' << num(v.imag()) << ',' << num(std::norm(v))
           << '\n';
    }
}

json params_json(const GaussianParams& p) {
    return {{"Q", p.Q}, {"R", p.R}, {"Xplus", p.Xplus}, {"Xminus", p.Xminus}, {"Yminus", p.Yminus}};
}

// solve ---------------------------------------------------------------------

struct SolveOptionsCli {
    std::size_t samples = 201;
};

int cmd_solve(const Common& c, const SolveOptionsCli& o, std::ostream& out) {
    check_format(c);
    const SystemSpec spec = resolve_spec(c);
    const Model model = make_model(spec, c, spec.t0 + 10.0 * natural_period(spec));
    if (o.samples < 2) throw ValidationError("RunConfig.samples: need at least 2 samples");
    if (model.aux->clock() == Clock::tm && !model.map) {
        throw DomainError("t'(t) saturates over the model span; use a shorter --t-end");
    }
    const Interval span = frame_time_range(model, Frame::to);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < o.samples; ++i) {
        const double tp = i + 1 == o.samples ? span.hi
                                             : span.lo + span.span() * static_cast<double>(i) /
                                                             static_cast<double>(o.samples - 1);
        const AuxPoint a = model.aux->at_tprime(tp);
        const PhiValues phi = phi_values(a);
        rows.push_back({tp, a.xi.real(), a.xi.imag(), a.xi_dot.real(), a.xi_dot.imag(), a.theta, phi.phi3,
                        phi.phi3_dot, a.wronskian_residual()});
    }
    Sink sink(c.output, out);
    write_table(*sink, c.format,
                {"tprime", "re_xi", "im_xi", "re_xi_dot", "im_xi_dot", "theta", "phi3", "phi3_dot",
                 "wronskian_residual"},
                rows, {{"spec_hash", spec_hash(spec)}, {"max_wronskian_residual", model.aux->max_wronskian_residual()}});
    return ok;
}

// timemap -------------------------------------------------------------------

int cmd_timemap(const Common& c, std::size_t samples, std::ostream& out) {
    check_format(c);
    const SystemSpec spec = resolve_spec(c);
    if (samples < 2) throw ValidationError("RunConfig.samples: need at least 2 samples");
    const double t_end = c.t_end.value_or(spec.t0 + 10.0 * natural_period(spec));
    const TimeMap map = TimeMap::build(spec, t_end);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = i + 1 == samples ? t_end
                                          : spec.t0 + (t_end - spec.t0) * static_cast<double>(i) /
                                                          static_cast<double>(samples - 1);
        rows.push_back({t, map.forward(t)});
    }
    Sink sink(c.output, out);
    write_table(*sink, c.format, {"t", "tprime"}, rows, {{"spec_hash", spec_hash(spec)}});
    return ok;
}

// state ---------------------------------------------------------------------

double default_state_t_end(const SystemSpec& spec, Frame frame, std::optional<double> time) {
    double t_end = spec.t0 + 2.0 * natural_period(spec);
    if (time && (frame != Frame::to || spec.nu_is_zero())) t_end = std::max(t_end, *time + 1.0);
    return t_end;
}

int cmd_state(const Common& c, const StateOptions& s, std::ostream& out) {
    check_format(c);
    const SystemSpec spec = resolve_spec(c);
    const Frame frame = frame_from_string(s.frame);
    const StateLabel label = make_label(s);
    const Model model = make_model(spec, c, default_state_t_end(spec, frame, s.time));
    const double time = s.time.value_or(initial_time(model, frame));
    require_time(model, frame, time);
    const TqRoute route = s.route == "direct" ? TqRoute::direct : TqRoute::dilation;
    if (s.route != "direct" && s.route != "dilation") throw ValidationError("RunConfig.route: dilation or direct");
    const GaussianParams p = state_params(model, frame, label, time, route);
    const UniformGrid grid = explicit_grid(s, s.grid).value_or(auto_grid(p, s.grid));
    grid.validate();
    const WaveSample w = evaluate(p, frame, time, grid);
    json meta = params_json(p);
    meta["spec_hash"] = spec_hash(spec);
    meta["kind"] = s.kind;
    Sink sink(c.output, out);
    write_wave(*sink, c.format, w, meta);
    return ok;
}

// verify --------------------------------------------------------------------

struct Check {
    std::string name;
    double residual;
    double threshold;
};

double max_abs_diff(const WaveSample& a, const WaveSample& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

// Fixed node count, or resolution-driven when `fixed` is 0.
UniformGrid check_grid(const GaussianParams& p, std::size_t fixed) {
    UniformGrid g = auto_grid(p, 1025);
    g.n = fixed ? fixed : resolved_nodes(p, g);
    return g;
}

void frame_checks(const Model& model, Frame frame, double time, std::size_t n_grid, std::vector<Check>& checks) {
    const std::string f = to_string(frame);
    constexpr int kMaxN = 6;

    const GaussianParams top = state_params(model, frame, StateLabel::number(kMaxN + 1), time);
    const UniformGrid ngrid = check_grid(top, n_grid);
    std::vector<WaveSample> psi;
    for (int n = 0; n <= kMaxN + 1; ++n) psi.push_back(number_state(model, frame, n, time, ngrid));

    checks.push_back({f + ".annihilation", l2_norm(apply_ladder(model, Ladder::lowering, psi[0])), 1e-6});
    for (int n = 0; n <= kMaxN; ++n) {
        const std::string k = std::to_string(n);
        checks.push_back({f + ".raising.n=" + k,
                          relative_residual(apply_ladder(model, Ladder::raising, psi[n]), psi[n + 1],
                                            std::sqrt(n + 1.0)),
                          1e-5});
        const WaveStencil st = state_stencil(model, frame, StateLabel::number(n), time, ngrid);
        checks.push_back({f + ".number_operator.n=" + k,
                          relative_residual(apply_number_operator(model, st), st.center(), n + 0.5), 1e-5});
        checks.push_back({f + ".casimir.n=" + k,
                          relative_residual(apply_casimir(model, st), st.center(), -0.5), 1e-5});
        if (n <= 4) checks.push_back({f + ".schrodinger.number.n=" + k, schrodinger_residual(model, st), 1e-5});
    }

    const StateLabel coh = StateLabel::coherent(0.7, -0.4);
    const StateLabel sq = StateLabel::squeezed(0.7, -0.4, 0.5, std::numbers::pi / 3.0);
    const UniformGrid cgrid = check_grid(state_params(model, frame, coh, time), n_grid);
    const UniformGrid sgrid = check_grid(state_params(model, frame, sq, time), n_grid);
    checks.push_back({f + ".schrodinger.coherent", schrodinger_residual(model, frame, coh, time, cgrid), 1e-5});
    checks.push_back({f + ".schrodinger.squeezed", schrodinger_residual(model, frame, sq, time, sgrid), 1e-5});

    const WaveStencil probe = state_stencil(model, frame, coh, time, cgrid);
    checks.push_back({f + ".commutator.jminus_jplus", commutator_check(model, Commutator::jminus_jplus, probe), 1e-5});
    checks.push_back({f + ".commutator.m_jplus", commutator_check(model, Commutator::m_jplus, probe), 1e-4});
    checks.push_back({f + ".commutator.m_jminus", commutator_check(model, Commutator::m_jminus, probe), 1e-4});
    checks.push_back({f + ".squeeze_eigen", squeeze_eigen_check(model, frame, sq.x0, sq.p0, sq.r, sq.theta, time, sgrid),
                      1e-5});

    const WaveSample s0 = state(model, frame, StateLabel::squeezed(coh.x0, coh.p0, 0.0, 1.0), time, cgrid);
    const WaveSample c0 = state(model, frame, coh, time, cgrid);
    checks.push_back({f + ".reduction.squeezed_r0_coherent", max_abs_diff(s0, c0), 1e-12});
    const WaveSample cz = state(model, frame, StateLabel::coherent(0.0, 0.0), time, ngrid);
    checks.push_back({f + ".reduction.coherent_zero_number0", max_abs_diff(cz, psi[0]), 1e-12});

    const GaussianParams sp = state_params(model, frame, sq, time);
    const double imag = std::max({std::abs(sp.imag.Q), std::abs(sp.imag.R), std::abs(sp.imag.Xplus),
                                  std::abs(sp.imag.Xminus), std::abs(sp.imag.Yminus)});
    checks.push_back({f + ".reality", imag, 1e-10});
}

std::vector<Check> verify_suite(const Model& model, double t, std::size_t n_grid) {
    std::vector<Check> checks;
    checks.push_back({"auxiliary.wronskian", model.aux->max_wronskian_residual(), 1e-9});
    if (model.map) {
        const TimeMap& map = *model.map;
        const Interval r = map.tprime_range();
        double worst = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double y = r.lo + r.span() * i / 200.0;
            worst = std::max(worst, std::abs(map.forward(map.inverse(y)) - y));
        }
        checks.push_back({"time_map.round_trip", worst, 1e-10 * std::max(1.0, r.span())});
    }
    const bool have_to = model.map || model.aux->clock() == Clock::to;
    const double tprime = model.map ? model.map->forward(t) : t;
    if (have_to) frame_checks(model, Frame::to, tprime, n_grid, checks);
    frame_checks(model, Frame::tm, t, n_grid, checks);
    frame_checks(model, Frame::tq, t, n_grid, checks);

    const TqIdentityResiduals tq = tq_identity_residuals(model, t);
    checks.push_back({"tq.identities", std::max({tq.c3t, tq.c3x2, tq.c3d}), 1e-10});
    const StateLabel sq = StateLabel::squeezed(0.7, -0.4, 0.5, std::numbers::pi / 3.0);
    const GaussianParams dil = state_params(model, Frame::tq, sq, t, TqRoute::dilation);
    const UniformGrid g = check_grid(dil, n_grid);
    checks.push_back({"tq.dilation_vs_direct",
                      max_abs_diff(evaluate(dil, Frame::tq, t, g),
                                   evaluate(state_params(model, Frame::tq, sq, t, TqRoute::direct), Frame::tq, t, g)),
                      1e-9});
    if (model.spec.nu_is_zero() && have_to) {
        const WaveSample a = state(model, Frame::to, sq, tprime, g);
        const WaveSample b = state(model, Frame::tm, sq, t, g);
        const WaveSample c = state(model, Frame::tq, sq, t, g);
        checks.push_back({"frames.coincide", std::max(max_abs_diff(a, b), max_abs_diff(b, c)), 1e-12});
    }
    return checks;
}

struct VerifyOptions {
    std::optional<double> time;
    std::size_t grid = 0;  // 0: resolution-driven
};

int cmd_verify(const Common& c, const VerifyOptions& v, std::ostream& out) {
    const SystemSpec spec = resolve_spec(c);
    const double period = natural_period(spec);
    const double t = v.time.value_or(spec.t0 + 0.75 * period);
    const Model model = make_model(spec, c, std::max(spec.t0 + 2.0 * period, t + 0.25 * period));
    require_time(model, Frame::tm, t);
    const std::vector<Check> checks = verify_suite(model, t, v.grid);

    json report;
    report["spec_hash"] = spec_hash(spec);
    report["time"] = t;
    report["checks"] = json::array();
    std::size_t passed = 0;
    json failed = json::array();
    for (const Check& ch : checks) {
        const bool pass = std::isfinite(ch.residual) && ch.residual <= ch.threshold;
        report["checks"].push_back({{"name", ch.name}, {"residual", ch.residual}, {"threshold", ch.threshold}, {"pass", pass}});
        if (pass) {
            ++passed;
        } else {
            failed.push_back(ch.name);
        }
    }
    report["summary"] = {{"total", checks.size()}, {"passed", passed}, {"failed", failed},
                         {"pass", passed == checks.size()}};
    Sink sink(c.output, out);
    *sink << report.dump(2) << '\n';
    return passed == checks.size() ? ok : accuracy_failure;
}

// propagate -----------------------------------------------------------------

struct PropagateOptions {
    double dt = 1e-4;
    std::optional<double> t_final;
    std::string compare = "analytic";
    std::string laplacian = "compact";
    std::string report;
};

UniformGrid covering_grid(const Model& model, Frame frame, const StateLabel& label, double t0, double t1,
                          std::size_t n) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    constexpr int kSamples = 64;
    for (int i = 0; i <= kSamples; ++i) {
        const double t = t0 + (t1 - t0) * i / kSamples;
        const UniformGrid g = auto_grid(state_params(model, frame, label, t), n);
        lo = std::min(lo, g.xmin);
        hi = std::max(hi, g.xmax);
    }
    return {lo, hi, n};
}

int cmd_propagate(const Common& c, StateOptions s, const PropagateOptions& po, std::ostream& out,
                  std::ostream& err) {
    check_format(c);
    if (po.compare != "analytic" && po.compare != "none") {
        throw ValidationError("RunConfig.compare: expected analytic or none");
    }
    const SystemSpec spec = resolve_spec(c);
    const Frame frame = frame_from_string(s.frame);
    const Frame run_frame = frame == Frame::tq ? Frame::tm : frame;
    const StateLabel label = make_label(s);
    const double period = natural_period(spec);
    double need = spec.t0 + 2.0 * period;
    if (po.t_final && (frame != Frame::to || spec.nu_is_zero())) need = std::max(need, *po.t_final + 0.1);
    const Model model = make_model(spec, c, need);

    const double t_init = s.time.value_or(initial_time(model, frame));
    const double t_final = po.t_final.value_or(t_init + period);
    require_time(model, frame, t_init);
    require_time(model, frame, t_final);

    PropagatorConfig cfg;
    cfg.frame = run_frame;
    cfg.dt = po.dt;
    if (po.laplacian == "second_order" || po.laplacian == "second") {
        cfg.laplacian = Laplacian::second_order;
    } else if (po.laplacian != "compact") {
        throw ValidationError("RunConfig.laplacian: expected compact or second_order");
    }
    cfg.grid = explicit_grid(s, s.grid).value_or(covering_grid(model, run_frame, label, t_init, t_final, s.grid));

    const WaveSample initial = state(model, run_frame, label, t_init, cfg.grid);
    const PropagationResult res = propagate(cfg, model, initial, t_final);
    WaveSample final_state = res.final;
    if (frame == Frame::tq) {
        const double nu = eval_nu(spec, t_final);
        const UniformGrid target{cfg.grid.xmin * std::exp(nu) * (1.0 - 1e-12),
                                 cfg.grid.xmax * std::exp(nu) * (1.0 - 1e-12), cfg.grid.n};
        final_state = dilation_transform(res.final, nu, target);
    }

    json record;
    record["spec_hash"] = spec_hash(spec);
    record["frame"] = to_string(frame);
    record["t_initial"] = t_init;
    record["t_final"] = t_final;
    record["dt"] = po.dt;
    record["steps"] = res.steps;
    record["norm_drift"] = res.norm_drift;
    record["grid"] = {{"xmin", final_state.grid.xmin}, {"xmax", final_state.grid.xmax}, {"n", final_state.grid.n}};
    record["compare"] = po.compare;
    if (po.compare == "analytic") {
        const WaveSample exact = state(model, frame, label, t_final, final_state.grid);
        const L2Distance d = l2_distance(final_state, exact);
        record["l2_raw"] = d.raw;
        record["l2_phase_aligned"] = d.phase_aligned;
    }

    Sink sink(c.output, out);
    write_wave(*sink, c.format, final_state, {{"record", record}});
    if (po.report.empty()) {
        err << record.dump() << '\n';
    } else {
        Sink rep(po.report, err);
        *rep << record.dump(2) << '\n';
    }
    return ok;
}

// config files --------------------------------------------------------------

std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

bool has_spec_source(const std::vector<std::string>& args) {
    for (const auto& a : args) {
        for (const char* k : {"--spec", "--spec-json", "--preset"}) {
            const std::string key(k);
            if (a == key || a.rfind(key + "=", 0) == 0) return true;
        }
    }
    return false;
}

// Translates a run-config object into flags placed ahead of the command-line flags,
// so the command line wins.
std::vector<std::string> config_args(const std::string& path, bool spec_given) {
    std::ifstream in(path);
    if (!in) throw ValidationError("RunConfig.config_exists: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("RunConfig.config_json: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("RunConfig.config_json: expected an object");
    const std::filesystem::path dir = std::filesystem::path(path).parent_path();
    std::vector<std::string> out;
    for (const auto& [key, value] : j.items()) {
        if (key == "spec") {
            if (spec_given) continue;
            if (value.is_string()) {
                std::filesystem::path p = value.get<std::string>();
                if (p.is_relative()) p = dir / p;
                out.insert(out.end(), {"--spec", p.string()});
            } else {
                out.insert(out.end(), {"--spec-json", value.dump()});
            }
            continue;
        }
        if (key == "preset" && spec_given) continue;
        const std::string flag = key.size() == 1 ? "-" + key : "--" + key;
        if (value.is_string()) {
            out.insert(out.end(), {flag, value.get<std::string>()});
        } else if (value.is_number()) {
            out.insert(out.end(), {flag, value.is_number_float() ? num(value.get<double>()) : value.dump()});
        } else {
            throw ValidationError("RunConfig." + key + ": expected a string or number");
        }
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact states of time-dependent quadratic Hamiltonians", "tdho"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    Common common;
    StateOptions st;
    StateOptions pst;
    pst.grid = 2048;
    SolveOptionsCli so;
    std::size_t tm_samples = 101;
    VerifyOptions vo;
    PropagateOptions po;

    auto* solve = app.add_subcommand("solve", "Auxiliary solution xi(t') as CSV");
    add_common(solve, common);
    solve->add_option("--samples", so.samples, "Output rows");

    auto* timemap = app.add_subcommand("timemap", "Time map t'(t) as CSV");
    add_common(timemap, common);
    timemap->add_option("--samples", tm_samples, "Output rows");

    auto* state_cmd = app.add_subcommand("state", "Evaluate a number, coherent or squeezed state");
    add_common(state_cmd, common);
    add_state_options(state_cmd, st);

    auto* verify = app.add_subcommand("verify", "Run the identity suite and emit a JSON report");
    add_common(verify, common);
    verify->add_option("--time", vo.time, "Check time t (default t0 + 3/4 natural period)");
    verify->add_option("--grid", vo.grid, "Grid nodes per state (0: sized from the local wavenumber)");

    auto* prop = app.add_subcommand("propagate", "Crank-Nicolson propagation of an analytic state");
    add_common(prop, common);
    add_state_options(prop, pst);
    prop->add_option("--dt", po.dt);
    prop->add_option("--t-final", po.t_final);
    prop->add_option("--compare", po.compare, "analytic | none");
    prop->add_option("--laplacian", po.laplacian, "compact | second_order");
    prop->add_option("--report", po.report, "JSON record path (default stderr)");

    try {
        std::vector<std::string> args = args_in;
        if (const auto cfg = find_config(args); cfg && !args.empty()) {
            const std::vector<std::string> extra = config_args(*cfg, has_spec_source(args));
            args.insert(args.begin() + 1, extra.begin(), extra.end());
            common.base_dir = std::filesystem::path(*cfg).parent_path().string();
            if (common.base_dir.empty()) common.base_dir = ".";
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? ok : usage_error;
        }

        if (solve->parsed()) return cmd_solve(common, so, out);
        if (timemap->parsed()) return cmd_timemap(common, tm_samples, out);
        if (state_cmd->parsed()) return cmd_state(common, st, out);
        if (verify->parsed()) return cmd_verify(common, vo, out);
        if (prop->parsed()) return cmd_propagate(common, pst, po, out, err);
        return usage_error;
    } catch (const AccuracyError& e) {
        err << "accuracy failure: " << e.what() << '\n';
        return accuracy_failure;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return usage_error;
    } catch (const Error& e) {
        err << "validation failure: " << e.what() << '\n';
        return validation_failure;
    } catch (const nlohmann::json::exception& e) {
        err << "validation failure: RunConfig.json: " << e.what() << '\n';
        return validation_failure;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace tdho::cli
