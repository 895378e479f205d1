#include "tdho/model.hpp"

#include <cmath>

#include "tdho/errors.hpp"

namespace tdho {

double Model::tprime0() const { return map ? map->tprime_range().lo : spec.t0; }

double Model::g2_at_tprime(double tprime) const {
    if (spec.nu_is_zero() && !map) return eval_h2(spec, tprime - tprime0() + spec.t0);
    return eval_g2_of_tprime(spec, require_map(), tprime);
}

const TimeMap& Model::require_map() const {
    if (!map) {
        throw UsageError("Model: the time map saturates over this span; oscillator-clock "
                         "quantities are unavailable");
    }
    return *map;
}

Model build_model(const SystemSpec& spec, double t_end, const ModelOptions& options) {
    spec.validate();
    Model m;
    m.spec = spec;
    m.t_end = t_end;
    const Clock clock = options.clock.value_or(spec.nu_is_zero() ? Clock::to : Clock::tm);

    try {
        m.map = std::make_shared<const TimeMap>(
            TimeMap::build(spec, t_end, options.map_nodes, options.tprime0));
    } catch (const ValidationError& e) {
        if (clock == Clock::to || std::string(e.what()).find("strictly_increasing") == std::string::npos) {
            throw;
        }
    }

    const double g2_0 = eval_h2(spec, spec.t0) * std::exp(4.0 * eval_nu(spec, spec.t0));
    const AuxInitialConditions ic = options.ic.value_or(default_ic(g2_0));

    if (clock == Clock::to) {
        const auto map = m.map;
        const SystemSpec s = spec;
        std::function<double(double)> g2;
        if (map->is_identity()) {
            const double shift = spec.t0 - map->tprime_range().lo;
            g2 = [s, shift](double tp) { return s.h2(tp + shift); };
        } else {
            g2 = [s, map](double tp) { return eval_g2_of_tprime(s, *map, tp); };
        }
        m.aux = std::make_shared<const AuxSolution>(
            solve_xi(g2, map->tprime_range(), ic, options.aux_nodes, options.solve, map));
    } else {
        m.aux = std::make_shared<const AuxSolution>(solve_xi_tm(
            spec, Interval{spec.t0, t_end}, ic, options.aux_nodes, options.solve, m.map));
    }
    return m;
}

}  // namespace tdho
