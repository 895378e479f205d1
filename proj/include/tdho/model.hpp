#pragma once

// A SystemSpec bundled with its time map and auxiliary solution over [t0, t_end].

#include <cstddef>
#include <memory>
#include <optional>

#include "tdho/auxiliary.hpp"
#include "tdho/profile.hpp"
#include "tdho/time_map.hpp"

namespace tdho {

struct ModelOptions {
    /// Integration clock; by default t' when nu == 0 and t otherwise.
    std::optional<Clock> clock;
    std::size_t aux_nodes = 2048;
    std::size_t map_nodes = 2048;
    std::optional<AuxInitialConditions> ic;
    std::optional<double> tprime0;
    SolveOptions solve;
};

struct Model {
    SystemSpec spec;
    double t_end = 0.0;
    /// Null when t'(t) saturates over the span (only possible with the mass clock).
    std::shared_ptr<const TimeMap> map;
    std::shared_ptr<const AuxSolution> aux;

    double tprime0() const;
    /// g2 at oscillator time t'.
    double g2_at_tprime(double tprime) const;
    const TimeMap& require_map() const;
};

Model build_model(const SystemSpec& spec, double t_end, const ModelOptions& options = {});

}  // namespace tdho
