#include "tdho/config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdho/errors.hpp"

namespace tdho {

using nlohmann::json;

namespace {

double num(const json& params, const char* key, const std::string& family) {
    if (!params.contains(key)) {
        throw ValidationError("TimeProfile." + family + ": missing parameter '" + key + "'");
    }
    const auto& v = params.at(key);
    if (!v.is_number()) {
        throw ValidationError("TimeProfile." + family + ": parameter '" + key + "' is not a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ValidationError("TimeProfile." + family + ": parameter '" + key + "' is not finite");
    }
    return d;
}

double num_or(const json& params, const char* key, double fallback, const std::string& family) {
    return params.contains(key) ? num(params, key, family) : fallback;
}

std::vector<double> num_array(const json& params, const char* key, const std::string& family) {
    if (!params.contains(key) || !params.at(key).is_array()) {
        throw ValidationError("TimeProfile." + family + ": parameter '" + key + "' must be an array");
    }
    std::vector<double> out;
    for (const auto& v : params.at(key)) {
        if (!v.is_number()) {
            throw ValidationError("TimeProfile." + family + ": '" + key + "' entries must be numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

Interval parse_domain(const json& j) {
    if (!j.contains("domain") || j.at("domain").is_null()) return {};
    const auto& d = j.at("domain");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) {
        throw ValidationError("TimeProfile.domain: expected [lo, hi]");
    }
    Interval iv{d[0].get<double>(), d[1].get<double>()};
    if (!(iv.lo < iv.hi)) throw ValidationError("TimeProfile.domain: lo must be below hi");
    return iv;
}

Interpolation parse_interpolation(const json& j) {
    std::string name = "monotone_cubic";
    if (j.contains("interpolation")) name = j.at("interpolation").get<std::string>();
    if (j.contains("params") && j.at("params").contains("interpolation")) {
        name = j.at("params").at("interpolation").get<std::string>();
    }
    if (name == "monotone_cubic" || name == "cubic") return Interpolation::monotone_cubic;
    if (name == "linear") return Interpolation::linear;
    throw ValidationError("TimeProfile.tabulated: unknown interpolation '" + name + "'");
}

json domain_json(const Interval& d) {
    if (!std::isfinite(d.lo) && !std::isfinite(d.hi)) return nullptr;
    return json::array({d.lo, d.hi});
}

}  // namespace

struct ProfileCodec {
    static json encode(const TimeProfile& p) {
        json j;
        j["family"] = to_string(p.family());
        if (const auto* c = std::get_if<TimeProfile::Constant>(&p.repr_)) {
            j["params"] = {{"value", c->value}};
        } else if (const auto* l = std::get_if<TimeProfile::Linear>(&p.repr_)) {
            j["params"] = {{"intercept", l->intercept}, {"slope", l->slope}};
        } else if (const auto* s = std::get_if<TimeProfile::Sinusoidal>(&p.repr_)) {
            j["params"] = {{"offset", s->offset},
                           {"amplitude", s->amplitude},
                           {"frequency", s->frequency},
                           {"phase", s->phase}};
        } else if (const auto* q = std::get_if<TimeProfile::Polynomial>(&p.repr_)) {
            j["params"] = {{"coefficients", q->coefficients}};
        } else if (const auto* t = std::get_if<TimeProfile::Tabulated>(&p.repr_)) {
            j["params"] = {{"times", t->times}, {"values", t->values}};
            j["interpolation"] =
                t->interpolation == Interpolation::linear ? "linear" : "monotone_cubic";
            return j;
        }
        j["domain"] = domain_json(p.domain());
        return j;
    }
};

TimeProfile profile_from_json(const json& j, const std::string& base_dir) {
    if (j.is_number()) return TimeProfile::constant(j.get<double>());
    if (!j.is_object() || !j.contains("family")) {
        throw ValidationError("TimeProfile.family: profile must be an object with a 'family'");
    }
    const std::string family = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    const Interval domain = parse_domain(j);

    if (family == "constant") return TimeProfile::constant(num(params, "value", family), domain);
    if (family == "linear") {
        return TimeProfile::linear(num_or(params, "intercept", 0.0, family),
                                   num(params, "slope", family), domain);
    }
    if (family == "sinusoidal" || family == "sinusoidal-modulation") {
        return TimeProfile::sinusoidal(num_or(params, "offset", 0.0, family),
                                       num(params, "amplitude", family),
                                       num(params, "frequency", family),
                                       num_or(params, "phase", 0.0, family), domain);
    }
    if (family == "polynomial") {
        return TimeProfile::polynomial(num_array(params, "coefficients", family), domain);
    }
    if (family == "tabulated") {
        const Interpolation interp = parse_interpolation(j);
        if (params.contains("csv")) {
            std::filesystem::path path = params.at("csv").get<std::string>();
            if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
            return load_tabulated_csv(path.string(), interp);
        }
        return TimeProfile::tabulated(num_array(params, "times", family),
                                      num_array(params, "values", family), interp);
    }
    throw ValidationError("TimeProfile.family: unknown family '" + family + "'");
}

json profile_to_json(const TimeProfile& p) { return ProfileCodec::encode(p); }

SystemSpec spec_from_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ValidationError("SystemSpec: expected a JSON object");
    SystemSpec spec;
    if (j.contains("nu")) spec.nu = profile_from_json(j.at("nu"), base_dir);
    if (j.contains("h2")) spec.h2 = profile_from_json(j.at("h2"), base_dir);
    if (j.contains("t0")) {
        if (!j.at("t0").is_number()) throw ValidationError("SystemSpec.t0_finite: t0 must be a number");
        spec.t0 = j.at("t0").get<double>();
    }
    spec.validate();
    return spec;
}

json spec_to_json(const SystemSpec& spec) {
    return {{"t0", spec.t0}, {"nu", profile_to_json(spec.nu)}, {"h2", profile_to_json(spec.h2)}};
}

SystemSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("RunConfig.spec_exists: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("RunConfig.spec_json: " + std::string(e.what()));
    }
    return spec_from_json(j, std::filesystem::path(path).parent_path().string());
}

TimeProfile load_tabulated_csv(const std::string& path, Interpolation interpolation) {
    std::ifstream in(path);
    if (!in) throw ValidationError("TimeProfile.tabulated: cannot open '" + path + "'");
    std::vector<double> times, values;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& c : line) {
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        }
        std::istringstream ss(line);
        double t = 0.0, v = 0.0;
        if (!(ss >> t >> v)) {
            if (first) {
                first = false;
                continue;
            }
            throw ValidationError("TimeProfile.tabulated: malformed row '" + line + "' in " + path);
        }
        first = false;
        times.push_back(t);
        values.push_back(v);
    }
    return TimeProfile::tabulated(std::move(times), std::move(values), interpolation);
}

std::string spec_hash(const SystemSpec& spec) {
    const std::string dump = spec_to_json(spec).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace tdho
