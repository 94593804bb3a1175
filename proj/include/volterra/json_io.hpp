#pragma once

// JSON wire formats for kernels, input signals, and certificates. Parsing is
// strict: unknown keys are rejected so a typo fails loudly instead of silently
// dropping a parameter.

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "certificates.hpp"
#include "exceptions.hpp"
#include "kernels.hpp"
#include "solver.hpp"

namespace volterra {

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const char* what) {
    if (!j.is_object()) throw error(std::string(what) + ": expected a JSON object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw error(std::string(what) + ": unknown field '" + item.key() + "'");
}

inline double num(const nlohmann::json& j, const char* key, const char* what) {
    if (!j.contains(key))
        throw error(std::string(what) + ": missing field '" + key + "'");
    if (!j.at(key).is_number())
        throw error(std::string(what) + ": field '" + key + "' must be a number");
    return j.at(key).get<double>();
}

}  // namespace detail

inline kernel_spec kernel_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw error("kernel: need an object with a string 'type'");
    const std::string type = j.at("type").get<std::string>();

    kernel_spec spec;
    if (type == "exponential") {
        detail::require_keys(j, {"type", "k", "theta"}, "kernel");
        spec = exponential_kernel{detail::num(j, "k", "kernel"),
                                  detail::num(j, "theta", "kernel")};
    } else if (type == "powerlaw") {
        detail::require_keys(j, {"type", "k", "theta", "c"}, "kernel");
        spec = power_law_kernel{detail::num(j, "k", "kernel"),
                                detail::num(j, "theta", "kernel"),
                                detail::num(j, "c", "kernel")};
    } else if (type == "rayleigh") {
        detail::require_keys(j, {"type", "k", "sigma"}, "kernel");
        spec = rayleigh_kernel{detail::num(j, "k", "kernel"),
                               detail::num(j, "sigma", "kernel")};
    } else if (type == "constant") {
        detail::require_keys(j, {"type", "k"}, "kernel");
        spec = constant_unit_kernel{detail::num(j, "k", "kernel")};
    } else if (type == "tabulated") {
        detail::require_keys(j, {"type", "delta", "betas"}, "kernel");
        tabulated_kernel tab;
        tab.delta = detail::num(j, "delta", "kernel");
        if (!j.contains("betas") || !j.at("betas").is_array())
            throw error("kernel: tabulated needs a 'betas' array");
        for (const auto& v : j.at("betas")) {
            if (!v.is_number()) throw error("kernel: betas entries must be numbers");
            tab.betas.push_back(v.get<double>());
        }
        spec = std::move(tab);
    } else {
        throw error("kernel: unknown type '" + type + "'");
    }
    check_invariants(spec);
    return spec;
}

inline nlohmann::json kernel_to_json(const tabulated_kernel& tab) {
    nlohmann::json j;
    j["type"] = "tabulated";
    j["delta"] = tab.delta;
    j["betas"] = tab.betas;
    return j;
}

inline input_signal signal_from_json(const nlohmann::json& j) {
    detail::require_keys(j, {"atoms", "regular"}, "signal");
    input_signal sig;
    if (j.contains("atoms")) {
        if (!j.at("atoms").is_array()) throw error("signal: 'atoms' must be an array");
        for (const auto& pair : j.at("atoms")) {
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                !pair[1].is_number())
                throw error("signal: each atom must be a [time, weight] pair");
            sig.atoms.push_back(atom{pair[0].get<double>(), pair[1].get<double>()});
        }
    }
    if (j.contains("regular")) {
        const auto& r = j.at("regular");
        if (!r.is_object() || !r.contains("type") || !r.at("type").is_string())
            throw error("signal: 'regular' needs a string 'type'");
        const std::string type = r.at("type").get<std::string>();
        if (type == "constant") {
            detail::require_keys(r, {"type", "value"}, "signal regular");
            sig.regular = constant_signal{detail::num(r, "value", "signal regular")};
        } else if (type == "two_plus_sin") {
            detail::require_keys(r, {"type"}, "signal regular");
            sig.regular = two_plus_sin_signal{};
        } else if (type == "samples") {
            detail::require_keys(r, {"type", "step", "values"}, "signal regular");
            sampled_signal s;
            s.step = detail::num(r, "step", "signal regular");
            if (!r.contains("values") || !r.at("values").is_array())
                throw error("signal: samples need a 'values' array");
            for (const auto& v : r.at("values")) {
                if (!v.is_number()) throw error("signal: values entries must be numbers");
                s.values.push_back(v.get<double>());
            }
            sig.regular = std::move(s);
        } else {
            throw error("signal: unknown regular type '" + type + "'");
        }
    }
    check_signal(sig);
    return sig;
}

inline nlohmann::json certificate_to_json(const certificate& c) {
    nlohmann::json j;
    j["norm"] = to_string(c.kind);
    if (c.kind == norm_kind::sup_windowed) j["window"] = c.window;
    j["kernel_error"] = c.kernel_error;
    j["k_bound"] = c.k_bound;
    j["resolvent_error"] = c.resolvent_error;
    j["solution_error"] = c.solution_error;
    return j;
}

}  // namespace volterra
