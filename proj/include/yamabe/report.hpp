#pragma once

// JSON serialization of certificates, integral tables and quotient sweeps.
// Every numeric value is wrapped as {"value": ..., "provenance": tag} with tag
// one of "exact" (rational arithmetic, value is a "p/q" string), "quadrature"
// (numerical estimate, with "error") or "fitted" (regression output).

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "yamabe/discrete_quotient.hpp"
#include "yamabe/energy_expansion.hpp"
#include "yamabe/exact_integrals.hpp"
#include "yamabe/rational.hpp"
#include "yamabe/scaled_rational.hpp"

namespace yamabe {

inline constexpr int report_schema = 1;
inline constexpr const char* tool_name = "yamabe";
inline constexpr const char* tool_version = "1.0.0";

inline nlohmann::json exact_json(const Rational& q) { return {{"value", to_string(q)}, {"provenance", "exact"}}; }

inline nlohmann::json exact_json(const ScaledRational& v) {
    nlohmann::json j{{"value", v.str()}, {"provenance", "exact"}};
    if (v.divergent()) {
        j["divergent"] = true;
        return j;
    }
    j["q"] = to_string(v.q());
    j["sigma_pow"] = v.sigma_pow();
    j["I_pow"] = v.I_pow();
    j["log"] = v.log_flag();
    return j;
}

inline nlohmann::json quadrature_json(double value, double error) {
    return {{"value", value}, {"error", error}, {"provenance", "quadrature"}};
}

inline nlohmann::json quadrature_json(const Estimate& e) { return quadrature_json(e.value, e.error); }

inline nlohmann::json fitted_json(double value) { return {{"value", value}, {"provenance", "fitted"}}; }

inline nlohmann::json fitted_json(double value, double error) {
    return {{"value", value}, {"error", error}, {"provenance", "fitted"}};
}

inline nlohmann::json residual_json(const QuadratureResidual& r) {
    return {{"integral", r.integral},
            {"mode", r.mode},
            {"exact", {{"value", r.exact}, {"provenance", "exact"}}},
            {"numeric", {{"value", r.numeric}, {"provenance", r.mode == "log slope" ? "fitted" : "quadrature"}}},
            {"relative", {{"value", r.relative}, {"provenance", "quadrature"}}}};
}

inline nlohmann::json certificate_json(const Certificate& c) {
    nlohmann::json res = nlohmann::json::array();
    for (const auto& r : c.quadrature_residuals) res.push_back(residual_json(r));
    return {
        {"n", c.n},
        {"A_used", exact_json(c.A_used)},
        {"P_value", exact_json(c.P_value)},
        {"normalization", c.normalization},
        {"S_coefficient", exact_json(c.S_coefficient)},
        {"W2_coefficient", exact_json(c.W2_coefficient)},
        {"S", exact_json(c.S)},
        {"W2", exact_json(c.W2)},
        {"total", exact_json(c.total)},
        {"optimum",
         {{"A", exact_json(c.optimum.A)}, {"P_at_A", exact_json(c.optimum.P_at_A)}, {"P_at_1", exact_json(c.optimum.P_at_1)}}},
        {"error_class", error_class_name(c.error_class)},
        {"verdict", c.verdict},
        {"justification", c.justification},
        {"quadrature_residuals", res},
    };
}

inline nlohmann::json expansion_json(const ExpansionReport& rep) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : rep.terms) {
        terms.push_back({{"integral", t.integral},
                         {"prefactor", exact_json(t.prefactor)},
                         {"A_power", t.A_power},
                         {"channel", channel_name(t.channel)},
                         {"integral_value", exact_json(t.integral_value)},
                         {"bounded", t.bounded},
                         {"contribution", exact_json(t.contribution())}});
    }
    nlohmann::json channels = nlohmann::json::object();
    for (const auto& [ch, poly] : rep.channels) {
        channels[channel_name(ch)] = {exact_json(poly.c[0]), exact_json(poly.c[1]), exact_json(poly.c[2])};
    }
    return {{"n", rep.n},
            {"terms", terms},
            {"channels", channels},
            {"error_class", error_class_name(rep.error_class)},
            {"cancelled", rep.cancelled}};
}

inline nlohmann::json integrals_json(int n, const std::vector<QuadratureResidual>* residuals = nullptr) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& pi : expansion_integrals(n)) {
        nlohmann::json row{{"name", pi.name},
                           {"a", pi.spec.a},
                           {"b", pi.spec.b},
                           {"c", pi.spec.c},
                           {"bounded", pi.bounded},
                           {"value", exact_json(pi.value)}};
        if (residuals) {
            for (const auto& r : *residuals)
                if (r.integral == pi.name) row["check"] = residual_json(r);
        }
        rows.push_back(row);
    }
    return {{"n", n}, {"kind", n == 6 ? "log_coefficient" : "closed_form"}, {"integrals", rows}};
}

inline nlohmann::json sweep_json(const SweepTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"eps", r.eps},
                        {"A", r.A},
                        {"energy", quadrature_json(r.energy)},
                        {"energy_drop", quadrature_json(r.energy_drop)},
                        {"predicted_drop", {{"value", r.predicted_drop}, {"provenance", "exact"}}},
                        {"boundary", quadrature_json(r.boundary)},
                        {"quotient", quadrature_json(r.quotient)},
                        {"quotient_drop", quadrature_json(r.quotient_drop)}});
    }
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& f : t.fits) {
        fits.push_back({{"A", f.A},
                        {"predicted", {{"value", f.predicted}, {"provenance", "exact"}}},
                        {"measured", fitted_json(f.measured, f.measured_error)},
                        {"relative_deviation", fitted_json(f.relative_deviation)},
                        {"exponent", fitted_json(f.exponent)}});
    }
    return {{"n", t.n},
            {"delta", t.delta},
            {"sharp_constant", {{"value", t.sharp_constant}, {"provenance", "exact"}}},
            {"curved", t.curved},
            {"monotone_improvement", t.monotone_improvement},
            {"rows", rows},
            {"fits", fits}};
}

/// Top-level report envelope. Wall time is deliberately not part of it so that
/// identical inputs give byte-identical output.
inline nlohmann::json run_report(const std::string& command, nlohmann::json inputs, nlohmann::json result, bool pass,
                                 int exit_code) {
    return {{"schema", report_schema},
            {"tool", tool_name},
            {"version", tool_version},
            {"command", command},
            {"inputs", std::move(inputs)},
            {"result", std::move(result)},
            {"summary", {{"pass", pass}, {"exit_code", exit_code}}}};
}

/// Stable serialization used for every report written to disk.
inline std::string dump_report(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace yamabe
