#pragma once

// JSON form of BoundaryCurvature:
//
//   {
//     "n": 7,
//     "Rn": [[...], ...],                 (n-1) x (n-1)
//     "Wbar": {"1212": "1/4", "1,3,2,4": 0.5, ...},   1-based, symmetric images filled in
//     "N2": "-3/2",
//     "jets": {"Rn_k": ..., "Rn_n": ..., "Rn_kl": ..., "Rn_nk": ..., "Rn_nn": ..., "Rs_ij": ...}   (optional)
//   }
//
// Numbers are converted exactly (every double is a dyadic rational); strings
// may hold "p/q" or decimal literals. "Wbar" may also be a nested 4-d array.
// Unknown fields are rejected. Missing jets receive their minimal admissible
// completion and are listed in BoundaryCurvature::defaulted.

#include <nlohmann/json.hpp>

#include <array>
#include <fstream>
#include <set>
#include <string>

#include "yamabe/curvature.hpp"
#include "yamabe/errors.hpp"
#include "yamabe/rational.hpp"

namespace yamabe {

namespace detail {

inline Rational json_rational(const nlohmann::json& v, const std::string& where) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return rat(v.get<long long>());
    if (v.is_number()) return from_double(v.get<double>());
    throw ParseError(where + ": expected a number or a \"p/q\" string");
}

inline void json_fill(const nlohmann::json& v, Tensor<Rational>& t, std::vector<int>& idx, const std::string& where) {
    const int depth = static_cast<int>(idx.size());
    if (depth == t.rank()) {
        std::size_t off = 0;
        for (int i : idx) off = off * static_cast<std::size_t>(t.dim()) + static_cast<std::size_t>(i);
        t.data()[off] = json_rational(v, where);
        return;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != t.dim())
        throw ParseError(where + ": expected an array of length " + std::to_string(t.dim()) + " at depth " +
                         std::to_string(depth));
    for (int i = 0; i < t.dim(); ++i) {
        idx.push_back(i);
        json_fill(v[static_cast<std::size_t>(i)], t, idx, where);
        idx.pop_back();
    }
}

inline Tensor<Rational> json_tensor(const nlohmann::json& v, int rank, int dim, const std::string& where) {
    Tensor<Rational> t(rank, dim);
    std::vector<int> idx;
    json_fill(v, t, idx, where);
    return t;
}

inline std::vector<int> parse_wbar_key(const std::string& key, int m) {
    std::vector<int> idx;
    if (key.find(',') != std::string::npos) {
        std::size_t start = 0;
        while (start <= key.size()) {
            const std::size_t comma = key.find(',', start);
            const std::string part = key.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            idx.push_back(detail::parse_integer(part).convert_to<int>());
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else {
        for (char ch : key) {
            if (ch < '0' || ch > '9') throw ParseError("Wbar key '" + key + "': digits expected");
            idx.push_back(ch - '0');
        }
    }
    if (idx.size() != 4) throw ParseError("Wbar key '" + key + "': four indices expected");
    for (int& i : idx) {
        if (i < 1 || i > m) throw ParseError("Wbar key '" + key + "': index out of 1.." + std::to_string(m));
        --i;
    }
    return idx;
}

/// Sparse Wbar: every entry also sets its images under the algebraic symmetries.
inline Tensor<Rational> json_wbar_sparse(const nlohmann::json& obj, int m) {
    Tensor<Rational> W(4, m);
    std::set<std::array<int, 4>> assigned;
    auto put = [&](int a, int b, int c, int d, const Rational& v, const std::string& key) {
        const std::array<int, 4> k{a, b, c, d};
        if (assigned.count(k) && W(a, b, c, d) != v)
            throw ParseError("Wbar key '" + key + "' conflicts with an earlier entry or its symmetric image");
        W(a, b, c, d) = v;
        assigned.insert(k);
    };
    for (const auto& [key, value] : obj.items()) {
        const auto idx = parse_wbar_key(key, m);
        const Rational v = json_rational(value, "Wbar[" + key + "]");
        const int i = idx[0], j = idx[1], k = idx[2], l = idx[3];
        put(i, j, k, l, v, key);
        put(j, i, k, l, -v, key);
        put(i, j, l, k, -v, key);
        put(j, i, l, k, v, key);
        put(k, l, i, j, v, key);
        put(l, k, i, j, -v, key);
        put(k, l, j, i, -v, key);
        put(l, k, j, i, v, key);
    }
    return W;
}

}  // namespace detail

inline BoundaryCurvature<Rational> curvature_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("curvature: expected a JSON object");
    static const std::set<std::string> known{"schema", "n", "Rn", "Wbar", "N2", "jets"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ParseError("curvature: unknown field '" + key + "'");
    if (j.contains("schema") && j.at("schema") != 1) throw ParseError("curvature: unsupported schema");
    if (!j.contains("n") || !j.at("n").is_number_integer()) throw ParseError("curvature: integer field 'n' required");
    const int n = j.at("n").get<int>();
    if (n < 3 || n > 16) throw ParseError("curvature: n out of range");
    const int m = n - 1;

    Tensor<Rational> Rn = j.contains("Rn") ? detail::json_tensor(j.at("Rn"), 2, m, "Rn") : Tensor<Rational>(2, m);
    Tensor<Rational> Wbar(4, m);
    if (j.contains("Wbar")) {
        const auto& w = j.at("Wbar");
        if (w.is_object()) {
            Wbar = detail::json_wbar_sparse(w, m);
        } else {
            Wbar = detail::json_tensor(w, 4, m, "Wbar");
        }
    }
    const Rational N2 = j.contains("N2") ? detail::json_rational(j.at("N2"), "N2") : Rational(0);
    auto c = make_curvature<Rational>(n, std::move(Rn), std::move(Wbar), N2);

    struct Jet {
        const char* name;
        int rank;
        Tensor<Rational> BoundaryCurvature<Rational>::*field;
    };
    const Jet jets[] = {
        {"Rn_k", 3, &BoundaryCurvature<Rational>::Rn_k},   {"Rn_n", 2, &BoundaryCurvature<Rational>::Rn_n},
        {"Rn_kl", 4, &BoundaryCurvature<Rational>::Rn_kl}, {"Rn_nk", 3, &BoundaryCurvature<Rational>::Rn_nk},
        {"Rn_nn", 2, &BoundaryCurvature<Rational>::Rn_nn}, {"Rs_ij", 2, &BoundaryCurvature<Rational>::Rs_ij},
    };
    if (!j.contains("jets")) return c;
    const auto& js = j.at("jets");
    if (!js.is_object()) throw ParseError("curvature: 'jets' must be an object");
    for (const auto& [key, value] : js.items()) {
        bool found = false;
        for (const auto& jet : jets) found = found || key == jet.name;
        if (!found) throw ParseError("curvature: unknown jet '" + key + "'");
    }
    for (const auto& jet : jets) {
        if (!js.contains(jet.name)) continue;
        c.*(jet.field) = detail::json_tensor(js.at(jet.name), jet.rank, m, jet.name);
        std::erase(c.defaulted, std::string(jet.name));
    }
    refresh_completions(c);
    return c;
}

inline BoundaryCurvature<Rational> read_curvature_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curvature file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("curvature file '" + path + "': " + e.what());
    }
    return curvature_from_json(j);
}

namespace detail {

inline nlohmann::json tensor_json(const Tensor<Rational>& t, int depth = 0, std::size_t offset = 0) {
    if (depth == t.rank()) return to_string(t.data()[offset]);
    nlohmann::json arr = nlohmann::json::array();
    std::size_t stride = 1;
    for (int r = depth + 1; r < t.rank(); ++r) stride *= static_cast<std::size_t>(t.dim());
    for (int i = 0; i < t.dim(); ++i) arr.push_back(tensor_json(t, depth + 1, offset + static_cast<std::size_t>(i) * stride));
    return arr;
}

}  // namespace detail

/// Serializes all fields; Wbar as sparse 1-based keys i<j, k<l, (i,j) <= (k,l).
inline nlohmann::json curvature_to_json(const BoundaryCurvature<Rational>& c) {
    nlohmann::json j;
    j["n"] = c.n;
    j["Rn"] = detail::tensor_json(c.Rn);
    nlohmann::json w = nlohmann::json::object();
    const int m = c.m();
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int cc = 0; cc < m; ++cc)
                for (int d = cc + 1; d < m; ++d) {
                    if (std::make_pair(a, b) > std::make_pair(cc, d)) continue;
                    const Rational& v = c.Wbar(a, b, cc, d);
                    if (v == 0) continue;
                    w[std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(cc + 1) + "," +
                      std::to_string(d + 1)] = to_string(v);
                }
    j["Wbar"] = w;
    j["N2"] = to_string(c.N2);
    nlohmann::json jets;
    jets["Rn_k"] = detail::tensor_json(c.Rn_k);
    jets["Rn_n"] = detail::tensor_json(c.Rn_n);
    jets["Rn_kl"] = detail::tensor_json(c.Rn_kl);
    jets["Rn_nk"] = detail::tensor_json(c.Rn_nk);
    jets["Rn_nn"] = detail::tensor_json(c.Rn_nn);
    jets["Rs_ij"] = detail::tensor_json(c.Rs_ij);
    j["jets"] = jets;
    return j;
}

}  // namespace yamabe
