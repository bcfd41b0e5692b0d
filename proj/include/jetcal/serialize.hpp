#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "jetcal/connection.hpp"
#include "jetcal/invariants.hpp"
#include "jetcal/numeric.hpp"

// JSON emission with canonical expression strings, so output is stable
// across runs and machines.

namespace jetcal {

namespace detail {

inline nlohmann::json json_matrix(const Tensor2& t, unsigned threads = 1) {
    const int m = t.dim();
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(m),
                                               std::vector<std::string>(static_cast<std::size_t>(m)));
    parallel_for(m * m, threads, [&](int idx) {
        const int i = idx / m, j = idx % m;
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            canonical_string(t.at(i + 1, j + 1));
    });
    return nlohmann::json(rows);
}

inline nlohmann::json json_cube(const Tensor3& t, unsigned threads = 1) {
    const int m = t.dim();
    std::vector<std::vector<std::vector<std::string>>> cube(
        static_cast<std::size_t>(m),
        std::vector<std::vector<std::string>>(static_cast<std::size_t>(m),
                                              std::vector<std::string>(static_cast<std::size_t>(m))));
    parallel_for(m * m * m, threads, [&](int idx) {
        const int i = idx / (m * m), j = (idx / m) % m, k = idx % m;
        cube[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
            [static_cast<std::size_t>(k)] = canonical_string(t.at(i + 1, j + 1, k + 1));
    });
    return nlohmann::json(cube);
}

inline nlohmann::json json_list(const std::vector<Expr>& es) {
    std::vector<std::string> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(canonical_string(e));
    return nlohmann::json(out);
}

}  // namespace detail

inline nlohmann::json to_json(const InvariantSet& inv, bool trivializable, unsigned threads = 1) {
    nlohmann::json j;
    j["m"] = inv.m;
    j["W2"] = detail::json_matrix(inv.W2, threads);
    j["I2"] = detail::json_cube(inv.I2, threads);
    j["W3"] = detail::json_matrix(inv.W3, threads);
    j["I4"] = detail::json_matrix(inv.I4, threads);
    j["Hx"] = canonical_string(inv.Hx);
    j["Hm1"] = detail::json_list(inv.Hm1);
    j["trivializable"] = trivializable;
    return j;
}

inline nlohmann::json to_json(const ConnectionCoefficients& c, unsigned threads = 1) {
    nlohmann::json j;
    j["A"] = detail::json_matrix(c.A, threads);
    j["B"] = detail::json_matrix(c.B, threads);
    j["C"] = detail::json_matrix(c.C, threads);
    j["Gx"] = detail::json_matrix(c.Gx, threads);
    j["Gm2"] = detail::json_cube(c.Gm2, threads);
    j["Gm3"] = detail::json_cube(c.Gm3, threads);
    j["E"] = detail::json_list(c.E);
    j["Fm2"] = detail::json_list(c.Fm2);
    j["Fm3"] = detail::json_list(c.Fm3);
    j["Hx"] = canonical_string(c.Hx);
    j["Hm1"] = detail::json_list(c.Hm1);
    j["Hm2"] = detail::json_list(c.Hm2);
    j["Hm3"] = detail::json_list(c.Hm3);
    return j;
}

inline nlohmann::json to_json(const NumericInvariantSet& n) {
    // Flush negative zeros so that serialized output is stable across
    // stencil roundings.
    auto tidy = [](nlohmann::json v) {
        std::function<void(nlohmann::json&)> walk = [&](nlohmann::json& x) {
            if (x.is_number_float()) {
                if (x.get<double>() == 0.0) x = 0.0;
            } else if (x.is_array()) {
                for (auto& k : x) walk(k);
            }
        };
        walk(v);
        return v;
    };
    nlohmann::json j;
    j["m"] = n.m;
    j["W2"] = tidy(n.W2);
    j["I2"] = tidy(n.I2);
    j["W3"] = tidy(n.W3);
    j["I4"] = tidy(n.I4);
    j["Hx"] = tidy(n.Hx);
    j["Hm1"] = tidy(n.Hm1);
    return j;
}

}  // namespace jetcal
