#pragma once

// JSON serialization used by the CLI and the file formats: exact rationals
// travel as "num/den" strings, reals as JSON numbers.  KForm layout:
//   {"degree": k, "coeffs": {"1,2,3": "1", "1,4,5": 0.5, ...}}
// with omitted monomials equal to zero.

#include "g2/forms.hpp"

#include <json.hpp>

#include <string>

namespace g2 {

using json = nlohmann::json;

inline unsigned mask_from_label(const std::string& label, int expect_degree) {
    unsigned mask = 0;
    int deg = 0;
    int prev = 0;
    for (size_t i = 0; i < label.size();) {
        size_t j = label.find(',', i);
        if (j == std::string::npos) j = label.size();
        int axis = std::stoi(label.substr(i, j - i));
        if (axis < 1 || axis > 7) throw std::invalid_argument("axis out of range in '" + label + "'");
        if (axis <= prev) throw std::invalid_argument("indices must increase in '" + label + "'");
        prev = axis;
        mask |= 1u << (axis - 1);
        ++deg;
        i = j + 1;
    }
    if (deg != expect_degree) throw std::invalid_argument("tuple length != degree in '" + label + "'");
    return mask;
}

inline json to_json(const FormQ& f) {
    json coeffs = json::object();
    int n = ext7::degree_size(f.degree);
    for (int r = 0; r < n; ++r)
        if (sgn(f[r]) != 0)
            coeffs[monomial_label(ext7::mask_of_rank(f.degree, r))] = rat_to_string(f[r]);
    return json{{"degree", f.degree}, {"coeffs", coeffs}};
}

inline json to_json(const FormR& f) {
    json coeffs = json::object();
    int n = ext7::degree_size(f.degree);
    for (int r = 0; r < n; ++r)
        if (f[r] != 0.0) coeffs[monomial_label(ext7::mask_of_rank(f.degree, r))] = f[r];
    return json{{"degree", f.degree}, {"coeffs", coeffs}};
}

inline FormQ formq_from_json(const json& j) {
    FormQ f(j.at("degree").get<int>());
    for (auto& [key, val] : j.at("coeffs").items()) {
        unsigned mask = mask_from_label(key, f.degree);
        if (!val.is_string())
            throw std::invalid_argument("exact form coefficients must be \"num/den\" strings");
        f.set(mask, rat_from_string(val.get<std::string>()));
    }
    return f;
}

inline FormR formr_from_json(const json& j) {
    FormR f(j.at("degree").get<int>());
    for (auto& [key, val] : j.at("coeffs").items()) {
        unsigned mask = mask_from_label(key, f.degree);
        if (val.is_string())
            f.set(mask, rat_from_string(val.get<std::string>()).get_d());
        else
            f.set(mask, val.get<double>());
    }
    return f;
}

} // namespace g2
