#pragma once

// JSON and CSV encodings of the analysis outputs.
//
//   complex number  -> [re, im]
//   matrix          -> array of rows, row-major
//   CSV numbers     -> shortest round-trip text, capped at 12 significant digits

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "nhqc/entanglement.hpp"
#include "nhqc/errors.hpp"
#include "nhqc/holonomy.hpp"
#include "nhqc/linalg.hpp"
#include "nhqc/noise.hpp"

namespace nhqc {

using json = nlohmann::ordered_json;

/// Raised when a matrix document cannot be decoded.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    std::string shortest(buf.data(), end);

    std::string mantissa;
    for (char c : shortest.substr(0, shortest.find('e'))) {
        if (c >= '0' && c <= '9') {
            mantissa.push_back(c);
        }
    }
    const auto first = mantissa.find_first_not_of('0');
    const auto last = mantissa.find_last_not_of('0');
    const std::size_t digits = first == std::string::npos ? 1 : last - first + 1;
    if (digits <= 12) {
        return shortest;
    }
    const auto capped = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                      std::chars_format::general, 12);
    return {buf.data(), capped.ptr};
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const GateReport& r) {
    json j;
    j["holonomy"] = to_json(r.holonomy);
    j["cyclicity_residual"] = r.cyclicity_residual;
    j["max_dynamical_norm"] = r.max_dynamical_norm;
    j["leakage"] = r.leakage;
    j["analytic_distance"] = r.analytic_distance ? json(*r.analytic_distance) : json(nullptr);
    return j;
}

inline json to_json(const EntanglementReport& r) {
    json j;
    j["g1"] = to_json(r.invariants.g1);
    j["g2"] = r.invariants.g2;
    j["weyl"] = json::array({r.weyl[0], r.weyl[1], r.weyl[2]});
    j["ep"] = r.ep;
    j["ep_mc"] = {{"estimate", r.ep_mc.estimate}, {"std_error", r.ep_mc.std_error}};
    j["cnot_equivalent"] = r.cnot_equivalent;
    return j;
}

inline json tolerances_json() {
    return {{"construction", tol::construction},
            {"spectral", tol::spectral},
            {"gate", tol::gate},
            {"breach", 1e-8}};
}

/// Flattens a JSON document into `path,value` CSV rows.
inline void write_flat_csv(const json& doc, std::ostream& out) {
    out << "field,value\n";
    auto walk = [&](auto&& self, const json& node, const std::string& path) -> void {
        if (node.is_object()) {
            for (const auto& [key, value] : node.items()) {
                self(self, value, path.empty() ? key : path + "." + key);
            }
        } else if (node.is_array()) {
            for (std::size_t i = 0; i < node.size(); ++i) {
                self(self, node[i], path + "[" + std::to_string(i) + "]");
            }
        } else if (node.is_number_float()) {
            out << path << ',' << format_number(node.get<double>()) << '\n';
        } else if (node.is_string()) {
            out << path << ',' << node.get<std::string>() << '\n';
        } else {
            out << path << ',' << node.dump() << '\n';
        }
    };
    walk(walk, doc, "");
}

inline void write_sweep_csv(const SweepTable& table, std::ostream& out) {
    out << "ratio1,ratio2,fidelity,leakage\n";
    for (std::size_t i = 0; i < table.axis1.size(); ++i) {
        for (std::size_t j = 0; j < table.axis2.size(); ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            out << format_number(table.axis1[i]) << ',' << format_number(table.axis2[j]) << ','
                << format_number(table.fidelity(ii, jj)) << ','
                << format_number(table.leakage(ii, jj)) << '\n';
        }
    }
}

inline json to_json(const SweepTable& table) {
    json j;
    j["axis1"] = table.axis1;
    j["axis2"] = table.axis2;
    json fid = json::array(), leak = json::array();
    for (Eigen::Index i = 0; i < table.fidelity.rows(); ++i) {
        json frow = json::array(), lrow = json::array();
        for (Eigen::Index k = 0; k < table.fidelity.cols(); ++k) {
            frow.push_back(table.fidelity(i, k));
            lrow.push_back(table.leakage(i, k));
        }
        fid.push_back(std::move(frow));
        leak.push_back(std::move(lrow));
    }
    j["fidelity"] = std::move(fid);
    j["leakage"] = std::move(leak);
    return j;
}

namespace detail {

inline cplx parse_complex(const json& node) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
        throw ParseError("complex entries must be [re, im] number pairs, got " + node.dump());
    }
    return {node[0].get<double>(), node[1].get<double>()};
}

} // namespace detail

/// Decodes a square matrix given either as an array of rows of [re, im]
/// pairs or as a flat row-major array of n*n pairs.
inline ComplexMatrix matrix_from_json(const json& doc) {
    if (!doc.is_array() || doc.empty()) {
        throw ParseError("matrix must be a non-empty JSON array");
    }
    const bool nested = doc[0].is_array() && !doc[0].empty() && doc[0][0].is_array();
    if (nested) {
        const auto n = static_cast<Eigen::Index>(doc.size());
        ComplexMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const json& row = doc[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
                throw ParseError("matrix row " + std::to_string(i) + " has wrong length");
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                m(i, k) = detail::parse_complex(row[static_cast<std::size_t>(k)]);
            }
        }
        return m;
    }
    const auto count = static_cast<Eigen::Index>(doc.size());
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
    if (n * n != count) {
        throw ParseError("flat matrix has " + std::to_string(count) +
                         " entries, which is not a perfect square");
    }
    ComplexMatrix m(n, n);
    for (Eigen::Index idx = 0; idx < count; ++idx) {
        m(idx / n, idx % n) = detail::parse_complex(doc[static_cast<std::size_t>(idx)]);
    }
    return m;
}

} // namespace nhqc
