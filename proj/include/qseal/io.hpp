#pragma once

// JSON documents for sealed memories, seal records, copy grants, encoding
// families and analyzer reports. Complex amplitudes are [re, im] pairs;
// doubles are written in shortest round-trip form so values reload bit-exact.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qseal/analyzer.hpp"
#include "qseal/errors.hpp"
#include "qseal/qla.hpp"
#include "qseal/seal.hpp"

namespace qseal::io {

using json = nlohmann::json;

inline json amps_to_json(std::span<const Complex> v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(json::array({z.real(), z.imag()}));
    return a;
}

inline Vector amps_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("amplitudes must be an array of [re, im] pairs");
    Vector v;
    v.reserve(j.size());
    for (const auto& z : j) {
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
            throw FormatError("amplitude must be a [re, im] pair of numbers");
        v.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    return v;
}

inline StateVector state_from_json(const json& j) {
    try {
        return StateVector(amps_from_json(j));
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(std::string("invalid state: ") + e.what());
    }
}

inline json operator_to_json(const Operator& op) {
    json rows = json::array();
    for (std::size_t i = 0; i < op.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < op.dim(); ++j) row.push_back(json::array({op(i, j).real(), op(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Operator operator_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("operator must be an array of rows");
    const std::size_t n = j.size();
    Vector entries;
    for (const auto& row : j) {
        auto r = amps_from_json(row);
        if (r.size() != n) throw FormatError("operator must be square");
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return Operator(n, std::move(entries));
}

namespace detail {

template <typename T>
T field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("missing field \"") + name + "\"");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("field \"") + name + "\" has the wrong type");
    }
}

inline const json& array_field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("missing field \"") + name + "\"");
    const auto& a = j.at(name);
    if (!a.is_array()) throw FormatError(std::string("field \"") + name + "\" must be an array");
    return a;
}

}  // namespace detail

// --- sealed memory ----------------------------------------------------------

inline json to_json(const SealedMemory& m) {
    json t = json::array();
    for (const auto& s : m.triplets()) t.push_back({{"amps", amps_to_json(s.amps())}});
    return {{"triplets", t}};
}

inline SealedMemory memory_from_json(const json& j) {
    std::vector<StateVector> states;
    for (const auto& t : detail::array_field(j, "triplets")) {
        if (!t.is_object() || !t.contains("amps")) throw FormatError("missing field \"amps\"");
        auto s = state_from_json(t.at("amps"));
        if (s.dim() != kTripletDim) throw FormatError("sealed triplet must have 8 amplitudes");
        states.push_back(std::move(s));
    }
    return SealedMemory(std::move(states));
}

// --- seal record ------------------------------------------------------------

inline json to_json(const SealRecord& r) {
    json t = json::array();
    for (const auto& x : r.triplets)
        t.push_back({{"message_bit", x.message_bit},
                     {"control_position", x.control_position},
                     {"control_state", x.control.label()}});
    return {{"triplets", t}};
}

inline SealRecord record_from_json(const json& j) {
    SealRecord r;
    for (const auto& t : detail::array_field(j, "triplets")) {
        TripletRecord x;
        const auto bit = detail::field<int>(t, "message_bit");
        const auto pos = detail::field<int>(t, "control_position");
        if (bit < 0 || bit > 1) throw FormatError("message_bit must be 0 or 1");
        if (pos < 0 || pos > 2) throw FormatError("control_position must be 0, 1 or 2");
        x.message_bit = static_cast<Bit>(bit);
        x.control_position = static_cast<std::size_t>(pos);
        x.control = ControlState::from_label(detail::field<std::string>(t, "control_state"));
        r.triplets.push_back(x);
    }
    return r;
}

// --- copy grant -------------------------------------------------------------

inline json to_json(const CopyGrant& g) {
    json e = json::array();
    for (const auto& x : g.entries)
        e.push_back({{"triplet_index", x.triplet_index},
                     {"qubit_position", x.qubit_position},
                     {"amps", amps_to_json(x.copy.amps())}});
    return {{"entries", e}};
}

inline CopyGrant grant_from_json(const json& j) {
    CopyGrant g;
    for (const auto& e : detail::array_field(j, "entries")) {
        const auto idx = detail::field<long long>(e, "triplet_index");
        const auto pos = detail::field<long long>(e, "qubit_position");
        if (idx < 0) throw FormatError("triplet_index must be non-negative");
        if (pos < 0 || pos > 2) throw FormatError("qubit_position must be 0, 1 or 2");
        if (!e.contains("amps")) throw FormatError("missing field \"amps\"");
        auto s = state_from_json(e.at("amps"));
        if (s.dim() != 2) throw FormatError("copy must be a single-qubit state");
        g.entries.push_back({static_cast<std::size_t>(idx), static_cast<std::size_t>(pos), std::move(s)});
    }
    return g;
}

// --- encoding families ------------------------------------------------------

inline json to_json(const EncodingFamilies& f) {
    auto fam = [](const std::vector<StateVector>& v) {
        json a = json::array();
        for (const auto& s : v) a.push_back(amps_to_json(s.amps()));
        return a;
    };
    return {{"dim", f.dim}, {"family0", fam(f.family0)}, {"family1", fam(f.family1)}};
}

inline EncodingFamilies families_from_json(const json& j) {
    EncodingFamilies f;
    const auto dim = detail::field<long long>(j, "dim");
    if (dim <= 0) throw FormatError("dim must be positive");
    f.dim = static_cast<std::size_t>(dim);
    for (Bit b = 0; b < 2; ++b) {
        auto& out = b ? f.family1 : f.family0;
        for (const auto& s : detail::array_field(j, b ? "family1" : "family0")) out.push_back(state_from_json(s));
    }
    try {
        f.validate();
    } catch (const Error& e) {
        throw FormatError(e.what());
    }
    return f;
}

// --- analyzer report --------------------------------------------------------

inline json states_to_json(const std::vector<StateVector>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(amps_to_json(s.amps()));
    return a;
}

inline json to_json(const SubspaceDecomposition& d) {
    return {{"dim", d.dim},
            {"dim0", d.basis0.size()},
            {"dim1", d.basis1.size()},
            {"max_cross_overlap", d.max_cross_overlap},
            {"orthogonal", d.orthogonal()},
            {"basis0", states_to_json(d.basis0)},
            {"basis1", states_to_json(d.basis1)}};
}

inline json to_json(const DiscriminationMeasurement& m) {
    return {{"ambient_dim", m.ambient_dim},
            {"sector_dim", m.sector_dim},
            {"padded_dim", m.padded_dim()},
            {"residual_dim", m.residual_dim},
            {"logical_qubit", "most_significant"},
            {"projector0", operator_to_json(m.projector0)},
            {"projector1", operator_to_json(m.projector1)},
            {"embedding", operator_to_json(m.embedding)}};
}

// --- files ------------------------------------------------------------------

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw FormatError("failed writing '" + path + "'");
}

}  // namespace qseal::io
