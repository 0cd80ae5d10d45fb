#include "qamidx/errors.hpp"
#include "qamidx/rng.hpp"
#include "qamidx/serialization.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <limits>

namespace py = pybind11;
using namespace qamidx;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
    case json::value_t::null:
        return py::none();
    case json::value_t::boolean:
        return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
        return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned:
        return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float:
        return py::float_(j.get<double>());
    case json::value_t::string:
        return py::str(j.get<std::string>());
    case json::value_t::array: {
        py::list out;
        for (const auto& e : j) out.append(json_to_py(e));
        return out;
    }
    case json::value_t::object: {
        py::dict out;
        for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
        return out;
    }
    default:
        throw std::invalid_argument("unsupported JSON value");
    }
}

json py_to_json(py::handle obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) {
        try {
            return obj.cast<std::int64_t>();
        } catch (const py::cast_error&) {
            return obj.cast<std::uint64_t>();
        }
    }
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        json out = json::object();
        for (auto item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    if (py::isinstance<py::sequence>(obj)) {
        json out = json::array();
        for (auto item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw std::invalid_argument("cannot convert this Python value to JSON");
}

Subset mask_from_indices(const std::vector<int>& indices, int k) {
    Subset s = 0;
    for (int i : indices) {
        if (i < 1 || i > k) throw std::invalid_argument("subset index out of range 1..K");
        Subset bit = Subset(1) << (i - 1);
        if (s & bit) throw std::invalid_argument("duplicate subset index");
        s |= bit;
    }
    return s;
}

SideInfo side_from_args(const IndexCode& code, const std::vector<int>& subset,
                        const IntVec& values) {
    Subset s = mask_from_indices(subset, code.k);
    if (values.size() != std::size_t(subset_size(s)))
        throw std::invalid_argument("values needs one entry per subset element");
    SideInfo side;
    side.subset = s;
    side.values.assign(std::size_t(code.k), 0);
    std::size_t at = 0;
    for (int i = 1; i <= code.k; ++i)
        if (subset_contains(s, i)) side.values[std::size_t(i - 1)] = values[at++];
    return side;
}

py::dict distance_to_py(const SubsetDistance& d, int k) {
    py::dict out;
    out["subset"] = json_to_py(subset_to_json(d.s, k));
    out["d_sq"] = py::int_(d.d_sq);
    out["method"] = py::str(to_string(d.method));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Z_M-linear index codes on multidimensional QAM constellations";

    py::register_exception<invalid_code_error>(mod, "InvalidCodeError", PyExc_ValueError);
    py::register_exception<budget_error>(mod, "BudgetError", PyExc_RuntimeError);

    py::class_<IndexCode>(mod, "IndexCode")
        .def_property_readonly("m", [](const IndexCode& c) { return c.modulus.value(); })
        .def_readonly("k", &IndexCode::k)
        .def_readonly("matrix", &IndexCode::c)
        .def_readonly("circulant", &IndexCode::circulant)
        .def("__repr__", [](const IndexCode& c) {
            std::string r = "IndexCode(m=" + std::to_string(c.modulus.value()) +
                            ", k=" + std::to_string(c.k) + ", rows=[";
            for (int i = 0; i < c.k; ++i)
                r += (i ? ", " : "") + format_row(c.c[std::size_t(i)]);
            return r + "])";
        });

    mod.def(
        "make_circulant",
        [](Int m, int k, const IntVec& first_row) {
            return make_circulant(Modulus(m), k, first_row);
        },
        py::arg("m"), py::arg("k"), py::arg("first_row"),
        "Circulant code from its first row; raises InvalidCodeError when det is not a unit.");
    mod.def(
        "make_general", [](Int m, const IntMat& rows) { return make_general(Modulus(m), rows); },
        py::arg("m"), py::arg("rows"), "Code from an arbitrary square generator matrix.");

    mod.def(
        "encode", [](const IndexCode& code, const IntVec& w) { return encode(code, w); },
        py::arg("code"), py::arg("message"));
    mod.def(
        "decode",
        [](const IndexCode& code, const std::vector<double>& y, const std::vector<int>& subset,
           const IntVec& values, std::uint64_t cap) {
            if (subset.empty()) return decode(code, y);
            return decode(code, y, side_from_args(code, subset, values), cap);
        },
        py::arg("code"), py::arg("y"), py::arg("subset") = std::vector<int>{},
        py::arg("values") = IntVec{}, py::arg("cap") = default_enumeration_cap,
        "Nearest-codeword decode; with a subset, values holds the known messages in subset "
        "order and decoding runs over the expurgated subcode.");
    mod.def(
        "subcode_points",
        [](const IndexCode& code, const std::vector<int>& subset, const IntVec& values,
           std::uint64_t cap) {
            return subcode_points(code, side_from_args(code, subset, values), cap);
        },
        py::arg("code"), py::arg("subset"), py::arg("values"),
        py::arg("cap") = default_enumeration_cap);

    mod.def(
        "subset_distance",
        [](const IndexCode& code, const std::vector<int>& subset) {
            return distance_to_py(subset_distance(code, mask_from_indices(subset, code.k)),
                                  code.k);
        },
        py::arg("code"), py::arg("subset"));
    mod.def(
        "brute_force_distance",
        [](const IndexCode& code, const std::vector<int>& subset, std::uint64_t pair_budget) {
            return distance_to_py(
                brute_force_distance(code, mask_from_indices(subset, code.k), pair_budget),
                code.k);
        },
        py::arg("code"), py::arg("subset"), py::arg("pair_budget") = default_pair_budget);

    mod.def(
        "gamma",
        [](const IndexCode& code, bool use_symmetry) {
            return json_to_py(to_json(gamma(code, use_symmetry)));
        },
        py::arg("code"), py::arg("use_symmetry") = true,
        "Full per-subset gain report as a dict with entries, gamma_db, argmin_subsets.");

    mod.def(
        "search_circulant",
        [](py::dict spec) {
            SearchSpec s = search_spec_from_json(py_to_json(spec));
            return json_to_py(search_to_json(s, search_circulant(s), false));
        },
        py::arg("spec"),
        "Exhaustive circulant search; spec is a dict with at least m and k. Returns "
        "{spec, result}.");
    mod.def(
        "search_general",
        [](py::dict spec) {
            SearchSpec s = search_spec_from_json(py_to_json(spec));
            return json_to_py(search_to_json(s, search_general(s), true));
        },
        py::arg("spec"), "Exhaustive search over all K-by-K generator matrices.");

    mod.def(
        "simulate",
        [](const IndexCode& code, const std::vector<int>& subset, py::dict config) {
            ChannelConfig cfg = channel_config_from_json(py_to_json(config));
            return json_to_py(
                to_json(simulate(code, mask_from_indices(subset, code.k), cfg)));
        },
        py::arg("code"), py::arg("subset"), py::arg("config"),
        "Seeded broadcast simulation; config is a dict (snr_db_points and seed at minimum).");

    mod.def(
        "capacity_min_snr_db",
        [](const std::vector<double>& rates, const std::vector<int>& subset) {
            return capacity_min_snr_db(rates, mask_from_indices(subset, int(rates.size())));
        },
        py::arg("rates"), py::arg("subset") = std::vector<int>{},
        "Least SNR supporting the rates for a receiver knowing the subset; -inf when the "
        "side information already covers the full rate.");

    mod.def(
        "symmetric_mod", [](Int a, Int m) { return symmetric_mod(a, Modulus(m)); }, py::arg("a"),
        py::arg("m"));
    mod.def(
        "is_unit", [](Int a, Int m) { return is_unit(a, Modulus(m)); }, py::arg("a"),
        py::arg("m"));
    mod.def(
        "det_mod", [](const IntMat& rows, Int m) { return det_mod(rows, Modulus(m)); },
        py::arg("rows"), py::arg("m"));
    mod.def(
        "orbit_representatives", [](Int m) { return orbit_representatives(Modulus(m)); },
        py::arg("m"), "Canonical representatives of Z_M under unit scaling (divisors, then 0).");
    mod.def("transmit_offset", &transmit_offset, py::arg("code"),
            "Deterministic shift that centers the transmitted constellation at zero mean.");

    mod.attr("default_enumeration_cap") = py::int_(default_enumeration_cap);
    mod.attr("rng_algorithm_name") = py::str(rng_algorithm_name);
}
