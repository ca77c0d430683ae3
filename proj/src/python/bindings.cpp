#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ellgen/catalog.hpp"
#include "ellgen/cli.hpp"
#include "ellgen/dataset_io.hpp"
#include "ellgen/errors.hpp"
#include "ellgen/jacobi.hpp"
#include "ellgen/localization.hpp"
#include "ellgen/theta.hpp"

namespace py = pybind11;
using namespace ellgen;

namespace {

ActionData dataset_arg(const std::string& source) {
    for (const auto& n : builtin_names())
        if (n == source) return builtin(n).data;
    for (const auto& n : extra_names())
        if (n == source) return builtin(n).data;
    return dataset_from_text(source);
}

std::map<std::string, std::string> wpoly_dict(const WPoly& p) {
    std::map<std::string, std::string> out;
    for (const auto& [e, c] : p.terms()) out[std::to_string(e)] = rat_to_string(c);
    return out;
}

}  // namespace

PYBIND11_MODULE(_ellgen, m) {
    m.doc() = "Equivariant elliptic genera by fixed-point localization";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidDataset>(m, "InvalidDataset", PyExc_ValueError);
    py::register_exception<UnknownEntry>(m, "UnknownEntry", PyExc_KeyError);
    py::register_exception<MissingTableEntry>(m, "MissingTableEntry", PyExc_ValueError);
    py::register_exception<ZeroWeightNormalBundle>(m, "ZeroWeightNormalBundle", PyExc_ValueError);
    py::register_exception<InconsistentAnomaly>(m, "InconsistentAnomaly", PyExc_ValueError);
    py::register_exception<DegreeOutOfRange>(m, "DegreeOutOfRange", PyExc_ValueError);
    py::register_exception<NearPole>(m, "NearPole", PyExc_ArithmeticError);

    m.def("catalog_names", [](bool extras) { return extras ? extra_names() : builtin_names(); }, py::arg("extras") = false);
    m.def("catalog_json", [](const std::string& name) {
        CatalogEntry e = builtin(name);
        return dataset_to_json(e.data, e.name).dump();
    });
    m.def("operator_names", [] {
        std::vector<std::string> out;
        for (const auto& op : all_operators()) out.push_back(operator_name(op));
        return out;
    });
    m.def("validate", [](const std::string& source) {
        ValidationReport v = validate(dataset_arg(source));
        py::dict d;
        d["valid"] = v.valid;
        d["errors"] = v.errors;
        d["warnings"] = v.warnings;
        return d;
    }, py::arg("dataset"));
    m.def("anomaly_index", [](const std::string& source) { return anomaly_index(dataset_arg(source)); }, py::arg("dataset"));
    m.def("expand_json", [](const std::string& source, const std::string& op, int order) {
        ActionData d = dataset_arg(source);
        require_valid(d);
        GenusResult r;
        {
            py::gil_scoped_release release;
            r = equivariant_character(d, operator_from_name(op), order);
        }
        return result_to_json(r).dump();
    }, py::arg("dataset"), py::arg("operator"), py::arg("order") = 16);
    m.def("rigid", [](const std::string& source, const std::string& op, int order) {
        ActionData d = dataset_arg(source);
        require_valid(d);
        py::gil_scoped_release release;
        return rigidity_check(equivariant_character(d, operator_from_name(op), order)).rigid;
    }, py::arg("dataset"), py::arg("operator"), py::arg("order") = 16);
    m.def("theta", [](const std::string& kind, cplx t, cplx tau, double eps) {
        return theta_numeric(theta_kind_from_name(kind), t, tau, eps);
    }, py::arg("kind"), py::arg("t"), py::arg("tau"), py::arg("eps") = 1e-14);
    m.def("borel_weil_character", [](int k) { return wpoly_dict(borel_weil_character(k)); }, py::arg("k"));
    m.def("count_zeros", [](const std::string& source, const std::string& op, cplx tau) {
        ActionData d = dataset_arg(source);
        require_valid(d);
        NumericFn F = component_function(d, operator_from_name(op), Mono(d.base_table->size(), 0));
        ZeroCount z = count_zeros(F, tau, cplx(-1.013, -0.021) - tau, 2.0, 2.0 * tau);
        py::dict out;
        out["identically_zero"] = z.identically_zero;
        out["count"] = z.count;
        out["max_abs"] = z.max_abs;
        return out;
    }, py::arg("dataset"), py::arg("operator"), py::arg("tau"));
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
