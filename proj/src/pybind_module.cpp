#include "genusavg/classnum.hpp"
#include "genusavg/config.hpp"
#include "genusavg/errors.hpp"
#include "genusavg/genusformula.hpp"
#include "genusavg/json_io.hpp"
#include "genusavg/lattice.hpp"
#include "genusavg/localdensity.hpp"
#include "genusavg/oracle.hpp"
#include "genusavg/watson.hpp"

#include <pybind11/pybind11.h>

#include <string>

namespace py = pybind11;
using namespace genusavg;

namespace {

Int int_from_py(const py::object& o) {
    return Int(py::str(o).cast<std::string>());
}

Rat rat_from_py(const py::object& o) {
    if (py::hasattr(o, "numerator") && py::hasattr(o, "denominator")) {
        Rat r(Int(py::str(o.attr("numerator")).cast<std::string>()),
              Int(py::str(o.attr("denominator")).cast<std::string>()));
        r.canonicalize();
        return r;
    }
    return parse_rat(py::str(o).cast<std::string>());
}

py::object rat_to_py(const Rat& r) {
    py::object fraction =
        py::module_::import("fractions").attr("Fraction");
    py::object num = py::module_::import("builtins").attr("int")(
        py::str(r.get_num().get_str()));
    py::object den = py::module_::import("builtins").attr("int")(
        py::str(r.get_den().get_str()));
    return fraction(num, den);
}

py::object int_to_py(const Int& n) {
    return py::module_::import("builtins").attr("int")(
        py::str(n.get_str()));
}

GramMatrix gram_from_py(const py::object& o) {
    py::sequence seq = o.cast<py::sequence>();
    if (seq.size() != 3)
        throw InvalidArgument("lattice: expected 3 diagonal entries or rows");
    py::object first = seq[0];
    if (py::isinstance<py::int_>(first))
        return GramMatrix::diag(int_from_py(seq[0]), int_from_py(seq[1]),
                                int_from_py(seq[2]));
    GramMatrix g;
    for (int i = 0; i < 3; ++i) {
        py::sequence row = seq[i].cast<py::sequence>();
        if (row.size() != 3)
            throw InvalidArgument("lattice: rows need 3 entries");
        for (int j = 0; j < 3; ++j) g.at(i, j) = int_from_py(row[j]);
    }
    validate(g);
    return g;
}

py::object json_to_py(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

} // namespace

PYBIND11_MODULE(_genusavg, m) {
    m.doc() = "Exact Siegel-Weil genus averages of positive-definite "
              "integral ternary quadratic forms";

    py::register_exception<Error>(m, "GenusAvgError");

    m.def(
        "hurwitz",
        [](const py::object& x) { return rat_to_py(hurwitz(rat_from_py(x))); },
        py::arg("x"),
        "Hurwitz class number H(x); 0 for non-integral or 1, 2 mod 4 "
        "arguments");
    m.def(
        "class_number",
        [](const py::object& d) { return int_to_py(h_primitive(int_from_py(d))); },
        py::arg("d"), "Primitive class number h(d) for d < 0");
    m.def(
        "genus_avg",
        [](const py::object& lat, const py::object& n) {
            return rat_to_py(
                evaluate_genus_avg(profile(gram_from_py(lat)), int_from_py(n)));
        },
        py::arg("lattice"), py::arg("n"),
        "Exact r(n, gen(L)) for a Gram matrix or diagonal triple");
    m.def(
        "representation_count",
        [](const py::object& lat, const py::object& n) {
            return int_to_py(
                count_representations(gram_from_py(lat), int_from_py(n)));
        },
        py::arg("lattice"), py::arg("n"),
        "Exact r(n, L) by direct lattice-point enumeration");
    m.def(
        "semi_oracle",
        [](const py::object& lat, const py::object& n) {
            return rat_to_py(
                siegel_semi_oracle(profile(gram_from_py(lat)), int_from_py(n)));
        },
        py::arg("lattice"), py::arg("n"),
        "r(n, gen(L)) via the independent Minkowski-Siegel route");
    m.def(
        "local_density",
        [](const py::object& lat, const py::object& p, const py::object& n) {
            DensityValue v =
                alpha_best(profile(gram_from_py(lat)), int_from_py(p),
                           int_from_py(n));
            return py::make_tuple(rat_to_py(v.value), v.provenance);
        },
        py::arg("lattice"), py::arg("p"), py::arg("n"),
        "(alpha_p(n, L), provenance)");
    m.def(
        "formula",
        [](const py::object& lat, long samples) {
            return json_to_py(piecewise_to_json(
                synthesize_formula(profile(gram_from_py(lat)), samples)));
        },
        py::arg("lattice"), py::arg("samples") = 30,
        "Verified piecewise Hurwitz class number formula as a dict");
    m.def(
        "watson_chain",
        [](const py::object& lat) {
            return json_to_py(chain_to_json(reduce_to_stable(
                rescale_to_primitive(gram_from_py(lat)).first)));
        },
        py::arg("lattice"), "Reduction chain to a stable lattice");
    m.def(
        "verify",
        [](const py::object& nmax) {
            return json_to_py(
                report_to_json(verify_all(default_corpus(), int_from_py(nmax))));
        },
        py::arg("nmax") = 50, "Cross-verification battery report as a dict");
    m.def(
        "set_depth_cap",
        [](std::uint64_t cap) { config().depth_cap = cap; },
        py::arg("cap"), "Max modulus p^r for the local-density oracle");
}
