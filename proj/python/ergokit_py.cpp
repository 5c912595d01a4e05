#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ergokit/error.hpp"
#include "ergokit/scalar.hpp"
#include "ergokit/workspace.hpp"

namespace py = pybind11;
using namespace ergokit;

namespace {

Request make_request(const std::string& command, const std::string& op, const std::vector<std::string>& args,
                     std::optional<long> budget, std::optional<std::string> eps, std::optional<long> trunc, bool plot,
                     const std::string& out) {
    Request r;
    r.command = command;
    r.op = op;
    r.args = args;
    r.budget = budget;
    r.eps = eps;
    r.trunc = trunc;
    r.plot = plot;
    r.out = out;
    return r;
}

py::tuple as_tuple(const Outcome& o) { return py::make_tuple(o.exit_code, o.out, o.err); }

}  // namespace

PYBIND11_MODULE(_ergokit, m) {
    m.doc() = "Exact piecewise translations of the real line";

    static py::exception<Error> exc(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = py::handle(exc.ptr())(py::str(e.what()));
            err.attr("code") = e.code();
            err.attr("message") = e.message();
            PyErr_SetObject(exc.ptr(), err.ptr());
        }
    });

    m.def(
        "run_text",
        [](const std::string& text, const std::string& command, const std::string& op,
           const std::vector<std::string>& args, std::optional<long> budget, std::optional<std::string> eps,
           std::optional<long> trunc, bool plot, const std::string& out) {
            Outcome o;
            {
                py::gil_scoped_release nogil;
                o = run_text(text, make_request(command, op, args, budget, eps, trunc, plot, out));
            }
            return as_tuple(o);
        },
        py::arg("workspace"), py::arg("command"), py::arg("op") = "", py::arg("args") = std::vector<std::string>{},
        py::arg("budget") = py::none(), py::arg("eps") = py::none(), py::arg("trunc") = py::none(),
        py::arg("plot") = false, py::arg("out") = "json",
        "Run one command on a workspace given as JSON text. Returns (exit_code, stdout, stderr).");
    m.def(
        "run_file",
        [](const std::string& path, const std::string& command, const std::string& op,
           const std::vector<std::string>& args, std::optional<long> budget, std::optional<std::string> eps,
           std::optional<long> trunc, bool plot, const std::string& out) {
            Outcome o;
            {
                py::gil_scoped_release nogil;
                o = run_file(path, make_request(command, op, args, budget, eps, trunc, plot, out));
            }
            return as_tuple(o);
        },
        py::arg("path"), py::arg("command"), py::arg("op") = "", py::arg("args") = std::vector<std::string>{},
        py::arg("budget") = py::none(), py::arg("eps") = py::none(), py::arg("trunc") = py::none(),
        py::arg("plot") = false, py::arg("out") = "json");
    m.def("exit_code_for", &exit_code_for);

    m.def("set_field", &Scalar::set_field, py::arg("d"));
    m.def("field", &Scalar::field);
    py::class_<Scalar>(m, "Scalar")
        .def(py::init<long>())
        .def(py::init([](const std::string& s) { return Scalar::parse(s); }))
        .def("__str__", &Scalar::str)
        .def("__repr__", [](const Scalar& x) { return "Scalar('" + x.str() + "')"; })
        .def("__float__", &Scalar::approx)
        .def("is_rational", &Scalar::is_rational)
        .def("sign", &Scalar::sign)
        .def("__hash__", [](const Scalar& x) { return py::hash(py::str(x.str())); })
        .def(-py::self)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def(py::self <= py::self)
        .def(py::self > py::self)
        .def(py::self >= py::self);
}
