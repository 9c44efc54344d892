#include "tslice/cli.hpp"
#include "tslice/diagnostics.hpp"
#include "tslice/error.hpp"
#include "tslice/scenario_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace tslice;

namespace {

// Reports cross the boundary as JSON text; the Python layer decodes them.
std::string dump(const nlohmann::json& j) { return j.dump(); }

std::vector<int> states(const DomainMask& m) {
    std::vector<int> out(m.state.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(m.state[i]);
    return out;
}

FluxModel builtin(const std::string& kind, double p) {
    if (kind == "p_laplacian") return FluxModel::p_laplacian(p);
    if (kind == "z_modulated") return FluxModel::z_modulated(p);
    if (kind == "linear_diffusion") return FluxModel::linear_diffusion();
    throw Error(ErrorKind::validation, "unknown builtin flux '" + kind + "'");
}

} // namespace

PYBIND11_MODULE(_tslice, m) {
    m.doc() = "Time-slicing solver for parabolic problems on moving domains";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<SolverStallError>(m, "SolverStallError", base.ptr());

    py::class_<Expr>(m, "Expr")
        .def(py::init(&Expr::parse), py::arg("source"))
        .def(
            "eval",
            [](const Expr& e, double t, double x, double y, double z, double xi1, double xi2, double r) {
                return e.eval(Env{t, x, y, z, xi1, xi2, r});
            },
            py::arg("t") = 0.0, py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("z") = 0.0, py::arg("xi1") = 0.0,
            py::arg("xi2") = 0.0, py::arg("r") = 0.0)
        .def("__str__", &Expr::to_string)
        .def("__repr__", [](const Expr& e) { return "Expr('" + e.to_string() + "')"; })
        .def("__eq__", [](const Expr& a, const Expr& b) { return a == b; });

    py::class_<Scenario>(m, "Scenario")
        .def_readwrite("n_slices", &Scenario::n_slices)
        .def_readwrite("substeps", &Scenario::substeps)
        .def_property_readonly("horizon", &Scenario::horizon)
        .def_property_readonly("dim", [](const Scenario& s) { return s.grid.dim; })
        .def_property_readonly("node_count", [](const Scenario& s) { return s.grid.node_count(); })
        .def_property_readonly("flux_kind", [](const Scenario& s) { return std::string(to_string(s.flux.kind)); })
        .def_property_readonly("p", [](const Scenario& s) { return s.flux.p; })
        .def("node_position",
             [](const Scenario& s, std::size_t n) {
                 if (n >= s.grid.node_count()) throw Error(ErrorKind::index_range, "node index out of range");
                 const Point x = s.grid.position(n);
                 return std::vector<double>(x.begin(), x.begin() + s.grid.dim);
             })
        .def("problems", &Scenario::problems)
        .def("hash", &scenario_hash)
        .def("__str__", &print_scenario);

    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));

    py::class_<SpaceTimeField>(m, "Field")
        .def_readonly("times", &SpaceTimeField::times)
        .def_readonly("slice_of", &SpaceTimeField::slice_of)
        .def_readonly("frames", &SpaceTimeField::frames)
        .def_readonly("extended_frames", &SpaceTimeField::extended_frames)
        .def_property_readonly("knots", [](const SpaceTimeField& f) { return f.plan.knots; })
        .def_property_readonly("delta", [](const SpaceTimeField& f) { return f.plan.delta; })
        .def("stamp_count", &SpaceTimeField::stamp_count)
        .def("slice_stamps", &SpaceTimeField::slice_stamps, py::arg("k"))
        .def("states", [](const SpaceTimeField& f, std::size_t stamp) {
            if (stamp >= f.stamp_count()) throw Error(ErrorKind::index_range, "stamp out of range");
            return states(f.mask_at(stamp));
        })
        .def("knot_traces", &knot_traces, py::arg("k"))
        .def("write_frames", [](const SpaceTimeField& f, const Scenario& sc, const std::filesystem::path& dir,
                                const std::string& mode) {
            write_frames(f, sc, dir, mode == "all" ? FrameMode::all : FrameMode::knots);
        }, py::arg("scenario"), py::arg("dir"), py::arg("mode") = "knots");

    m.def(
        "_run",
        [](const Scenario& sc) {
            std::pair<SpaceTimeField, RunReport> result;
            {
                py::gil_scoped_release release;
                result = run_scheme(sc);
            }
            return py::make_tuple(std::move(result.first), dump(to_json(result.second)));
        },
        py::arg("scenario"));

    m.def("_max_principle", [](const SpaceTimeField& f, const Scenario& sc) { return dump(to_json(max_principle_report(f, sc))); });
    m.def("_energy", [](const SpaceTimeField& f, const Scenario& sc) { return dump(to_json(energy_report(f, sc))); });
    m.def("_l1_contraction", [](const Scenario& sc, const std::string& u0b) {
        return dump(to_json(l1_contraction_report(sc, sc.u0, Expr::parse(u0b))));
    });
    m.def("_refinement_study", [](const Scenario& sc, int levels, double resolution) {
        return dump(to_json(refinement_study(sc, levels, resolution)));
    }, py::arg("scenario"), py::arg("levels"), py::arg("resolution") = 0.0);
    m.def("_mms", [](const Scenario& sc, const std::string& exact) { return dump(to_json(mms_report(sc, Expr::parse(exact)))); });
    m.def("_check_structure", [](const std::string& kind, double p, int samples, std::uint64_t seed, int dim) {
        SampleBox box;
        box.dim = dim;
        return dump(to_json(check_structure(builtin(kind, p), samples, seed, box)));
    });
    m.def("observed_order", &observed_order, py::arg("e_coarse"), py::arg("e_fine"), py::arg("factor") = 2.0);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli_run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
