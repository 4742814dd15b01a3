#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "strongdet/branching.hpp"
#include "strongdet/equivalence.hpp"
#include "strongdet/laws.hpp"
#include "strongdet/macrostates.hpp"
#include "strongdet/matrix_json.hpp"
#include "strongdet/modal.hpp"
#include "strongdet/toyworlds.hpp"
#include "strongdet/version.hpp"

namespace py = pybind11;
using namespace strongdet;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::handle& o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

// A subspace is either a family name ("first-2-of-16") or a matrix whose
// columns span it.
Subspace to_subspace(const py::object& subspace, const Hamiltonian* H = nullptr) {
    if (py::isinstance<py::str>(subspace)) return subspace_from_family(subspace.cast<std::string>(), H);
    return Subspace::spanned_by(subspace.cast<CMatrix>());
}

Theory make_named(const std::string& name, const CMatrix& H, const py::object& subspace) {
    const Hamiltonian h(H);
    const Subspace S = to_subspace(subspace, &h);
    if (name == "wentaculus") return wentaculus(h, S);
    if (name == "mentaculus") return mentaculus(h, S);
    throw ValidationError("theory must be 'wentaculus' or 'mentaculus'");
}

QuantumState to_state(const py::array& a) {
    if (a.ndim() == 1) return StateVector(a.cast<CVector>());
    return DensityMatrix(a.cast<CMatrix>());
}

py::object from_state(const QuantumState& s) {
    if (const auto* psi = std::get_if<StateVector>(&s)) return py::cast(psi->amplitudes());
    return py::cast(std::get<DensityMatrix>(s).entries());
}

toyworlds::MandelbrotParams mandelbrot_params(int max_iter, double escape_radius, const std::string& variant) {
    toyworlds::MandelbrotParams p;
    p.maxIter = max_iter;
    p.escapeRadius = escape_radius;
    if (variant == "standard") p.variant = toyworlds::MapVariant::Standard;
    else if (variant == "penrose-cubic") p.variant = toyworlds::MapVariant::PenroseCubic;
    else throw ValidationError("variant must be 'standard' or 'penrose-cubic'");
    return p;
}

MacrostatePartition partition(const std::vector<Index>& cells, const std::vector<std::string>& labels) {
    return MacrostatePartition::from_block_sizes(cells, labels);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "strongdet C++ core";
    m.attr("__version__") = kVersion;
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("random_hamiltonian", [](Index dim, std::uint64_t seed) { return random_hamiltonian(dim, seed).entries(); },
          py::arg("dim"), py::arg("seed"));
    m.def("random_observable", [](Index dim, std::uint64_t seed) { return random_observable(dim, seed).entries(); },
          py::arg("dim"), py::arg("seed"));
    m.def("make_propagator", [](const CMatrix& H, double dt) { return make_propagator(Hamiltonian(H), dt).entries(); },
          py::arg("H"), py::arg("dt"), "exp(-i H dt) for Hermitian H.");
    m.def(
        "evolve_state",
        [](const CMatrix& H, const CVector& psi, double t) {
            return evolve_state(make_propagator(Hamiltonian(H), t), StateVector(psi)).amplitudes();
        },
        py::arg("H"), py::arg("psi"), py::arg("t"));
    m.def(
        "evolve_density",
        [](const CMatrix& H, const CMatrix& W, double t) {
            return evolve_density(make_propagator(Hamiltonian(H), t), DensityMatrix(W)).entries();
        },
        py::arg("H"), py::arg("W"), py::arg("t"));
    m.def(
        "expectation", [](const CMatrix& A, const py::array& state) { return expectation(Observable(A), to_state(state)); },
        py::arg("A"), py::arg("state"), "tr(A W) or <psi|A|psi>; 1-D input is a pure state.");

    m.def(
        "initial_projection", [](const py::object& subspace) { return initial_projection(to_subspace(subspace)).entries(); },
        py::arg("subspace"));
    m.def(
        "sample_statistical_postulate",
        [](const py::object& subspace, std::uint64_t seed) {
            return sample_statistical_postulate({to_subspace(subspace)}, seed).amplitudes();
        },
        py::arg("subspace"), py::arg("seed"));
    m.def(
        "is_strongly_deterministic",
        [](const std::string& theory, const CMatrix& H, const py::object& subspace) {
            const auto v = is_strongly_deterministic(make_named(theory, H, subspace));
            py::dict out;
            out["strongly_deterministic"] = v.strongly_deterministic;
            out["witness"] = v.witness ? py::cast(std::vector<CVector>{v.witness->first.amplitudes(),
                                                                      v.witness->second.amplitudes()})
                                       : py::none();
            out["note"] = v.note;
            return out;
        },
        py::arg("theory"), py::arg("H"), py::arg("subspace"));
    m.def(
        "strong_prediction",
        [](const std::string& theory, const CMatrix& H, const py::object& subspace, double t) -> py::object {
            const auto p = strong_prediction(make_named(theory, H, subspace), t);
            if (const auto* r = std::get_if<PredictionRefusal>(&p)) {
                py::dict out;
                out["refused"] = true;
                out["missing_input"] = r->missing_input;
                out["reason"] = r->reason;
                return out;
            }
            if (const auto* psi = std::get_if<StateVector>(&p)) return py::cast(psi->amplitudes());
            return py::cast(std::get<DensityMatrix>(p).entries());
        },
        py::arg("theory"), py::arg("H"), py::arg("subspace"), py::arg("t"),
        "State at time t from the laws alone, or a dict naming the missing input.");
    m.def(
        "entropy_trajectory",
        [](const std::string& theory, const CMatrix& H, const py::object& subspace, const std::vector<Index>& cells,
           const std::vector<double>& times, std::optional<std::uint64_t> sample_seed, double kB, double threshold,
           std::vector<std::string> labels, unsigned threads) {
            const auto T = make_named(theory, H, subspace);
            const auto P = partition(cells, std::move(labels));
            py::list rows;
            for (const auto& pt : entropy_trajectory(T, P, times, {kB, threshold}, sample_seed, threads)) {
                py::dict row;
                row["time"] = pt.time;
                row["entropy"] = pt.entropy ? py::cast(*pt.entropy) : py::none();
                row["cell"] = pt.cell ? py::cast(*pt.cell) : py::none();
                row["weights"] = pt.weights;
                rows.append(row);
            }
            return rows;
        },
        py::arg("theory"), py::arg("H"), py::arg("subspace"), py::arg("cells"), py::arg("times"),
        py::arg("sample_seed") = py::none(), py::arg("kB") = 1.0, py::arg("threshold") = 0.99,
        py::arg("labels") = std::vector<std::string>{}, py::arg("threads") = 1u);

    m.def(
        "decompose",
        [](const py::array& state, const std::vector<Index>& cells, std::vector<std::string> labels) {
            const auto D = decompose(to_state(state), partition(cells, std::move(labels)));
            py::list out;
            for (const auto& b : D.branches) {
                py::dict d;
                d["cell"] = D.pointer.labels()[b.cell];
                d["weight"] = b.weight;
                d["state"] = from_state(b.conditionalState);
                out.append(d);
            }
            return out;
        },
        py::arg("state"), py::arg("cells"), py::arg("labels") = std::vector<std::string>{});
    m.def(
        "branch_weight_equivalence",
        [](const py::object& subspace, const std::vector<Index>& cells, std::size_t M, std::uint64_t seed,
           unsigned threads) {
            return to_py(branch_report_to_json(
                branch_weight_equivalence(to_subspace(subspace), partition(cells, {}), M, seed, threads)));
        },
        py::arg("subspace"), py::arg("cells"), py::arg("M"), py::arg("seed"), py::arg("threads") = 1u);
    m.def(
        "ensemble_mean_density",
        [](const py::object& subspace, std::size_t M, std::uint64_t seed, unsigned threads) {
            return ensemble_mean_density(to_subspace(subspace), M, seed, threads);
        },
        py::arg("subspace"), py::arg("M"), py::arg("seed"), py::arg("threads") = 1u);
    m.def(
        "equivalence_report",
        [](const py::object& subspace, const std::vector<CMatrix>& observables, std::size_t M, std::uint64_t seed,
           double tolerance_multiplier, unsigned threads) {
            std::vector<LabeledObservable> obs;
            for (std::size_t i = 0; i < observables.size(); ++i)
                obs.push_back({"A" + std::to_string(i), Observable(observables[i])});
            return to_py(report_to_json(
                equivalence_report(to_subspace(subspace), obs, M, seed, tolerance_multiplier, threads)));
        },
        py::arg("subspace"), py::arg("observables"), py::arg("M"), py::arg("seed"),
        py::arg("tolerance_multiplier") = 5.0, py::arg("threads") = 1u);

    m.def(
        "check_model_set",
        [](const py::object& worlds) {
            const auto M = modal::model_set_from_json(from_py(worlds));
            Json out;
            out["determinism"] = modal::verdict_to_json(modal::check_determinism(M));
            out["futuristic_determinism"] = modal::verdict_to_json(modal::check_futuristic_determinism(M));
            out["historical_determinism"] = modal::verdict_to_json(modal::check_historical_determinism(M));
            out["strong_determinism"] = modal::check_strong_determinism(M);
            return to_py(out);
        },
        py::arg("worlds"), "Determinism verdicts for a model set given in the worlds JSON schema.");
    m.def(
        "counterfactual",
        [](const py::object& worlds, const py::object& A, const py::object& C, const std::string& world,
           const py::object& similarity) {
            const auto M = modal::model_set_from_json(from_py(worlds));
            const auto sim = modal::similarity_from_json(similarity.is_none() ? Json() : from_py(similarity), M);
            const auto a = modal::proposition_from_json(from_py(A));
            const auto c = modal::proposition_from_json(from_py(C));
            a.validate(M);
            c.validate(M);
            return std::string(modal::to_string(modal::counterfactual(M, sim, a, c, world)));
        },
        py::arg("worlds"), py::arg("A"), py::arg("C"), py::arg("world"), py::arg("similarity") = py::none());
    m.def(
        "counterfactual_dependence",
        [](const py::object& worlds, const py::object& A, const py::object& C, const std::string& world,
           const py::object& similarity) {
            const auto M = modal::model_set_from_json(from_py(worlds));
            const auto sim = modal::similarity_from_json(similarity.is_none() ? Json() : from_py(similarity), M);
            const auto d = modal::counterfactual_dependence(M, sim, modal::proposition_from_json(from_py(A)),
                                                            modal::proposition_from_json(from_py(C)), world);
            py::dict out;
            out["holds"] = d.holds;
            out["if_A"] = modal::to_string(d.ifA);
            out["if_not_A"] = modal::to_string(d.ifNotA);
            out["degenerate"] = d.degenerate;
            return out;
        },
        py::arg("worlds"), py::arg("A"), py::arg("C"), py::arg("world"), py::arg("similarity") = py::none());

    m.def(
        "orbit",
        [](std::complex<double> c, int n, const std::string& variant) {
            return toyworlds::orbit(c, n, mandelbrot_params(1, 2.0, variant).variant);
        },
        py::arg("c"), py::arg("n"), py::arg("variant") = "standard");
    m.def(
        "mandelbrot_membership",
        [](std::complex<double> c, int max_iter, double escape_radius, const std::string& variant) {
            const auto v = toyworlds::mandelbrot_membership(c, mandelbrot_params(max_iter, escape_radius, variant));
            py::dict out;
            out["status"] = toyworlds::to_string(v.status);
            out["iteration"] = v.iteration;
            out["reason"] = toyworlds::to_string(v.reason);
            return out;
        },
        py::arg("c"), py::arg("max_iter") = 1000, py::arg("escape_radius") = 2.0, py::arg("variant") = "standard");
    m.def(
        "render_mandelbrot",
        [](std::tuple<double, double, double, double> region, int width, int height, int max_iter,
           double escape_radius, const std::string& variant, unsigned threads) {
            const auto [x0, x1, y0, y1] = region;
            const auto r = toyworlds::render_world({x0, x1, y0, y1}, width, height,
                                                   mandelbrot_params(max_iter, escape_radius, variant), threads);
            py::array_t<std::uint8_t> img({height, width});
            auto px = img.mutable_unchecked<2>();
            for (int row = 0; row < height; ++row)
                for (int col = 0; col < width; ++col) px(row, col) = r.gray(row, col);
            return img;
        },
        py::arg("region"), py::arg("width"), py::arg("height"), py::arg("max_iter") = 256,
        py::arg("escape_radius") = 2.0, py::arg("variant") = "standard", py::arg("threads") = 1u,
        "Gray image (row 0 at ymax): 0 certified-in, 255 undetermined.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"strongdet"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a strongdet subcommand in-process; returns (exit_code, stdout, stderr).");
}
