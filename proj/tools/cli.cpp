#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "strongdet/branching.hpp"
#include "strongdet/equivalence.hpp"
#include "strongdet/invariants.hpp"
#include "strongdet/laws.hpp"
#include "strongdet/macrostates.hpp"
#include "strongdet/modal.hpp"
#include "strongdet/rng.hpp"
#include "strongdet/toyworlds.hpp"
#include "strongdet/version.hpp"

namespace strongdet::cli {

namespace {

using Overrides = std::vector<std::function<void(Json&)>>;

/// Registers `--flag` whose value, when given, overrides config[pointer].
template <class T>
CLI::Option* bind_flag(CLI::App* app, Overrides& overrides, const std::string& flag, const std::string& pointer,
                  const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    overrides.push_back([value, opt, pointer](Json& cfg) {
        if (opt->count() > 0) cfg[Json::json_pointer(pointer)] = *value;
    });
    return opt;
}

struct Common {
    std::string configPath;
    Overrides overrides;
};

void add_common(CLI::App* sub, Common& common, const std::string& default_out) {
    sub->add_option("--config", common.configPath, "JSON config file; flags override its fields");
    bind_flag<std::uint64_t>(sub, common.overrides, "--seed", "/seed", "global seed (u64)");
    bind_flag<std::string>(sub, common.overrides, "--out", "/out",
                      default_out.empty() ? "output path" : "output path (default " + default_out + ")");
    bind_flag<unsigned>(sub, common.overrides, "--threads", "/threads", "worker threads (results do not depend on it)");
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Json effective_config(const Common& common) {
    Json cfg = Json::object();
    if (!common.configPath.empty()) {
        cfg = read_json_file(common.configPath);
        if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
    }
    for (const auto& apply : common.overrides) apply(cfg);
    return cfg;
}

template <class T>
T get(const Json& cfg, const std::string& key, T fallback) {
    try {
        return cfg.contains(key) ? cfg.at(key).get<T>() : fallback;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config field '" + key + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

/// Config without the fields that must not change outputs (thread count).
Json replay_config(Json cfg) {
    cfg.erase("threads");
    return cfg;
}

void write_manifest(const std::string& command, const Json& cfg, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
    const Json replay = replay_config(cfg);
    Json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = seed;
    m["config_hash"] = fnv1a_hex(replay.dump());
    m["config"] = replay;
    m["outputs"] = outputs;
    write_file(outputs.front() + ".manifest.json", m.dump(2) + "\n");
}

std::vector<double> time_grid(const Json& cfg) {
    if (cfg.contains("times") && cfg.at("times").is_array()) return cfg.at("times").get<std::vector<double>>();
    const Json t = cfg.contains("times") ? cfg.at("times") : Json::object();
    const double start = get<double>(t, "start", 0.0);
    const double stop = get<double>(t, "stop", 50.0);
    const int count = get<int>(t, "count", 100);
    if (count < 1) throw ValidationError("times.count must be >= 1");
    std::vector<double> times(static_cast<std::size_t>(count));
    const double dt = count > 1 ? (stop - start) / (count - 1) : 0.0;
    for (int i = 0; i < count; ++i) times[static_cast<std::size_t>(i)] = start + dt * i;
    return times;
}

MacrostatePartition partition_from(const Json& cfg, Index dim, Index k) {
    std::vector<Index> sizes;
    if (cfg.contains("cells")) {
        sizes = get<std::vector<Index>>(cfg, "cells", {});
    } else {
        sizes.push_back(k);
        if (dim > k) sizes.push_back(dim - k);
    }
    std::vector<std::string> labels = get<std::vector<std::string>>(cfg, "labels", {});
    auto P = MacrostatePartition::from_block_sizes(sizes, labels);
    if (P.ambient_dim() != dim) throw ValidationError("cell sizes do not sum to the Hilbert-space dimension");
    return P;
}

Index boundary_dim(const Theory& T) {
    if (const auto* ph = std::get_if<PastHypothesis>(&T.boundary)) return ph->subspace.dim();
    if (const auto* ip = std::get_if<InitialProjection>(&T.boundary)) return ip->subspace.dim();
    return 1;
}

// simulate -------------------------------------------------------------------

int cmd_simulate(const Json& cfg, std::ostream& out) {
    const auto seed = get<std::uint64_t>(cfg, "seed", 0);
    const auto threads = get<unsigned>(cfg, "threads", 1);
    const auto path = get<std::string>(cfg, "out", "trajectory.csv");

    Theory theory = [&] {
        if (cfg.contains("theory_file")) return theory_from_json(read_json_file(get<std::string>(cfg, "theory_file", "")));
        const auto dim = get<Index>(cfg, "dim", 16);
        const auto k = get<Index>(cfg, "k", 2);
        if (dim < 1) throw ValidationError("dim must be >= 1");
        const auto kind = get<std::string>(cfg, "hamiltonian", "random");
        const auto hseed = get<std::uint64_t>(cfg, "hamiltonian_seed", stream_seed(seed, 0));
        Hamiltonian H = kind == "zero"     ? Hamiltonian::zero(dim)
                        : kind == "random" ? random_hamiltonian(dim, hseed)
                                           : throw ValidationError("hamiltonian must be 'random' or 'zero'");
        const auto family = get<std::string>(cfg, "subspace", "first-k");
        Subspace S = family == "first-k"        ? Subspace::first_k(k, dim)
                     : family == "lowest-eigen" ? Subspace::lowest_eigenvectors(H, k)
                                                : throw ValidationError("subspace must be 'first-k' or 'lowest-eigen'");
        const auto name = get<std::string>(cfg, "theory", "wentaculus");
        if (name == "wentaculus") return wentaculus(H, S);
        if (name == "mentaculus") return mentaculus(H, S);
        throw ValidationError("theory must be 'wentaculus' or 'mentaculus'");
    }();

    std::optional<std::uint64_t> sample_seed;
    if (cfg.contains("sample_seed")) sample_seed = get<std::uint64_t>(cfg, "sample_seed", 0);
    EntropyConfig ecfg{get<double>(cfg, "kB", 1.0), get<double>(cfg, "threshold", 0.99)};
    const auto P = partition_from(cfg, theory.dim(), boundary_dim(theory));
    const auto points = entropy_trajectory(theory, P, time_grid(cfg), ecfg, sample_seed, threads);

    write_file(path, trajectory_csv(points, P));
    write_manifest("simulate", cfg, seed, {path});
    out << "wrote " << points.size() << " rows to " << path << "\n";
    return kOk;
}

// equivalence ----------------------------------------------------------------

int cmd_equivalence(const Json& cfg, std::ostream& out) {
    const auto seed = get<std::uint64_t>(cfg, "seed", 0);
    const auto threads = get<unsigned>(cfg, "threads", 1);
    const auto path = get<std::string>(cfg, "out", "equivalence.json");
    const auto dim = get<Index>(cfg, "dim", 8);
    const auto k = get<Index>(cfg, "k", 4);
    const auto M = get<std::size_t>(cfg, "M", 20000);
    const auto multiplier = get<double>(cfg, "tolerance_multiplier", 5.0);
    const auto nobs = get<int>(cfg, "observables", 10);
    if (M < 1) throw ValidationError("M must be >= 1");
    if (nobs < 0) throw ValidationError("observables must be >= 0");

    const Subspace S = Subspace::first_k(k, dim);
    // default pointer cells split the subspace: the first cell holds half of its basis vectors
    const Index head = std::max<Index>(1, k / 2);
    std::vector<Index> split{head};
    if (dim > head) split.push_back(dim - head);
    const auto pointer = cfg.contains("cells") ? partition_from(cfg, dim, k)
                                               : MacrostatePartition::from_block_sizes(split);

    std::vector<LabeledObservable> obs{{"identity", Observable::identity(dim)}};
    for (std::size_t i = 0; i < pointer.size(); ++i) obs.push_back({"P_" + pointer.labels()[i], pointer.cell_projector(i)});
    for (int i = 0; i < nobs; ++i)
        obs.push_back({"A" + std::to_string(i), random_observable(dim, stream_seed(seed, static_cast<std::uint64_t>(i) + 1))});

    const auto report = equivalence_report(S, obs, M, seed, multiplier, threads);
    const auto branches = branch_weight_equivalence(S, pointer, M, seed, threads);
    Json j = report_to_json(report);
    j["branch_weights"] = branch_report_to_json(branches);
    write_file(path, j.dump(2) + "\n");
    write_manifest("equivalence", cfg, seed, {path});
    out << "frobenius distance " << report.frobeniusDistance << ", max branch-weight deviation "
        << branches.maxAbsDev << ": " << (report.passed ? "PASS" : "FAIL") << "\n";
    return report.passed ? kOk : kFailed;
}

// mandelbrot -----------------------------------------------------------------

int cmd_mandelbrot(const Json& cfg, std::ostream& out) {
    using namespace toyworlds;
    const auto seed = get<std::uint64_t>(cfg, "seed", 0);
    const auto threads = get<unsigned>(cfg, "threads", 1);
    const auto path = get<std::string>(cfg, "out", "mandelbrot.pgm");
    const auto region = get<std::vector<double>>(cfg, "region", {-2.0, 1.0, -1.25, 1.25});
    if (region.size() != 4) throw ValidationError("region must be [xmin, xmax, ymin, ymax]");
    MandelbrotParams params;
    params.maxIter = get<int>(cfg, "max_iter", 256);
    params.escapeRadius = get<double>(cfg, "escape_radius", 2.0);
    const auto variant = get<std::string>(cfg, "variant", "standard");
    if (variant == "standard") params.variant = MapVariant::Standard;
    else if (variant == "penrose-cubic") params.variant = MapVariant::PenroseCubic;
    else throw ValidationError("variant must be 'standard' or 'penrose-cubic'");

    const auto render = render_world({region[0], region[1], region[2], region[3]}, get<int>(cfg, "width", 64),
                                     get<int>(cfg, "height", 64), params, threads);
    std::vector<std::string> outputs{path};
    write_file(path, to_pgm(render));
    if (cfg.contains("csv")) {
        const auto csv = get<std::string>(cfg, "csv", "");
        write_file(csv, to_verdict_csv(render));
        outputs.push_back(csv);
    }
    write_manifest("mandelbrot", cfg, seed, outputs);
    out << "rendered " << render.width << "x" << render.height << ", undetermined fraction "
        << render.undetermined_fraction() << "\n";
    return kOk;
}

// modal ----------------------------------------------------------------------

int cmd_modal(const Json& cfg, std::ostream& out) {
    const auto seed = get<std::uint64_t>(cfg, "seed", 0);
    if (!cfg.contains("worlds")) throw ValidationError("modal needs --worlds PATH");
    const Json doc = read_json_file(get<std::string>(cfg, "worlds", ""));
    const auto M = modal::model_set_from_json(doc);

    const auto det = modal::check_determinism(M);
    const auto fut = modal::check_futuristic_determinism(M);
    const auto hist = modal::check_historical_determinism(M);
    const bool strong = modal::check_strong_determinism(M);

    Json result;
    result["worlds"] = M.size();
    result["determinism"] = modal::verdict_to_json(det);
    result["futuristic_determinism"] = modal::verdict_to_json(fut);
    result["historical_determinism"] = modal::verdict_to_json(hist);
    result["strong_determinism"] = strong;

    Json queries = Json::array();
    if (doc.contains("counterfactuals")) {
        const auto sim = modal::similarity_from_json(doc.contains("similarity") ? doc.at("similarity") : Json(), M);
        for (const auto& q : doc.at("counterfactuals")) {
            try {
                const auto A = modal::proposition_from_json(q.at("A"));
                const auto C = modal::proposition_from_json(q.at("C"));
                A.validate(M);
                C.validate(M);
                const auto world = q.contains("world") ? q.at("world").get<std::string>()
                                                       : M.actual().value_or(M.worlds().front().id);
                const auto dep = modal::counterfactual_dependence(M, sim, A, C, world);
                Json r;
                r["world"] = world;
                r["A_implies_C"] = modal::to_string(dep.ifA);
                r["notA_implies_notC"] = modal::to_string(dep.ifNotA);
                r["dependence"] = dep.holds;
                r["degenerate"] = dep.degenerate;
                queries.push_back(std::move(r));
            } catch (const nlohmann::json::exception& e) {
                throw ValidationError(std::string("counterfactual query: ") + e.what());
            }
        }
    }
    result["counterfactuals"] = std::move(queries);

    auto row = [&](const char* name, bool v) { out << std::left << std::setw(24) << name << (v ? "true" : "false") << "\n"; };
    row("determinism", det.holds);
    row("futuristic", fut.holds);
    row("historical", hist.holds);
    row("strong", strong);

    if (cfg.contains("out")) {
        const auto path = get<std::string>(cfg, "out", "");
        write_file(path, result.dump(2) + "\n");
        write_manifest("modal", cfg, seed, {path});
    } else {
        out << result.dump(2) << "\n";
    }
    return kOk;
}

// check ----------------------------------------------------------------------

int cmd_check(const Json& cfg, std::ostream& out) {
    const auto seed = get<std::uint64_t>(cfg, "seed", 0);
    const auto threads = get<unsigned>(cfg, "threads", 1);
    const auto suites = get<std::vector<std::string>>(cfg, "suites", {});
    const auto results = run_invariant_suites(suites, seed, threads);

    bool all = true;
    Json j = Json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << r.suite << "/" << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
        Json e;
        e["suite"] = r.suite;
        e["name"] = r.name;
        e["passed"] = r.passed;
        e["detail"] = r.detail;
        j.push_back(std::move(e));
    }
    if (cfg.contains("out")) {
        const auto path = get<std::string>(cfg, "out", "");
        write_file(path, j.dump(2) + "\n");
        write_manifest("check", cfg, seed, {path});
    }
    return all ? kOk : kFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"strongdet: determinism and strong determinism in finite quantum and toy worlds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Common simulate, equivalence, mandelbrot, modal_c, check;

    auto* sim = app.add_subcommand("simulate", "entropy trajectory of a theory, written as CSV");
    add_common(sim, simulate, "trajectory.csv");
    bind_flag<std::string>(sim, simulate.overrides, "--theory", "/theory", "wentaculus | mentaculus");
    bind_flag<std::string>(sim, simulate.overrides, "--theory-file", "/theory_file", "theory JSON file");
    bind_flag<Index>(sim, simulate.overrides, "--dim", "/dim", "Hilbert-space dimension (default 16)");
    bind_flag<Index>(sim, simulate.overrides, "--k", "/k", "past-hypothesis subspace dimension (default 2)");
    bind_flag<std::string>(sim, simulate.overrides, "--subspace", "/subspace", "first-k | lowest-eigen");
    bind_flag<std::string>(sim, simulate.overrides, "--hamiltonian", "/hamiltonian", "random | zero");
    bind_flag<std::uint64_t>(sim, simulate.overrides, "--hamiltonian-seed", "/hamiltonian_seed", "Hamiltonian seed");
    bind_flag<std::uint64_t>(sim, simulate.overrides, "--sample-seed", "/sample_seed",
                        "seed selecting the initial wave function (Mentaculus)");
    bind_flag<double>(sim, simulate.overrides, "--t-start", "/times/start", "first time (default 0)");
    bind_flag<double>(sim, simulate.overrides, "--t-stop", "/times/stop", "last time (default 50)");
    bind_flag<int>(sim, simulate.overrides, "--count", "/times/count", "number of times (default 100)");
    bind_flag<std::vector<Index>>(sim, simulate.overrides, "--cells", "/cells", "macrostate cell sizes");
    bind_flag<double>(sim, simulate.overrides, "--kB", "/kB", "Boltzmann constant (default 1)");
    bind_flag<double>(sim, simulate.overrides, "--threshold", "/threshold", "dominance threshold (default 0.99)");

    auto* eq = app.add_subcommand("equivalence", "Monte Carlo equivalence report, written as JSON");
    add_common(eq, equivalence, "equivalence.json");
    bind_flag<Index>(eq, equivalence.overrides, "--dim", "/dim", "ambient dimension (default 8)");
    bind_flag<Index>(eq, equivalence.overrides, "--k", "/k", "subspace dimension (default 4)");
    bind_flag<std::size_t>(eq, equivalence.overrides, "--samples,-M", "/M", "sample count (default 20000)");
    bind_flag<double>(eq, equivalence.overrides, "--tolerance-multiplier", "/tolerance_multiplier",
                 "pass band in standard errors (default 5)");
    bind_flag<int>(eq, equivalence.overrides, "--observables", "/observables", "random observables (default 10)");
    bind_flag<std::vector<Index>>(eq, equivalence.overrides, "--cells", "/cells", "pointer cell sizes");

    auto* mb = app.add_subcommand("mandelbrot", "render the Mandelbrot world to PGM");
    add_common(mb, mandelbrot, "mandelbrot.pgm");
    bind_flag<std::vector<double>>(mb, mandelbrot.overrides, "--region", "/region", "xmin xmax ymin ymax")->expected(4);
    bind_flag<int>(mb, mandelbrot.overrides, "--width", "/width", "pixels (default 64)");
    bind_flag<int>(mb, mandelbrot.overrides, "--height", "/height", "pixels (default 64)");
    bind_flag<int>(mb, mandelbrot.overrides, "--max-iter", "/max_iter", "iteration cap (default 256)");
    bind_flag<double>(mb, mandelbrot.overrides, "--escape-radius", "/escape_radius", "escape radius (default 2)");
    bind_flag<std::string>(mb, mandelbrot.overrides, "--variant", "/variant", "standard | penrose-cubic");
    bind_flag<std::string>(mb, mandelbrot.overrides, "--csv", "/csv", "also write per-pixel verdicts as CSV");

    auto* md = app.add_subcommand("modal", "determinism verdicts for a worlds JSON file");
    add_common(md, modal_c, "");
    bind_flag<std::string>(md, modal_c.overrides, "--worlds", "/worlds", "worlds JSON file");

    auto* ck = app.add_subcommand("check", "run the invariant suites");
    add_common(ck, check, "");
    bind_flag<std::vector<std::string>>(ck, check.overrides, "--suite", "/suites", "suite name (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        if (sim->parsed()) code = cmd_simulate(effective_config(simulate), out);
        else if (eq->parsed()) code = cmd_equivalence(effective_config(equivalence), out);
        else if (mb->parsed()) code = cmd_mandelbrot(effective_config(mandelbrot), out);
        else if (md->parsed()) code = cmd_modal(effective_config(modal_c), out);
        else if (ck->parsed()) code = cmd_check(effective_config(check), out);
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    err << "wall time " << elapsed.count() << " s\n";
    return code;
}

}  // namespace strongdet::cli
