#include "strongdet/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "strongdet/branching.hpp"
#include "strongdet/equivalence.hpp"
#include "strongdet/generators.hpp"
#include "strongdet/laws.hpp"
#include "strongdet/macrostates.hpp"
#include "strongdet/modal.hpp"
#include "strongdet/toyworlds.hpp"

namespace strongdet {

namespace {

class Recorder {
public:
    Recorder(std::string suite, std::vector<InvariantResult>& out) : suite_(std::move(suite)), out_(out) {}

    void record(const std::string& name, bool ok, const std::string& detail = {}) {
        out_.push_back({suite_, name, ok, detail});
    }

    /// Runs `body`; an exception counts as a failure of the invariant.
    void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        try {
            auto [ok, detail] = body();
            record(name, ok, detail);
        } catch (const std::exception& e) {
            record(name, false, std::string("exception: ") + e.what());
        }
    }

private:
    std::string suite_;
    std::vector<InvariantResult>& out_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

void quantum_suite(Recorder& r, std::uint64_t seed) {
    r.run("propagator-unitarity", [&] {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto H = random_hamiltonian(2 + i % 6, stream_seed(seed, i));
            const auto U = make_propagator(H, 0.37 * (i + 1));
            const CMatrix& u = U.entries();
            worst = std::max(worst, (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm());
        }
        return std::make_pair(worst < 1e-8, "max ||U^dagger U - I||_F = " + fmt(worst));
    });
    r.run("spectrum-preservation", [&] {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Index n = 2 + i % 5;
            const auto H = random_hamiltonian(n, stream_seed(seed, 100 + i));
            const Subspace S = Subspace::first_k(1 + i % n, n);
            const DensityMatrix W = initial_projection(S);
            const auto out = evolve_density(make_propagator(H, 1.3), W);
            worst = std::max(worst, (out.eigenvalues() - W.eigenvalues()).cwiseAbs().maxCoeff());
        }
        return std::make_pair(worst < 1e-8, "max eigenvalue shift = " + fmt(worst));
    });
    r.run("norm-preservation", [&] {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Index n = 2 + i % 7;
            const auto psi = sample_uniform_sphere(Subspace::first_k(n, n), stream_seed(seed, 200 + i));
            const auto out = evolve_state(make_propagator(random_hamiltonian(n, stream_seed(seed, 300 + i)), 2.1), psi);
            worst = std::max(worst, std::abs(out.amplitudes().norm() - 1.0));
        }
        return std::make_pair(worst < 1e-9, "max | ||U psi|| - 1 | = " + fmt(worst));
    });
    r.run("propagator-composition", [&] {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto H = random_hamiltonian(2 + i % 4, stream_seed(seed, 400 + i));
            const double a = 0.3 + 0.1 * i;
            const double b = 1.1 - 0.05 * i;
            const auto direct = make_propagator(H, a + b);
            const auto composed = compose(make_propagator(H, a), make_propagator(H, b));
            worst = std::max(worst, (direct.entries() - composed.entries()).norm());
        }
        return std::make_pair(worst < 1e-8, "max Frobenius gap = " + fmt(worst));
    });
}

void laws_suite(Recorder& r, std::uint64_t seed) {
    r.run("initial-projection-purity", [&] {
        double worst = 0.0;
        for (Index k = 1; k <= 16; ++k) {
            const auto W = initial_projection(Subspace::first_k(k, 16));
            worst = std::max(worst, std::abs(W.purity() * static_cast<double>(k) - 1.0));
        }
        return std::make_pair(worst < 1e-12, "max |k tr(W0^2) - 1| = " + fmt(worst));
    });
    r.run("statistical-postulate-samples", [&] {
        double worst_norm = 0.0;
        double worst_res = 0.0;
        for (int i = 0; i < 50; ++i) {
            const Index n = 4 + i % 5;
            const auto S = Subspace::lowest_eigenvectors(random_hamiltonian(n, stream_seed(seed, i)), 1 + i % 3);
            const auto psi = sample_uniform_sphere(S, stream_seed(seed, 1000 + i));
            worst_norm = std::max(worst_norm, std::abs(psi.amplitudes().norm() - 1.0));
            worst_res = std::max(worst_res, S.residual(psi.amplitudes()));
        }
        return std::make_pair(worst_norm < 1e-12 && worst_res < 1e-9,
                              "norm defect " + fmt(worst_norm) + ", residual " + fmt(worst_res));
    });
    r.run("strong-implies-deterministic", [&] {
        bool ok = true;
        for (int i = 0; i < 6; ++i) {
            const Index n = 4;
            const auto H = random_hamiltonian(n, stream_seed(seed, 2000 + i));
            const auto S = Subspace::first_k(1 + i % 3, n);
            for (const Theory& T : {mentaculus(H, S), wentaculus(H, S)}) {
                if (!is_strongly_deterministic(T).strongly_deterministic) continue;
                std::vector<QuantumState> probes{initial_state(T, 0)};
                ok = ok && is_deterministic(T, probes, {0.0, 0.5, 1.0, 2.0}).deterministic;
            }
        }
        return std::make_pair(ok, std::string());
    });
    r.run("witness-validity", [&] {
        bool ok = true;
        for (Index k = 2; k <= 5; ++k) {
            const auto T = mentaculus(random_hamiltonian(6, stream_seed(seed, 3000 + k)), Subspace::first_k(k, 6));
            const auto v = is_strongly_deterministic(T);
            if (v.strongly_deterministic || !v.witness) return std::make_pair(false, std::string("no witness"));
            const auto& [a, b] = *v.witness;
            ok = ok && std::abs(a.amplitudes().dot(b.amplitudes())) < 1.0 - 1e-6;
            require_admissible(T, a);
            require_admissible(T, b);
        }
        return std::make_pair(ok, std::string());
    });
    r.run("description-length-ordering", [&] {
        bool ok = true;
        for (Index n = 4; n <= 16; n += 4) {
            const BoundaryLaw named = InitialProjection{Subspace::first_k(2, n)};
            const auto psi = sample_uniform_sphere(Subspace::first_k(n, n), stream_seed(seed, 4000 + n));
            ok = ok && description_length(named) < description_length(BoundaryLaw{ExactPureState{psi}});
        }
        return std::make_pair(ok, std::string());
    });
}

void macrostates_suite(Recorder& r, std::uint64_t seed) {
    r.run("weights-sum-to-one", [&] {
        double worst = 0.0;
        for (int i = 0; i < 30; ++i) {
            const auto P = MacrostatePartition::from_block_sizes({1 + i % 3, 2, 3 + i % 2});
            const Index n = P.ambient_dim();
            const auto H = random_hamiltonian(n, stream_seed(seed, i));
            const auto S = Subspace::lowest_eigenvectors(H, 1 + i % 2);
            const QuantumState state = (i % 2 == 0) ? QuantumState(sample_uniform_sphere(S, stream_seed(seed, 50 + i)))
                                                    : QuantumState(initial_projection(S));
            const auto w = cell_weights(state, P);
            double sum = 0.0;
            for (double x : w) {
                if (x < -1e-9 || x > 1.0 + 1e-9) return std::make_pair(false, "weight out of range: " + fmt(x));
                sum += x;
            }
            worst = std::max(worst, std::abs(sum - 1.0));
        }
        return std::make_pair(worst < 1e-9, "max |sum - 1| = " + fmt(worst));
    });
    r.run("entropy-monotone-in-dimension", [&] {
        bool ok = boltzmann_entropy(1) == 0.0;
        for (Index k = 1; k < 64; ++k) ok = ok && boltzmann_entropy(k + 1) > boltzmann_entropy(k);
        return std::make_pair(ok, std::string());
    });
    r.run("maximally-mixed-weights", [&] {
        double worst = 0.0;
        const auto P = MacrostatePartition::from_block_sizes({1, 2, 5});
        const auto w = cell_weights(DensityMatrix::maximally_mixed(8), P);
        for (std::size_t i = 0; i < P.size(); ++i)
            worst = std::max(worst, std::abs(w[i] - static_cast<double>(P.cells()[i].dim()) / 8.0));
        return std::make_pair(worst < 1e-9, "max deviation " + fmt(worst));
    });
    r.run("wentaculus-trajectory-reproducible", [&] {
        const auto H = random_hamiltonian(8, stream_seed(seed, 77));
        const auto T = wentaculus(H, Subspace::first_k(2, 8));
        const auto P = MacrostatePartition::from_block_sizes({2, 6});
        std::vector<double> times;
        for (int i = 0; i < 10; ++i) times.push_back(0.5 * i);
        const auto a = trajectory_csv(entropy_trajectory(T, P, times, {}, std::nullopt, 1), P);
        const auto b = trajectory_csv(entropy_trajectory(T, P, times, {}, std::nullopt, 4), P);
        return std::make_pair(a == b, std::string());
    });
}

void branching_suite(Recorder& r, std::uint64_t seed) {
    r.run("block-diagonal-consistency", [&] {
        double worst = 0.0;
        const auto P = MacrostatePartition::from_block_sizes({2, 3});
        for (int i = 0; i < 20; ++i) {
            CMatrix a = CMatrix::Zero(5, 5);
            a.topLeftCorner(2, 2) = random_observable(2, stream_seed(seed, i)).entries();
            a.bottomRightCorner(3, 3) = random_observable(3, stream_seed(seed, 100 + i)).entries();
            const Observable A(a);
            const auto full = Subspace::first_k(5, 5);
            const QuantumState state = (i % 2 == 0) ? QuantumState(sample_uniform_sphere(full, stream_seed(seed, 200 + i)))
                                                    : QuantumState(initial_projection(Subspace::first_k(3, 5)));
            const auto D = decompose(state, P);
            double sum = 0.0;
            for (const auto& b : D.branches) sum += b.weight * expectation(A, b.conditionalState);
            worst = std::max(worst, std::abs(sum - expectation(A, state)));
        }
        return std::make_pair(worst < 1e-8, "max gap " + fmt(worst));
    });
    r.run("initial-projection-branch-weights", [&] {
        double worst = 0.0;
        const auto P = MacrostatePartition::from_block_sizes({2, 3, 3});
        for (Index k = 1; k <= 8; ++k) {
            const auto D = decompose(initial_projection(Subspace::first_k(k, 8)), P);
            for (const auto& b : D.branches) {
                const Index lo = b.cell == 0 ? 0 : (b.cell == 1 ? 2 : 5);
                const Index hi = lo + P.cells()[b.cell].dim();
                const Index overlap = std::max<Index>(0, std::min(hi, k) - lo);
                worst = std::max(worst, std::abs(b.weight - static_cast<double>(overlap) / static_cast<double>(k)));
            }
        }
        return std::make_pair(worst < 1e-9, "max deviation " + fmt(worst));
    });
    r.run("relabeling-invariance", [&] {
        const auto P = MacrostatePartition::from_block_sizes({1, 2, 3}, {"a", "b", "c"});
        const auto Q = P.permuted({2, 0, 1});
        const auto psi = sample_uniform_sphere(Subspace::first_k(6, 6), stream_seed(seed, 9));
        const auto dp = self_location_distribution(decompose(psi, P));
        const auto dq = self_location_distribution(decompose(psi, Q));
        std::map<std::string, double> mp(dp.begin(), dp.end());
        std::map<std::string, double> mq(dq.begin(), dq.end());
        bool ok = mp.size() == mq.size();
        for (const auto& [label, p] : mp) ok = ok && std::abs(mq[label] - p) < 1e-12;
        return std::make_pair(ok, std::string());
    });
}

void equivalence_suite(Recorder& r, std::uint64_t seed, unsigned threads) {
    r.run("single-sample-pure-case", [&] {
        const auto S = Subspace::first_k(1, 4);
        std::vector<LabeledObservable> obs{{"identity", Observable::identity(4)},
                                           {"A0", random_observable(4, stream_seed(seed, 1))}};
        const auto rep = equivalence_report(S, obs, 1, seed, 5.0, threads);
        bool zero = rep.frobeniusDistance < 1e-12;
        for (const auto& c : rep.perObservable) zero = zero && std::abs(c.wentaculusValue - c.ensembleMean) < 1e-9;
        return std::make_pair(rep.passed && zero, std::string());
    });
    r.run("ensemble-trace-one", [&] {
        double worst = 0.0;
        for (Index k = 1; k <= 4; ++k) {
            const CMatrix m = ensemble_mean_density(Subspace::first_k(k, 6), 500, stream_seed(seed, k), threads);
            worst = std::max(worst, std::abs(m.trace() - Complex(1.0, 0.0)));
        }
        return std::make_pair(worst < 1e-9, "max |tr - 1| = " + fmt(worst));
    });
    r.run("report-thread-independent", [&] {
        const auto S = Subspace::first_k(3, 6);
        std::vector<LabeledObservable> obs{{"A0", random_observable(6, stream_seed(seed, 2))}};
        const auto a = report_to_json(equivalence_report(S, obs, 3000, seed, 5.0, 1)).dump();
        const auto b = report_to_json(equivalence_report(S, obs, 3000, seed, 5.0, 4)).dump();
        return std::make_pair(a == b, std::string());
    });
    r.run("ensemble-converges", [&] {
        const auto S = Subspace::first_k(2, 4);
        const auto curve = convergence_curve(S, {100, 10000}, 7, seed, threads);
        const double ratio = curve[1].medianFrobenius / curve[0].medianFrobenius;
        return std::make_pair(ratio < 0.3, "median ratio " + fmt(ratio));
    });
}

void modal_suite(Recorder& r, std::uint64_t seed) {
    r.run("strong-implies-deterministic", [&] {
        Engine engine(seed);
        for (int i = 0; i < 200; ++i) {
            const auto M = random_model_set(engine, 6, 8);
            if (modal::check_strong_determinism(M) && !modal::check_determinism(M).holds)
                return std::make_pair(false, "fixture " + std::to_string(i));
        }
        return std::make_pair(true, std::string());
    });
    r.run("determinism-is-futuristic-and-historical", [&] {
        Engine engine(stream_seed(seed, 1));
        for (int i = 0; i < 200; ++i) {
            const auto M = random_model_set(engine, 6, 8);
            const bool full = modal::check_determinism(M).holds;
            const bool split = modal::check_futuristic_determinism(M).holds &&
                               modal::check_historical_determinism(M).holds;
            if (full != split) return std::make_pair(false, "fixture " + std::to_string(i));
        }
        return std::make_pair(true, std::string());
    });
    r.run("strong-centering", [&] {
        Engine engine(stream_seed(seed, 2));
        for (int i = 0; i < 200; ++i) {
            const auto M = random_model_set(engine, 6, 8);
            const auto sim = random_similarity(engine, M);
            const auto A = random_proposition(engine, M);
            const auto C = random_proposition(engine, M);
            for (const auto& w : M.worlds()) {
                if (!A.holds_at(w)) continue;
                const auto v = modal::counterfactual(M, sim, A, C, w.id);
                if ((v == modal::Truth::True) != C.holds_at(w)) return std::make_pair(false, "fixture " + std::to_string(i));
            }
        }
        return std::make_pair(true, std::string());
    });
    r.run("singleton-vacuity", [&] {
        Engine engine(stream_seed(seed, 3));
        int checked = 0;
        for (int i = 0; i < 200; ++i) {
            const auto M = random_model_set(engine, 1, 8);
            const auto sim = modal::SimilarityOrder::uniform(M);
            const auto A = random_proposition(engine, M);
            const auto C = random_proposition(engine, M);
            const auto& w = M.worlds().front();
            if (A.holds_at(w)) continue;
            ++checked;
            if (modal::counterfactual(M, sim, A, C, w.id) != modal::Truth::VacuousTrue)
                return std::make_pair(false, "fixture " + std::to_string(i));
        }
        return std::make_pair(checked > 0, std::to_string(checked) + " antecedent-false cases");
    });
}

void toyworlds_suite(Recorder& r, std::uint64_t seed) {
    using namespace toyworlds;
    Engine engine(seed);
    std::uniform_real_distribution<double> ux(-2.2, 0.8), uy(-1.3, 1.3);
    std::vector<std::complex<double>> points;
    for (int i = 0; i < 400; ++i) points.emplace_back(ux(engine), uy(engine));
    MandelbrotParams params;
    params.maxIter = 200;

    r.run("escape-soundness", [&] {
        for (const auto& c : points) {
            const auto v = mandelbrot_membership(c, params);
            if (v.status != Status::CertifiedOut) continue;
            const auto orb = orbit(c, v.iteration);
            for (int n = 1; n < v.iteration; ++n)
                if (std::abs(orb[n]) > 2.0) return std::make_pair(false, std::string("escaped early"));
            if (!(std::abs(orb[v.iteration]) > 2.0)) return std::make_pair(false, std::string("no escape at reported step"));
        }
        return std::make_pair(true, std::string());
    });
    r.run("interior-soundness", [&] {
        for (const auto& c : points) {
            const auto v = mandelbrot_membership(c, params);
            if (v.status != Status::CertifiedIn) continue;
            std::complex<double> z = 0.0;
            for (int n = 0; n < 10 * params.maxIter; ++n) {
                z = step(z, c, MapVariant::Standard);
                if (std::abs(z) > 2.0) return std::make_pair(false, std::string("certified-in point escaped"));
            }
        }
        return std::make_pair(true, std::string());
    });
    r.run("conjugation-symmetry", [&] {
        for (const auto& c : points) {
            const auto a = mandelbrot_membership(c, params);
            const auto b = mandelbrot_membership(std::conj(c), params);
            if (a.status != b.status || a.iteration != b.iteration) return std::make_pair(false, std::string("asymmetric"));
        }
        return std::make_pair(true, std::string());
    });
    r.run("monotone-in-max-iter", [&] {
        MandelbrotParams more = params;
        more.maxIter = 2 * params.maxIter;
        for (const auto& c : points) {
            const auto a = mandelbrot_membership(c, params);
            const auto b = mandelbrot_membership(c, more);
            if (a.status == Status::CertifiedOut && (b.status != Status::CertifiedOut || b.iteration != a.iteration))
                return std::make_pair(false, std::string("certified-out flipped"));
            if (a.status == Status::CertifiedIn && b.status != Status::CertifiedIn)
                return std::make_pair(false, std::string("certified-in flipped"));
        }
        return std::make_pair(true, std::string());
    });
    r.run("lone-particle-strongly-deterministic", [&] {
        const auto M = lone_particle_model_set(5);
        return std::make_pair(modal::check_strong_determinism(M) && modal::check_determinism(M).holds, std::string());
    });
}

}  // namespace

const std::vector<std::string>& invariant_suite_names() {
    static const std::vector<std::string> names{"quantum", "laws", "macrostates", "branching",
                                                "equivalence", "modal", "toyworlds"};
    return names;
}

std::vector<InvariantResult> run_invariant_suites(const std::vector<std::string>& suites, std::uint64_t seed,
                                                  unsigned threads) {
    std::vector<std::string> selected = suites.empty() ? invariant_suite_names() : suites;
    std::vector<InvariantResult> out;
    for (const auto& name : selected) {
        const auto& all = invariant_suite_names();
        if (std::find(all.begin(), all.end(), name) == all.end())
            throw ValidationError("unknown invariant suite '" + name + "'");
        Recorder r(name, out);
        const std::uint64_t s = stream_seed(seed, static_cast<std::uint64_t>(std::find(all.begin(), all.end(), name) - all.begin()));
        if (name == "quantum") quantum_suite(r, s);
        else if (name == "laws") laws_suite(r, s);
        else if (name == "macrostates") macrostates_suite(r, s);
        else if (name == "branching") branching_suite(r, s);
        else if (name == "equivalence") equivalence_suite(r, s, threads);
        else if (name == "modal") modal_suite(r, s);
        else if (name == "toyworlds") toyworlds_suite(r, s);
    }
    return out;
}

}  // namespace strongdet
