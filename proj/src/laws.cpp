#include "strongdet/laws.hpp"

#include <cstring>

#include "strongdet/rng.hpp"

namespace strongdet {

const Hamiltonian& hamiltonian_of(const DynamicalLaw& law) {
    return std::visit([](const auto& flow) -> const Hamiltonian& { return flow.H; }, law);
}

ExactMicrostate ExactMicrostate::from_doubles(const std::vector<double>& values) {
    ExactMicrostate m;
    m.blob.resize(values.size() * sizeof(double));
    if (!values.empty()) std::memcpy(m.blob.data(), values.data(), m.blob.size());
    return m;
}

namespace {

void require_dim(Index expected, Index got, const char* what) {
    if (expected != got)
        throw ValidationError(std::string(what) + ": dimension " + std::to_string(got) +
                              " does not match Hamiltonian dimension " + std::to_string(expected));
}

bool same_subspace(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) return false;
    return (projector(a) - projector(b)).cwiseAbs().maxCoeff() < default_tolerances().orthonormal;
}

}  // namespace

Theory make_theory(std::string name, DynamicalLaw dynamics, BoundaryLaw boundary,
                   std::optional<StatisticalPostulate> statistics) {
    const Index n = hamiltonian_of(dynamics).dim();
    const bool schrodinger = std::holds_alternative<SchrodingerFlow>(dynamics);
    std::visit(
        [&](const auto& b) {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, PastHypothesis>) {
                require_dim(n, b.subspace.ambient_dim(), "past hypothesis subspace");
                if (!statistics || !same_subspace(statistics->subspace, b.subspace))
                    throw ValidationError(
                        "a past hypothesis needs a statistical postulate over the same subspace");
            } else if constexpr (std::is_same_v<B, InitialProjection>) {
                require_dim(n, b.subspace.ambient_dim(), "initial projection subspace");
                if (statistics)
                    throw ValidationError("an initial projection law admits no statistical postulate");
                if (schrodinger && b.subspace.dim() > 1)
                    throw ValidationError("Schrodinger flow cannot evolve a mixed initial projection");
            } else if constexpr (std::is_same_v<B, ExactPureState>) {
                require_dim(n, b.psi.dim(), "exact pure state");
            }
        },
        boundary);
    if (statistics) require_dim(n, statistics->subspace.ambient_dim(), "statistical postulate subspace");
    return Theory{std::move(name), std::move(dynamics), std::move(boundary), std::move(statistics)};
}

Theory mentaculus(const Hamiltonian& H, const Subspace& S) {
    return make_theory("everettian-mentaculus", SchrodingerFlow{H}, PastHypothesis{S}, StatisticalPostulate{S});
}

Theory wentaculus(const Hamiltonian& H, const Subspace& S) {
    return make_theory("everettian-wentaculus", VonNeumannFlow{H}, InitialProjection{S}, std::nullopt);
}

DensityMatrix initial_projection(const Subspace& S) {
    CMatrix w = projector(S) / static_cast<double>(S.dim());
    w = (0.5 * (w + w.adjoint())).eval();
    return DensityMatrix(std::move(w));
}

StateVector sample_uniform_sphere(const Subspace& S, std::uint64_t seed) {
    Engine engine(seed);
    const CVector coeffs = complex_normal_vector(engine, S.dim());
    return StateVector::normalized(S.basis() * coeffs);
}

StateVector sample_statistical_postulate(const StatisticalPostulate& sp, std::uint64_t seed) {
    return sample_uniform_sphere(sp.subspace, seed);
}

StrongDeterminismVerdict is_strongly_deterministic(const Theory& T) {
    // Both implemented flows are unitary, hence deterministic; the verdict
    // turns on how many physically distinct initial states the boundary law admits.
    return std::visit(
        [](const auto& b) -> StrongDeterminismVerdict {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, InitialProjection>) {
                return {true, std::nullopt, "initial projection fixes a unique initial density matrix"};
            } else if constexpr (std::is_same_v<B, ExactPureState>) {
                return {true, std::nullopt, "boundary law stipulates one initial wave function"};
            } else if constexpr (std::is_same_v<B, ExactMicrostate>) {
                return {true, std::nullopt, "boundary law stipulates one exact microstate"};
            } else {
                const Subspace& S = b.subspace;
                if (S.dim() == 1)
                    return {true, std::nullopt,
                            "past-hypothesis subspace is one-dimensional: its unit sphere is a single "
                            "physical state up to global phase"};
                StateVector first(S.basis().col(0));
                StateVector second(S.basis().col(1));
                return {false, std::make_pair(std::move(first), std::move(second)),
                        "past hypothesis admits every unit vector of a " + std::to_string(S.dim()) +
                            "-dimensional subspace"};
            }
        },
        T.boundary);
}

void require_admissible(const Theory& T, const QuantumState& state) {
    const auto& tol = default_tolerances();
    if (state_dim(state) != T.dim()) throw ValidationError("probe dimension does not match theory");
    if (T.is_schrodinger() && !std::holds_alternative<StateVector>(state))
        throw ValidationError("Schrodinger flow needs pure-state probes");
    std::visit(
        [&](const auto& b) {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, PastHypothesis>) {
                const auto* psi = std::get_if<StateVector>(&state);
                if (psi == nullptr) throw ValidationError("past hypothesis admits only wave functions");
                if (b.subspace.residual(psi->amplitudes()) >= tol.subspaceResidual)
                    throw ValidationError("probe lies outside the past-hypothesis subspace");
            } else if constexpr (std::is_same_v<B, InitialProjection>) {
                const DensityMatrix w0 = initial_projection(b.subspace);
                if (to_density(state).distance_max(w0) >= tol.hermitian)
                    throw ValidationError("probe differs from the initial projection");
            } else if constexpr (std::is_same_v<B, ExactPureState>) {
                bool ok = false;
                if (const auto* psi = std::get_if<StateVector>(&state))
                    ok = psi->physically_equals(b.psi);
                else
                    ok = to_density(state).distance_max(DensityMatrix::from_pure(b.psi)) < tol.hermitian;
                if (!ok) throw ValidationError("probe differs from the stipulated initial state");
            } else {
                throw ValidationError("exact classical microstates are not simulated");
            }
        },
        T.boundary);
}

std::vector<QuantumState> trajectory(const Theory& T, const QuantumState& initial,
                                     const std::vector<double>& times) {
    const Hamiltonian& H = hamiltonian_of(T.dynamics);
    const QuantumState start = T.is_schrodinger() ? initial : QuantumState(to_density(initial));
    std::vector<QuantumState> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!std::isfinite(t)) throw ValidationError("times must be finite");
        out.push_back(evolve(make_propagator(H, t), start));
    }
    return out;
}

bool states_agree(const QuantumState& a, const QuantumState& b, double tol) {
    const auto* pa = std::get_if<StateVector>(&a);
    const auto* pb = std::get_if<StateVector>(&b);
    if (pa != nullptr && pb != nullptr) return pa->physically_equals(*pb, tol);
    return to_density(a).distance_max(to_density(b)) < tol;
}

DeterminismCertificate is_deterministic(const Theory& T, const std::vector<QuantumState>& probes,
                                        const std::vector<double>& times, double agreement_tol) {
    for (const auto& p : probes) require_admissible(T, p);
    std::vector<std::vector<QuantumState>> paths;
    paths.reserve(probes.size());
    for (const auto& p : probes) paths.push_back(trajectory(T, p, times));

    DeterminismCertificate cert;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            ++cert.pairs_checked;
            std::optional<std::size_t> agree_at;
            std::optional<std::size_t> disagree_at;
            for (std::size_t k = 0; k < times.size(); ++k) {
                if (states_agree(paths[i][k], paths[j][k], agreement_tol)) {
                    if (!agree_at) agree_at = k;
                } else if (!disagree_at) {
                    disagree_at = k;
                }
            }
            if (agree_at && disagree_at && cert.deterministic) {
                cert.deterministic = false;
                cert.counterexample_pair = {i, j};
                cert.counterexample_times = {*agree_at, *disagree_at};
            }
        }
    }
    return cert;
}

Prediction strong_prediction(const Theory& T, double t) {
    if (std::holds_alternative<ExactMicrostate>(T.boundary))
        return PredictionRefusal{"quantum state", "classical microstate dynamics are not modeled"};
    const auto verdict = is_strongly_deterministic(T);
    if (!verdict.strongly_deterministic)
        return PredictionRefusal{"initial wave function",
                                 "the laws admit many initial states; prediction is conditional on "
                                 "the contingent initial wave function"};
    QuantumState initial = std::visit(
        [](const auto& b) -> QuantumState {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, InitialProjection>) {
                return initial_projection(b.subspace);
            } else if constexpr (std::is_same_v<B, ExactPureState>) {
                return b.psi;
            } else if constexpr (std::is_same_v<B, PastHypothesis>) {
                return StateVector(b.subspace.basis().col(0));
            } else {
                throw ValidationError("unreachable");
            }
        },
        T.boundary);
    auto states = trajectory(T, initial, {t});
    return std::visit([](auto&& s) -> Prediction { return std::move(s); }, std::move(states.front()));
}

namespace {

std::string hex_encode(const std::vector<std::uint8_t>& bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> hex_decode(const std::string& s) {
    if (s.size() % 2 != 0) throw ValidationError("microstate hex has odd length");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        throw ValidationError("microstate hex has invalid digit");
    };
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>((nibble(s[2 * i]) << 4) | nibble(s[2 * i + 1]));
    return out;
}

}  // namespace

Json boundary_to_json(const BoundaryLaw& B, bool symbolic) {
    return std::visit(
        [symbolic](const auto& b) -> Json {
            using T = std::decay_t<decltype(b)>;
            Json out;
            if constexpr (std::is_same_v<T, PastHypothesis>) {
                out["type"] = "past-hypothesis";
                out["subspace"] = subspace_to_json(b.subspace, symbolic);
            } else if constexpr (std::is_same_v<T, InitialProjection>) {
                out["type"] = "initial-projection";
                out["subspace"] = subspace_to_json(b.subspace, symbolic);
            } else if constexpr (std::is_same_v<T, ExactPureState>) {
                out["type"] = "exact-pure-state";
                out["psi"] = vector_to_json(b.psi.amplitudes());
            } else {
                out["type"] = "exact-microstate";
                out["bytes"] = hex_encode(b.blob);
            }
            return out;
        },
        B);
}

BoundaryLaw boundary_from_json(const Json& j, const Hamiltonian* H) {
    try {
        const auto type = j.at("type").get<std::string>();
        if (type == "past-hypothesis") return PastHypothesis{subspace_from_json(j.at("subspace"), H)};
        if (type == "initial-projection") return InitialProjection{subspace_from_json(j.at("subspace"), H)};
        if (type == "exact-pure-state") return ExactPureState{StateVector(vector_from_json(j.at("psi")))};
        if (type == "exact-microstate") return ExactMicrostate{hex_decode(j.at("bytes").get<std::string>())};
        throw ValidationError("unknown boundary law type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("boundary JSON: ") + e.what());
    }
}

std::size_t description_length(const BoundaryLaw& B) { return boundary_to_json(B, true).dump().size(); }

Json theory_to_json(const Theory& T) {
    Json out;
    out["name"] = T.name;
    Json dyn;
    dyn["type"] = T.is_schrodinger() ? "schrodinger" : "von-neumann";
    dyn["H"] = matrix_to_json(hamiltonian_of(T.dynamics).entries());
    out["dynamics"] = std::move(dyn);
    out["boundary"] = boundary_to_json(T.boundary, false);
    if (T.statistics) {
        Json st;
        st["measure"] = StatisticalPostulate::measure;
        st["subspace"] = subspace_to_json(T.statistics->subspace, false);
        out["statistics"] = std::move(st);
    } else {
        out["statistics"] = nullptr;
    }
    return out;
}

Theory theory_from_json(const Json& j) {
    try {
        const Json& dyn = j.at("dynamics");
        Hamiltonian H(matrix_from_json(dyn.at("H")));
        const auto type = dyn.at("type").get<std::string>();
        DynamicalLaw law = [&]() -> DynamicalLaw {
            if (type == "schrodinger") return SchrodingerFlow{H};
            if (type == "von-neumann") return VonNeumannFlow{H};
            throw ValidationError("unknown dynamics type '" + type + "'");
        }();
        BoundaryLaw boundary = boundary_from_json(j.at("boundary"), &H);
        std::optional<StatisticalPostulate> stats;
        if (j.contains("statistics") && !j.at("statistics").is_null()) {
            const Json& st = j.at("statistics");
            if (st.value("measure", std::string("uniform-sphere")) != "uniform-sphere")
                throw ValidationError("only the uniform-sphere measure is supported");
            stats = StatisticalPostulate{subspace_from_json(st.at("subspace"), &H)};
        }
        return make_theory(j.value("name", std::string("unnamed")), std::move(law), std::move(boundary),
                           std::move(stats));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("theory JSON: ") + e.what());
    }
}

}  // namespace strongdet
