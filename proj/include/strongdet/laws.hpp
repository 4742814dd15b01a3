#pragma once

// Theories as packages of fundamental laws: a dynamical law plus a
// boundary-condition law, optionally with a statistical postulate.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "strongdet/matrix_json.hpp"
#include "strongdet/quantum_core.hpp"

namespace strongdet {

struct SchrodingerFlow {
    Hamiltonian H;
};
struct VonNeumannFlow {
    Hamiltonian H;
};
using DynamicalLaw = std::variant<SchrodingerFlow, VonNeumannFlow>;

const Hamiltonian& hamiltonian_of(const DynamicalLaw& law);

/// Initial wave function confined to a subspace.
struct PastHypothesis {
    Subspace subspace;
};
/// Initial density matrix fixed to the normalized projection onto a subspace.
struct InitialProjection {
    Subspace subspace;
};
/// Stipulates one initial wave function outright.
struct ExactPureState {
    StateVector psi;
};
/// Opaque classical microstate; only its description length is ever used.
struct ExactMicrostate {
    std::vector<std::uint8_t> blob;

    static ExactMicrostate from_doubles(const std::vector<double>& values);
};
using BoundaryLaw = std::variant<PastHypothesis, InitialProjection, ExactPureState, ExactMicrostate>;

struct StatisticalPostulate {
    Subspace subspace;
    static constexpr const char* measure = "uniform-sphere";
};

struct Theory {
    std::string name;
    DynamicalLaw dynamics;
    BoundaryLaw boundary;
    std::optional<StatisticalPostulate> statistics;

    Index dim() const { return hamiltonian_of(dynamics).dim(); }
    bool is_schrodinger() const { return std::holds_alternative<SchrodingerFlow>(dynamics); }
};

/// Checks the package invariants and returns the theory unchanged.
/// PastHypothesis needs a statistical postulate over the same subspace;
/// InitialProjection forbids one; Schrodinger flow cannot carry an
/// initial projection.
Theory make_theory(std::string name, DynamicalLaw dynamics, BoundaryLaw boundary,
                   std::optional<StatisticalPostulate> statistics);

/// Schrodinger equation + Past Hypothesis + Statistical Postulate.
Theory mentaculus(const Hamiltonian& H, const Subspace& S);
/// von Neumann equation + Initial Projection Hypothesis.
Theory wentaculus(const Hamiltonian& H, const Subspace& S);

/// W0 = P_S / dim S.
DensityMatrix initial_projection(const Subspace& S);

/// One draw from the uniform surface measure on the unit sphere of the subspace.
StateVector sample_statistical_postulate(const StatisticalPostulate& sp, std::uint64_t seed);
StateVector sample_uniform_sphere(const Subspace& S, std::uint64_t seed);

struct StrongDeterminismVerdict {
    bool strongly_deterministic = false;
    /// Two physically distinct admissible initial states, present when false.
    std::optional<std::pair<StateVector, StateVector>> witness;
    std::string note;
};

StrongDeterminismVerdict is_strongly_deterministic(const Theory& T);

/// Validation error unless `state` is an admissible initial state of T.
void require_admissible(const Theory& T, const QuantumState& state);

struct DeterminismCertificate {
    bool deterministic = true;
    std::size_t pairs_checked = 0;
    /// Pair (i, j) and time indices where agreement failed to propagate.
    std::optional<std::pair<std::size_t, std::size_t>> counterexample_pair;
    std::optional<std::pair<std::size_t, std::size_t>> counterexample_times;
};

/// Evolves each probe to every time, then checks that probes agreeing at one
/// sampled time agree at all of them (within `agreement_tol`).
DeterminismCertificate is_deterministic(const Theory& T, const std::vector<QuantumState>& probes,
                                        const std::vector<double>& times,
                                        double agreement_tol = default_tolerances().agreement);

/// States at the given times, starting from `initial`. Pure states stay pure
/// under Schrodinger flow; von Neumann flow returns density matrices.
std::vector<QuantumState> trajectory(const Theory& T, const QuantumState& initial,
                                     const std::vector<double>& times);

/// Physical agreement: global-phase equality for pure states, entrywise for
/// density matrices.
bool states_agree(const QuantumState& a, const QuantumState& b, double tol);

struct PredictionRefusal {
    std::string missing_input;
    std::string reason;
};
using Prediction = std::variant<StateVector, DensityMatrix, PredictionRefusal>;

/// The state at time t from the laws alone, or a refusal naming the
/// contingent input the laws do not fix.
Prediction strong_prediction(const Theory& T, double t);

Json boundary_to_json(const BoundaryLaw& B, bool symbolic = true);
BoundaryLaw boundary_from_json(const Json& j, const Hamiltonian* H = nullptr);

/// Byte length of the canonical (compact, symbolic) JSON serialization.
std::size_t description_length(const BoundaryLaw& B);

Json theory_to_json(const Theory& T);
Theory theory_from_json(const Json& j);

}  // namespace strongdet
