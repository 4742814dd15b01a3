#pragma once

// Boltzmann macrostate partitions, quantum Boltzmann entropy and entropy
// trajectories.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strongdet/laws.hpp"
#include "strongdet/quantum_core.hpp"

namespace strongdet {

/// Mutually orthogonal cells whose dimensions sum to the ambient dimension.
class MacrostatePartition {
public:
    MacrostatePartition(std::vector<Subspace> cells, std::vector<std::string> labels);

    /// Consecutive computational-basis blocks of the given sizes. Labels
    /// default to "c0", "c1", ...
    static MacrostatePartition from_block_sizes(const std::vector<Index>& sizes,
                                                std::vector<std::string> labels = {});

    Index ambient_dim() const { return ambient_; }
    std::size_t size() const { return cells_.size(); }
    const std::vector<Subspace>& cells() const { return cells_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Observable& cell_projector(std::size_t i) const { return projectors_[i]; }

    /// Same cells in a new order: result cell i is this cell perm[i].
    MacrostatePartition permuted(const std::vector<std::size_t>& perm) const;

private:
    Index ambient_ = 0;
    std::vector<Subspace> cells_;
    std::vector<std::string> labels_;
    std::vector<Observable> projectors_;
};

struct EntropyConfig {
    double kB = 1.0;
    double dominanceThreshold = 0.99;

    void validate() const;
};

/// kB * ln(dim S).
double boltzmann_entropy(const Subspace& S, const EntropyConfig& cfg = {});
double boltzmann_entropy(Index dim, const EntropyConfig& cfg = {});

/// Born weights tr(P_nu W) (or <psi|P_nu|psi>) of every cell.
std::vector<double> cell_weights(const QuantumState& state, const MacrostatePartition& P);

struct MacrostateAssignment {
    std::optional<std::size_t> cell;  // empty when no cell dominates ("superposed")
    std::vector<double> weights;
};

MacrostateAssignment macrostate_of(const QuantumState& state, const MacrostatePartition& P,
                                   const EntropyConfig& cfg = {});

struct TrajectoryPoint {
    double time = 0.0;
    std::optional<double> entropy;  // empty when superposed
    std::optional<std::size_t> cell;
    std::vector<double> weights;
};

/// The theory's initial state evolved to each time, with cell weights and the
/// entropy of the dominant cell. Theories whose laws leave the initial wave
/// function open need `sample_seed`; omitting it is a validation error that
/// names the missing "initial wave function".
std::vector<TrajectoryPoint> entropy_trajectory(const Theory& T, const MacrostatePartition& P,
                                                const std::vector<double>& times,
                                                const EntropyConfig& cfg = {},
                                                std::optional<std::uint64_t> sample_seed = std::nullopt,
                                                unsigned threads = 1);

/// The initial state a trajectory starts from (see entropy_trajectory).
QuantumState initial_state(const Theory& T, std::optional<std::uint64_t> sample_seed);

/// time,entropy,w_<label>... with 17 significant digits and "\n" line endings.
std::string trajectory_csv(const std::vector<TrajectoryPoint>& points, const MacrostatePartition& P);

/// %.17g formatting, locale independent.
std::string format_number(double value);

}  // namespace strongdet
