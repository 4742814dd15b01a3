#include "strongdet/macrostates.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "strongdet/parallel.hpp"

namespace strongdet {

MacrostatePartition::MacrostatePartition(std::vector<Subspace> cells, std::vector<std::string> labels)
    : cells_(std::move(cells)), labels_(std::move(labels)) {
    if (cells_.empty()) throw ValidationError("partition needs at least one cell");
    if (labels_.size() != cells_.size()) throw ValidationError("partition needs one label per cell");
    ambient_ = cells_.front().ambient_dim();
    Index total = 0;
    for (const auto& c : cells_) {
        if (c.ambient_dim() != ambient_) throw ValidationError("partition cells live in different spaces");
        total += c.dim();
    }
    if (total != ambient_) throw ValidationError("partition cell dimensions do not sum to ambientDim");
    const double tol = default_tolerances().orthonormal;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        for (std::size_t j = i + 1; j < cells_.size(); ++j)
            if ((cells_[i].basis().adjoint() * cells_[j].basis()).cwiseAbs().maxCoeff() > tol)
                throw ValidationError("partition cells are not mutually orthogonal");
    for (std::size_t i = 0; i < labels_.size(); ++i)
        for (std::size_t j = i + 1; j < labels_.size(); ++j)
            if (labels_[i] == labels_[j]) throw ValidationError("duplicate cell label '" + labels_[i] + "'");
    projectors_.reserve(cells_.size());
    for (const auto& c : cells_) projectors_.push_back(projector_observable(c));
}

MacrostatePartition MacrostatePartition::from_block_sizes(const std::vector<Index>& sizes,
                                                          std::vector<std::string> labels) {
    Index ambient = 0;
    for (Index s : sizes) {
        if (s < 1) throw ValidationError("cell sizes must be >= 1");
        ambient += s;
    }
    if (labels.empty())
        for (std::size_t i = 0; i < sizes.size(); ++i) labels.push_back("c" + std::to_string(i));
    std::vector<Subspace> cells;
    Index offset = 0;
    for (Index s : sizes) {
        cells.push_back(Subspace::basis_block(offset, s, ambient));
        offset += s;
    }
    return MacrostatePartition(std::move(cells), std::move(labels));
}

MacrostatePartition MacrostatePartition::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != cells_.size()) throw ValidationError("permutation has wrong length");
    std::vector<Subspace> cells;
    std::vector<std::string> labels;
    for (auto p : perm) {
        if (p >= cells_.size()) throw ValidationError("permutation index out of range");
        cells.push_back(cells_[p]);
        labels.push_back(labels_[p]);
    }
    return MacrostatePartition(std::move(cells), std::move(labels));
}

void EntropyConfig::validate() const {
    if (!(kB > 0.0) || !std::isfinite(kB)) throw ValidationError("kB must be positive");
    if (!(dominanceThreshold > 0.5 && dominanceThreshold <= 1.0))
        throw ValidationError("dominance threshold must lie in (0.5, 1]");
}

double boltzmann_entropy(Index dim, const EntropyConfig& cfg) {
    cfg.validate();
    if (dim < 1) throw ValidationError("macrostate dimension must be >= 1");
    return cfg.kB * std::log(static_cast<double>(dim));
}

double boltzmann_entropy(const Subspace& S, const EntropyConfig& cfg) { return boltzmann_entropy(S.dim(), cfg); }

std::vector<double> cell_weights(const QuantumState& state, const MacrostatePartition& P) {
    if (state_dim(state) != P.ambient_dim()) throw ValidationError("state and partition dimensions differ");
    std::vector<double> w(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) w[i] = expectation(P.cell_projector(i), state);
    return w;
}

MacrostateAssignment macrostate_of(const QuantumState& state, const MacrostatePartition& P,
                                   const EntropyConfig& cfg) {
    cfg.validate();
    MacrostateAssignment out;
    out.weights = cell_weights(state, P);
    for (std::size_t i = 0; i < out.weights.size(); ++i)
        if (out.weights[i] > cfg.dominanceThreshold) out.cell = i;
    return out;
}

QuantumState initial_state(const Theory& T, std::optional<std::uint64_t> sample_seed) {
    return std::visit(
        [&](const auto& b) -> QuantumState {
            using B = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<B, InitialProjection>) {
                return initial_projection(b.subspace);
            } else if constexpr (std::is_same_v<B, ExactPureState>) {
                return b.psi;
            } else if constexpr (std::is_same_v<B, PastHypothesis>) {
                if (b.subspace.dim() == 1) return StateVector(b.subspace.basis().col(0));
                if (!sample_seed)
                    throw ValidationError(
                        "missing contingent input: initial wave function (supply a sample seed)");
                return sample_uniform_sphere(b.subspace, *sample_seed);
            } else {
                throw ValidationError("exact classical microstates are not simulated");
            }
        },
        T.boundary);
}

std::vector<TrajectoryPoint> entropy_trajectory(const Theory& T, const MacrostatePartition& P,
                                                const std::vector<double>& times, const EntropyConfig& cfg,
                                                std::optional<std::uint64_t> sample_seed, unsigned threads) {
    cfg.validate();
    if (P.ambient_dim() != T.dim()) throw ValidationError("partition and theory dimensions differ");
    const QuantumState start = initial_state(T, sample_seed);
    std::vector<TrajectoryPoint> out(times.size());
    parallel_for(times.size(), threads, [&](std::size_t i) {
        const auto state = trajectory(T, start, {times[i]}).front();
        const auto assignment = macrostate_of(state, P, cfg);
        TrajectoryPoint& pt = out[i];
        pt.time = times[i];
        pt.cell = assignment.cell;
        pt.weights = assignment.weights;
        if (assignment.cell) pt.entropy = boltzmann_entropy(P.cells()[*assignment.cell], cfg);
    });
    return out;
}

std::string format_number(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& points, const MacrostatePartition& P) {
    std::string out = "time,entropy";
    for (const auto& label : P.labels()) out += ",w_" + label;
    out += '\n';
    for (const auto& pt : points) {
        out += format_number(pt.time);
        out += ',';
        if (pt.entropy) out += format_number(*pt.entropy);
        for (double w : pt.weights) {
            out += ',';
            out += format_number(w);
        }
        out += '\n';
    }
    return out;
}

}  // namespace strongdet
