#include "strongdet/branching.hpp"

#include <algorithm>
#include <cmath>

#include "strongdet/equivalence.hpp"
#include "strongdet/laws.hpp"

namespace strongdet {

BranchDecomposition decompose(const QuantumState& state, const MacrostatePartition& pointer) {
    const std::vector<double> weights = cell_weights(state, pointer);
    const double cutoff = default_tolerances().zeroWeight;
    BranchDecomposition D{pointer, {}};
    for (std::size_t nu = 0; nu < pointer.size(); ++nu) {
        if (weights[nu] <= cutoff) continue;
        const CMatrix& P = pointer.cell_projector(nu).entries();
        if (const auto* psi = std::get_if<StateVector>(&state)) {
            D.branches.push_back({nu, weights[nu], StateVector::normalized(P * psi->amplitudes())});
        } else {
            const auto& W = std::get<DensityMatrix>(state).entries();
            CMatrix cond = P * W * P / weights[nu];
            cond = (0.5 * (cond + cond.adjoint())).eval();
            // renormalize the trace against rounding in the weight
            cond /= cond.trace().real();
            D.branches.push_back({nu, weights[nu], DensityMatrix(std::move(cond))});
        }
    }
    return D;
}

std::vector<std::pair<std::string, double>> self_location_distribution(const BranchDecomposition& D) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(D.branches.size());
    for (const auto& b : D.branches) out.emplace_back(D.pointer.labels()[b.cell], b.weight);
    return out;
}

BranchWeightReport branch_weight_equivalence(const Subspace& S, const MacrostatePartition& pointer,
                                             std::size_t M, std::uint64_t seed, unsigned threads) {
    if (pointer.ambient_dim() != S.ambient_dim())
        throw ValidationError("pointer partition and subspace dimensions differ");
    std::vector<Observable> projectors;
    for (std::size_t i = 0; i < pointer.size(); ++i) projectors.push_back(pointer.cell_projector(i));
    const EnsembleStatistics stats = ensemble_statistics(S, projectors, M, seed, threads);
    const DensityMatrix w0 = initial_projection(S);

    BranchWeightReport r;
    r.k = S.dim();
    r.cells = pointer.labels();
    r.M = M;
    r.weightsWentaculus = cell_weights(w0, pointer);
    r.weightsEnsembleMean = stats.mean;
    for (std::size_t i = 0; i < pointer.size(); ++i)
        r.maxAbsDev = std::max(r.maxAbsDev, std::abs(r.weightsWentaculus[i] - r.weightsEnsembleMean[i]));
    r.refScale = 2.0 / std::sqrt(static_cast<double>(M));
    return r;
}

Json branch_report_to_json(const BranchWeightReport& r) {
    Json out;
    out["k"] = r.k;
    out["cells"] = r.cells;
    out["M"] = r.M;
    out["weights_wentaculus"] = r.weightsWentaculus;
    out["weights_ensemble_mean"] = r.weightsEnsembleMean;
    out["max_abs_dev"] = r.maxAbsDev;
    out["ref_scale"] = r.refScale;
    return out;
}

}  // namespace strongdet
