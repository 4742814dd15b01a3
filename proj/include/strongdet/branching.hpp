#pragma once

// Branches as projections onto a designated pointer partition, with
// Born-rule weights read as self-locating probabilities.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "strongdet/macrostates.hpp"
#include "strongdet/matrix_json.hpp"

namespace strongdet {

struct Branch {
    std::size_t cell = 0;
    double weight = 0.0;
    QuantumState conditionalState;
};

struct BranchDecomposition {
    MacrostatePartition pointer;
    std::vector<Branch> branches;  // zero-weight cells omitted
};

/// Pure input: P psi / ||P psi||. Mixed input: P W P / w.
BranchDecomposition decompose(const QuantumState& state, const MacrostatePartition& pointer);

std::vector<std::pair<std::string, double>> self_location_distribution(const BranchDecomposition& D);

struct BranchWeightReport {
    Index k = 0;
    std::vector<std::string> cells;
    std::size_t M = 0;
    std::vector<double> weightsWentaculus;
    std::vector<double> weightsEnsembleMean;
    double maxAbsDev = 0.0;
    double refScale = 0.0;  // 2 / sqrt(M)
};

/// Branch weights of the normalized projection on S against the mean branch
/// weights of M uniform-sphere draws in S (same seed rule as the ensemble
/// statistics).
BranchWeightReport branch_weight_equivalence(const Subspace& S, const MacrostatePartition& pointer,
                                             std::size_t M, std::uint64_t seed, unsigned threads = 1);

Json branch_report_to_json(const BranchWeightReport& r);

}  // namespace strongdet
