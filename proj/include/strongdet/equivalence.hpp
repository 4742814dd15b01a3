#pragma once

// Monte Carlo check that the normalized projection reproduces the
// statistics of the uniform ensemble of wave functions in the same subspace.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "strongdet/matrix_json.hpp"
#include "strongdet/quantum_core.hpp"

namespace strongdet {

struct LabeledObservable {
    std::string label;
    Observable observable;
};

/// Per-sample statistics of M uniform-sphere draws in S. Draw i uses seed
/// split_seed(seed, i); sums are reduced in fixed blocks, so the result is
/// independent of `threads`.
struct EnsembleStatistics {
    std::size_t samples = 0;
    CMatrix meanDensity;
    std::vector<double> mean;       // per observable
    std::vector<double> stdError;   // sample std / sqrt(M); 0 when M = 1
};

EnsembleStatistics ensemble_statistics(const Subspace& S, const std::vector<Observable>& observables,
                                       std::size_t M, std::uint64_t seed, unsigned threads = 1);

/// (1/M) sum |psi_i><psi_i| over M draws from the uniform sphere on S.
CMatrix ensemble_mean_density(const Subspace& S, std::size_t M, std::uint64_t seed, unsigned threads = 1);

struct ObservableComparison {
    std::string label;
    double wentaculusValue = 0.0;
    double ensembleMean = 0.0;
    double ensembleStdError = 0.0;
};

struct EquivalenceReport {
    Index subspaceDim = 0;
    Index ambientDim = 0;
    std::size_t sampleCount = 0;
    double frobeniusDistance = 0.0;
    double toleranceMultiplier = 5.0;
    std::vector<ObservableComparison> perObservable;
    bool passed = false;
};

/// Differences at or below this are treated as exact agreement, so
/// zero-variance observables (identity, k = 1) pass.
inline constexpr double kExactAgreementFloor = 1e-9;

EquivalenceReport equivalence_report(const Subspace& S, const std::vector<LabeledObservable>& observables,
                                     std::size_t M, std::uint64_t seed, double tolerance_multiplier = 5.0,
                                     unsigned threads = 1);

Json report_to_json(const EquivalenceReport& report);

struct ConvergencePoint {
    std::size_t M = 0;
    double medianFrobenius = 0.0;
};

/// Median Frobenius distance to the normalized projection over `seed_batch`
/// independent runs per M. Batch b uses base seed stream_seed(seed, b).
std::vector<ConvergencePoint> convergence_curve(const Subspace& S, const std::vector<std::size_t>& Ms,
                                                std::size_t seed_batch, std::uint64_t seed,
                                                unsigned threads = 1);

double median(std::vector<double> values);

}  // namespace strongdet
