#include "strongdet/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "strongdet/laws.hpp"
#include "strongdet/parallel.hpp"
#include "strongdet/rng.hpp"

namespace strongdet {

EnsembleStatistics ensemble_statistics(const Subspace& S, const std::vector<Observable>& observables,
                                       std::size_t M, std::uint64_t seed, unsigned threads) {
    if (M < 1) throw ValidationError("sample count must be >= 1");
    const Index n = S.ambient_dim();
    for (const auto& A : observables)
        if (A.dim() != n) throw ValidationError("observable dimension does not match subspace");

    const std::size_t nobs = observables.size();
    const std::size_t blocks = (M + kReductionBlock - 1) / kReductionBlock;
    std::vector<CMatrix> block_density(blocks);
    std::vector<double> values(M * nobs);

    parallel_for(blocks, threads, [&](std::size_t b) {
        CMatrix acc = CMatrix::Zero(n, n);
        const std::size_t end = std::min(M, (b + 1) * kReductionBlock);
        for (std::size_t i = b * kReductionBlock; i < end; ++i) {
            const StateVector psi = sample_uniform_sphere(S, split_seed(seed, i));
            acc.noalias() += psi.amplitudes() * psi.amplitudes().adjoint();
            for (std::size_t o = 0; o < nobs; ++o) values[i * nobs + o] = expectation(observables[o], psi);
        }
        block_density[b] = std::move(acc);
    });

    EnsembleStatistics out;
    out.samples = M;
    out.meanDensity = CMatrix::Zero(n, n);
    for (const auto& d : block_density) out.meanDensity += d;
    out.meanDensity /= static_cast<double>(M);
    out.mean.assign(nobs, 0.0);
    out.stdError.assign(nobs, 0.0);
    for (std::size_t o = 0; o < nobs; ++o) {
        double sum = 0.0;
        for (std::size_t i = 0; i < M; ++i) sum += values[i * nobs + o];
        const double mean = sum / static_cast<double>(M);
        double ss = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double d = values[i * nobs + o] - mean;
            ss += d * d;
        }
        out.mean[o] = mean;
        if (M > 1) out.stdError[o] = std::sqrt(ss / static_cast<double>(M - 1)) / std::sqrt(static_cast<double>(M));
    }
    return out;
}

CMatrix ensemble_mean_density(const Subspace& S, std::size_t M, std::uint64_t seed, unsigned threads) {
    return ensemble_statistics(S, {}, M, seed, threads).meanDensity;
}

EquivalenceReport equivalence_report(const Subspace& S, const std::vector<LabeledObservable>& observables,
                                     std::size_t M, std::uint64_t seed, double tolerance_multiplier,
                                     unsigned threads) {
    if (!(tolerance_multiplier > 0.0)) throw ValidationError("tolerance multiplier must be positive");
    std::vector<Observable> ops;
    ops.reserve(observables.size());
    for (const auto& o : observables) ops.push_back(o.observable);
    const EnsembleStatistics stats = ensemble_statistics(S, ops, M, seed, threads);
    const DensityMatrix w0 = initial_projection(S);

    EquivalenceReport r;
    r.subspaceDim = S.dim();
    r.ambientDim = S.ambient_dim();
    r.sampleCount = M;
    r.toleranceMultiplier = tolerance_multiplier;
    r.frobeniusDistance = (stats.meanDensity - w0.entries()).norm();
    bool ok = r.frobeniusDistance <
              tolerance_multiplier * std::sqrt(static_cast<double>(S.dim())) / std::sqrt(static_cast<double>(M));
    for (std::size_t o = 0; o < observables.size(); ++o) {
        ObservableComparison c{observables[o].label, expectation(ops[o], w0), stats.mean[o], stats.stdError[o]};
        const double diff = std::abs(c.wentaculusValue - c.ensembleMean);
        if (!(diff <= kExactAgreementFloor || diff < tolerance_multiplier * c.ensembleStdError)) ok = false;
        r.perObservable.push_back(std::move(c));
    }
    r.passed = ok;
    return r;
}

Json report_to_json(const EquivalenceReport& report) {
    Json out;
    out["subspaceDim"] = report.subspaceDim;
    out["ambientDim"] = report.ambientDim;
    out["sampleCount"] = report.sampleCount;
    out["frobeniusDistance"] = report.frobeniusDistance;
    out["toleranceMultiplier"] = report.toleranceMultiplier;
    Json per = Json::array();
    for (const auto& c : report.perObservable) {
        Json e;
        e["label"] = c.label;
        e["wentaculusValue"] = c.wentaculusValue;
        e["ensembleMean"] = c.ensembleMean;
        e["ensembleStdError"] = c.ensembleStdError;
        per.push_back(std::move(e));
    }
    out["perObservable"] = std::move(per);
    out["passed"] = report.passed;
    return out;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ValidationError("median of empty list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<ConvergencePoint> convergence_curve(const Subspace& S, const std::vector<std::size_t>& Ms,
                                                std::size_t seed_batch, std::uint64_t seed, unsigned threads) {
    if (seed_batch < 1) throw ValidationError("seed batch must be >= 1");
    if (!std::is_sorted(Ms.begin(), Ms.end())) throw ValidationError("sample counts must be ascending");
    const CMatrix w0 = initial_projection(S).entries();
    std::vector<ConvergencePoint> out;
    for (std::size_t M : Ms) {
        std::vector<double> distances(seed_batch);
        for (std::size_t b = 0; b < seed_batch; ++b)
            distances[b] = (ensemble_mean_density(S, M, stream_seed(seed, b), threads) - w0).norm();
        out.push_back({M, median(std::move(distances))});
    }
    return out;
}

}  // namespace strongdet
