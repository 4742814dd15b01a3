#pragma once

// Seeded random fixtures shared by the invariant suites and the tests.

#include <cstdint>

#include "strongdet/modal.hpp"
#include "strongdet/rng.hpp"

namespace strongdet {

/// 1..max_worlds worlds over times [0, times-1] (times drawn in 1..max_times),
/// labels drawn from {s0, ..., s<labels-1>}.
modal::ModelSet random_model_set(Engine& engine, int max_worlds, int max_times, int labels = 3);

/// A random total preorder per world with the world itself uniquely at rank 0.
modal::SimilarityOrder random_similarity(Engine& engine, const modal::ModelSet& M);

/// A random state-event or world-set proposition over M.
modal::Proposition random_proposition(Engine& engine, const modal::ModelSet& M, int labels = 3);

}  // namespace strongdet
