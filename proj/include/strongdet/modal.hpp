#pragma once

// Determinism definitions checked over finite model sets of discrete
// worlds, and a counterfactual evaluator over those sets.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "strongdet/matrix_json.hpp"

namespace strongdet::modal {

struct FiniteWorld {
    std::string id;
    std::map<int, std::string> trajectory;  // time index -> state label

    const std::string& at(int t) const;
};

/// Worlds sharing the contiguous time domain [timeMin, timeMax].
class ModelSet {
public:
    ModelSet(int time_min, int time_max, std::vector<FiniteWorld> worlds,
             std::optional<std::string> actual = std::nullopt);

    int time_min() const { return tmin_; }
    int time_max() const { return tmax_; }
    const std::vector<FiniteWorld>& worlds() const { return worlds_; }
    const std::optional<std::string>& actual() const { return actual_; }
    std::size_t size() const { return worlds_.size(); }

    const FiniteWorld& world(const std::string& id) const;
    bool contains(const std::string& id) const;
    bool in_domain(int t) const { return t >= tmin_ && t <= tmax_; }

private:
    int tmin_;
    int tmax_;
    std::vector<FiniteWorld> worlds_;
    std::optional<std::string> actual_;
};

/// Either a disjunction of events "state label at time" or an explicit set
/// of world ids, optionally negated.
struct Proposition {
    std::set<std::pair<std::string, int>> events;
    std::set<std::string> worldIds;
    bool worldLevel = false;
    bool negated = false;

    static Proposition state_at(std::string label, int t);
    static Proposition of_worlds(std::set<std::string> ids);

    bool holds_at(const FiniteWorld& w) const;
    Proposition negation() const;
    /// Validation error if the proposition mentions labels, times or worlds
    /// the model set does not contain.
    void validate(const ModelSet& M) const;
};

/// Per evaluation world, a rank for every world: lower is more similar, the
/// world itself is the unique rank-0 world.
class SimilarityOrder {
public:
    SimilarityOrder(std::map<std::string, std::map<std::string, int>> ranks, const ModelSet& M);

    /// Every other world equally similar (rank 1).
    static SimilarityOrder uniform(const ModelSet& M);

    int rank(const std::string& from, const std::string& to) const;

private:
    std::map<std::string, std::map<std::string, int>> ranks_;
};

bool agree_at(const FiniteWorld& w, const FiniteWorld& v, int t);

struct Counterexample {
    std::string w;
    std::string v;
    int tAgree = 0;
    int tDisagree = 0;
};

struct DeterminismVerdict {
    bool holds = true;
    std::optional<Counterexample> counterexample;
};

/// Agreement at any time implies agreement at all times.
DeterminismVerdict check_determinism(const ModelSet& M);
/// Agreement at t implies agreement at all later times.
DeterminismVerdict check_futuristic_determinism(const ModelSet& M);
/// Agreement at t implies agreement at all earlier times.
DeterminismVerdict check_historical_determinism(const ModelSet& M);
/// Exactly one world.
bool check_strong_determinism(const ModelSet& M);

enum class Truth { False, True, VacuousTrue };

const char* to_string(Truth t);
inline bool is_true(Truth t) { return t != Truth::False; }

/// A []-> C at evalWorld: vacuous-true without A-worlds; otherwise C holds at
/// every most-similar A-world.
Truth counterfactual(const ModelSet& M, const SimilarityOrder& sim, const Proposition& A, const Proposition& C,
                     const std::string& eval_world);

struct DependenceVerdict {
    bool holds = false;
    Truth ifA = Truth::False;        // A []-> C
    Truth ifNotA = Truth::False;     // not-A []-> not-C
    bool degenerate = false;         // both conjuncts vacuous or one vacuous: the dependence is empty
};

/// (A []-> C) and (not-A []-> not-C).
DependenceVerdict counterfactual_dependence(const ModelSet& M, const SimilarityOrder& sim, const Proposition& A,
                                            const Proposition& C, const std::string& eval_world);

ModelSet model_set_from_json(const Json& j);
Json model_set_to_json(const ModelSet& M);
Proposition proposition_from_json(const Json& j);
Json proposition_to_json(const Proposition& p);
/// {"ranks": {"w": {"w": 0, "v": 1, ...}, ...}}; missing means uniform.
SimilarityOrder similarity_from_json(const Json& j, const ModelSet& M);

Json verdict_to_json(const DeterminismVerdict& v);

}  // namespace strongdet::modal
