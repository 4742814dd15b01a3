#include "strongdet/modal.hpp"

#include <algorithm>
#include <climits>

#include "strongdet/errors.hpp"

namespace strongdet::modal {

const std::string& FiniteWorld::at(int t) const {
    auto it = trajectory.find(t);
    if (it == trajectory.end())
        throw ValidationError("world '" + id + "' has no state at time " + std::to_string(t));
    return it->second;
}

ModelSet::ModelSet(int time_min, int time_max, std::vector<FiniteWorld> worlds, std::optional<std::string> actual)
    : tmin_(time_min), tmax_(time_max), worlds_(std::move(worlds)), actual_(std::move(actual)) {
    if (tmin_ > tmax_) throw ValidationError("empty time domain");
    std::set<std::string> ids;
    for (const auto& w : worlds_) {
        if (!ids.insert(w.id).second) throw ValidationError("duplicate world id '" + w.id + "'");
        if (w.trajectory.size() != static_cast<std::size_t>(tmax_ - tmin_ + 1) ||
            w.trajectory.begin()->first != tmin_ || w.trajectory.rbegin()->first != tmax_)
            throw ValidationError("world '" + w.id + "' is not defined on the whole time domain");
    }
    if (actual_ && !ids.count(*actual_)) throw ValidationError("actual world '" + *actual_ + "' is not a member");
}

const FiniteWorld& ModelSet::world(const std::string& id) const {
    for (const auto& w : worlds_)
        if (w.id == id) return w;
    throw ValidationError("no world with id '" + id + "'");
}

bool ModelSet::contains(const std::string& id) const {
    return std::any_of(worlds_.begin(), worlds_.end(), [&](const auto& w) { return w.id == id; });
}

// Propositions ---------------------------------------------------------------

Proposition Proposition::state_at(std::string label, int t) {
    Proposition p;
    p.events.emplace(std::move(label), t);
    return p;
}

Proposition Proposition::of_worlds(std::set<std::string> ids) {
    Proposition p;
    p.worldLevel = true;
    p.worldIds = std::move(ids);
    return p;
}

bool Proposition::holds_at(const FiniteWorld& w) const {
    bool value = false;
    if (worldLevel) {
        value = worldIds.count(w.id) > 0;
    } else {
        for (const auto& [label, t] : events) {
            auto it = w.trajectory.find(t);
            if (it != w.trajectory.end() && it->second == label) {
                value = true;
                break;
            }
        }
    }
    return negated ? !value : value;
}

Proposition Proposition::negation() const {
    Proposition p = *this;
    p.negated = !negated;
    return p;
}

void Proposition::validate(const ModelSet& M) const {
    if (worldLevel) {
        for (const auto& id : worldIds)
            if (!M.contains(id)) throw ValidationError("proposition names unknown world '" + id + "'");
        return;
    }
    for (const auto& [label, t] : events) {
        if (!M.in_domain(t)) throw ValidationError("proposition time " + std::to_string(t) + " is out of domain");
        const bool seen = std::any_of(M.worlds().begin(), M.worlds().end(), [&](const auto& w) {
            return std::any_of(w.trajectory.begin(), w.trajectory.end(),
                               [&](const auto& kv) { return kv.second == label; });
        });
        if (!seen) throw ValidationError("proposition names unknown state label '" + label + "'");
    }
}

// Similarity -----------------------------------------------------------------

SimilarityOrder::SimilarityOrder(std::map<std::string, std::map<std::string, int>> ranks, const ModelSet& M)
    : ranks_(std::move(ranks)) {
    for (const auto& w : M.worlds()) {
        auto row = ranks_.find(w.id);
        if (row == ranks_.end()) throw ValidationError("similarity order has no row for world '" + w.id + "'");
        for (const auto& v : M.worlds()) {
            auto r = row->second.find(v.id);
            if (r == row->second.end())
                throw ValidationError("similarity order for '" + w.id + "' does not rank '" + v.id + "'");
            if (v.id == w.id && r->second != 0)
                throw ValidationError("world '" + w.id + "' must have rank 0 relative to itself");
            if (v.id != w.id && r->second <= 0)
                throw ValidationError("only '" + w.id + "' itself may have rank 0 relative to '" + w.id + "'");
        }
    }
}

SimilarityOrder SimilarityOrder::uniform(const ModelSet& M) {
    std::map<std::string, std::map<std::string, int>> ranks;
    for (const auto& w : M.worlds())
        for (const auto& v : M.worlds()) ranks[w.id][v.id] = (w.id == v.id) ? 0 : 1;
    return SimilarityOrder(std::move(ranks), M);
}

int SimilarityOrder::rank(const std::string& from, const std::string& to) const {
    auto row = ranks_.find(from);
    if (row == ranks_.end()) throw ValidationError("no similarity row for '" + from + "'");
    auto r = row->second.find(to);
    if (r == row->second.end()) throw ValidationError("'" + from + "' does not rank '" + to + "'");
    return r->second;
}

// Determinism ----------------------------------------------------------------

bool agree_at(const FiniteWorld& w, const FiniteWorld& v, int t) { return w.at(t) == v.at(t); }

namespace {

enum class Direction { Both, Later, Earlier };

DeterminismVerdict check(const ModelSet& M, Direction dir) {
    if (M.size() == 0) throw ValidationError("model set is empty");
    const auto& ws = M.worlds();
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = i + 1; j < ws.size(); ++j) {
            for (int t = M.time_min(); t <= M.time_max(); ++t) {
                if (!agree_at(ws[i], ws[j], t)) continue;
                for (int s = M.time_min(); s <= M.time_max(); ++s) {
                    if (dir == Direction::Later && s <= t) continue;
                    if (dir == Direction::Earlier && s >= t) continue;
                    if (!agree_at(ws[i], ws[j], s)) return {false, Counterexample{ws[i].id, ws[j].id, t, s}};
                }
            }
        }
    }
    return {true, std::nullopt};
}

}  // namespace

DeterminismVerdict check_determinism(const ModelSet& M) { return check(M, Direction::Both); }
DeterminismVerdict check_futuristic_determinism(const ModelSet& M) { return check(M, Direction::Later); }
DeterminismVerdict check_historical_determinism(const ModelSet& M) { return check(M, Direction::Earlier); }

bool check_strong_determinism(const ModelSet& M) {
    if (M.size() == 0) throw ValidationError("model set is empty");
    return M.size() == 1;
}

// Counterfactuals ------------------------------------------------------------

const char* to_string(Truth t) {
    switch (t) {
        case Truth::False: return "false";
        case Truth::True: return "true";
        case Truth::VacuousTrue: return "vacuous-true";
    }
    return "?";
}

Truth counterfactual(const ModelSet& M, const SimilarityOrder& sim, const Proposition& A, const Proposition& C,
                     const std::string& eval_world) {
    if (!M.contains(eval_world)) throw ValidationError("evaluation world '" + eval_world + "' is not a member");
    int best = INT_MAX;
    for (const auto& w : M.worlds())
        if (A.holds_at(w)) best = std::min(best, sim.rank(eval_world, w.id));
    if (best == INT_MAX) return Truth::VacuousTrue;
    for (const auto& w : M.worlds())
        if (A.holds_at(w) && sim.rank(eval_world, w.id) == best && !C.holds_at(w)) return Truth::False;
    return Truth::True;
}

DependenceVerdict counterfactual_dependence(const ModelSet& M, const SimilarityOrder& sim, const Proposition& A,
                                            const Proposition& C, const std::string& eval_world) {
    DependenceVerdict d;
    d.ifA = counterfactual(M, sim, A, C, eval_world);
    d.ifNotA = counterfactual(M, sim, A.negation(), C.negation(), eval_world);
    d.holds = is_true(d.ifA) && is_true(d.ifNotA);
    d.degenerate = d.holds && (d.ifA == Truth::VacuousTrue || d.ifNotA == Truth::VacuousTrue);
    return d;
}

// JSON -----------------------------------------------------------------------

ModelSet model_set_from_json(const Json& j) {
    try {
        const Json& times = j.at("times");
        if (!times.is_array() || times.size() != 2) throw ValidationError("'times' must be [t0, t1]");
        const int t0 = times[0].get<int>();
        const int t1 = times[1].get<int>();
        std::vector<FiniteWorld> worlds;
        for (const auto& wj : j.at("worlds")) {
            FiniteWorld w;
            w.id = wj.at("id").get<std::string>();
            for (const auto& [key, value] : wj.at("trajectory").items()) {
                std::size_t used = 0;
                const int t = std::stoi(key, &used);
                if (used != key.size()) throw ValidationError("trajectory key '" + key + "' is not an integer");
                w.trajectory[t] = value.get<std::string>();
            }
            worlds.push_back(std::move(w));
        }
        std::optional<std::string> actual;
        if (j.contains("actual") && !j.at("actual").is_null()) actual = j.at("actual").get<std::string>();
        return ModelSet(t0, t1, std::move(worlds), std::move(actual));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model set JSON: ") + e.what());
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ValidationError*>(&e)) throw;
        throw ValidationError(std::string("model set JSON: ") + e.what());
    }
}

Json model_set_to_json(const ModelSet& M) {
    Json out;
    out["times"] = Json::array({M.time_min(), M.time_max()});
    Json worlds = Json::array();
    for (const auto& w : M.worlds()) {
        Json traj = Json::object();
        for (const auto& [t, label] : w.trajectory) traj[std::to_string(t)] = label;
        Json wj;
        wj["id"] = w.id;
        wj["trajectory"] = std::move(traj);
        worlds.push_back(std::move(wj));
    }
    out["worlds"] = std::move(worlds);
    out["actual"] = M.actual() ? Json(*M.actual()) : Json(nullptr);
    return out;
}

Proposition proposition_from_json(const Json& j) {
    try {
        Proposition p;
        if (j.contains("worlds")) {
            p.worldLevel = true;
            for (const auto& id : j.at("worlds")) p.worldIds.insert(id.get<std::string>());
        } else {
            for (const auto& e : j.at("events")) p.events.emplace(e.at(0).get<std::string>(), e.at(1).get<int>());
        }
        p.negated = j.value("negated", false);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("proposition JSON: ") + e.what());
    }
}

Json proposition_to_json(const Proposition& p) {
    Json out;
    if (p.worldLevel) {
        out["worlds"] = p.worldIds;
    } else {
        Json events = Json::array();
        for (const auto& [label, t] : p.events) events.push_back(Json::array({label, t}));
        out["events"] = std::move(events);
    }
    out["negated"] = p.negated;
    return out;
}

SimilarityOrder similarity_from_json(const Json& j, const ModelSet& M) {
    if (j.is_null() || !j.contains("ranks")) return SimilarityOrder::uniform(M);
    try {
        std::map<std::string, std::map<std::string, int>> ranks;
        for (const auto& [from, row] : j.at("ranks").items())
            for (const auto& [to, r] : row.items()) ranks[from][to] = r.get<int>();
        return SimilarityOrder(std::move(ranks), M);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("similarity JSON: ") + e.what());
    }
}

Json verdict_to_json(const DeterminismVerdict& v) {
    Json out;
    out["holds"] = v.holds;
    if (v.counterexample) {
        Json c;
        c["w"] = v.counterexample->w;
        c["v"] = v.counterexample->v;
        c["t_agree"] = v.counterexample->tAgree;
        c["t_disagree"] = v.counterexample->tDisagree;
        out["counterexample"] = std::move(c);
    } else {
        out["counterexample"] = nullptr;
    }
    return out;
}

}  // namespace strongdet::modal
