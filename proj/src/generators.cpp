#include "strongdet/generators.hpp"

namespace strongdet {

namespace {

int uniform_int(Engine& engine, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }

}  // namespace

modal::ModelSet random_model_set(Engine& engine, int max_worlds, int max_times, int labels) {
    const int nworlds = uniform_int(engine, 1, max_worlds);
    const int ntimes = uniform_int(engine, 1, max_times);
    std::vector<modal::FiniteWorld> worlds;
    for (int w = 0; w < nworlds; ++w) {
        modal::FiniteWorld world;
        world.id = "w" + std::to_string(w);
        for (int t = 0; t < ntimes; ++t) world.trajectory[t] = "s" + std::to_string(uniform_int(engine, 0, labels - 1));
        worlds.push_back(std::move(world));
    }
    return modal::ModelSet(0, ntimes - 1, std::move(worlds), std::string("w0"));
}

modal::SimilarityOrder random_similarity(Engine& engine, const modal::ModelSet& M) {
    std::map<std::string, std::map<std::string, int>> ranks;
    const int n = static_cast<int>(M.size());
    for (const auto& w : M.worlds())
        for (const auto& v : M.worlds()) ranks[w.id][v.id] = (w.id == v.id) ? 0 : uniform_int(engine, 1, std::max(1, n - 1));
    return modal::SimilarityOrder(std::move(ranks), M);
}

modal::Proposition random_proposition(Engine& engine, const modal::ModelSet& M, int labels) {
    modal::Proposition p;
    if (uniform_int(engine, 0, 3) == 0) {
        p.worldLevel = true;
        for (const auto& w : M.worlds())
            if (uniform_int(engine, 0, 1) == 1) p.worldIds.insert(w.id);
    } else {
        const int nevents = uniform_int(engine, 1, 2);
        for (int e = 0; e < nevents; ++e)
            p.events.emplace("s" + std::to_string(uniform_int(engine, 0, labels - 1)),
                             uniform_int(engine, M.time_min(), M.time_max()));
    }
    p.negated = uniform_int(engine, 0, 1) == 1;
    return p;
}

}  // namespace strongdet
