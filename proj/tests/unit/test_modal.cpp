#include <doctest.h>

#include "oracles.hpp"
#include "strongdet/generators.hpp"
#include "strongdet/modal.hpp"
#include "strongdet/rng.hpp"
#include "strongdet/toyworlds.hpp"

using namespace strongdet;
using namespace strongdet::modal;

namespace {

FiniteWorld world(std::string id, const std::vector<std::string>& labels) {
    FiniteWorld w;
    w.id = std::move(id);
    for (std::size_t t = 0; t < labels.size(); ++t) w.trajectory[static_cast<int>(t)] = labels[t];
    return w;
}

ModelSet six_worlds() {
    std::vector<FiniteWorld> ws;
    for (int i = 0; i < 6; ++i) {
        std::vector<std::string> labels;
        for (int t = 0; t < 5; ++t) labels.push_back("s" + std::to_string(i + 6 * t));
        ws.push_back(world("w" + std::to_string(i), labels));
    }
    return ModelSet(0, 4, ws, "w0");
}

ModelSet crossing() {
    return ModelSet(0, 4, {world("w", {"a", "b", "c", "x", "d"}), world("v", {"e", "f", "g", "x", "h"})}, "w");
}

ModelSet merging() { return ModelSet(0, 3, {world("w", {"a", "b", "m", "n"}), world("v", {"c", "d", "m", "n"})}); }

ModelSet splitting() { return ModelSet(0, 3, {world("w", {"s", "s", "a", "b"}), world("v", {"s", "s", "c", "d"})}); }

}  // namespace

TEST_CASE("agree_at") {
    const auto M = six_worlds();
    for (int t = 0; t <= 4; ++t) {
        CHECK(agree_at(M.worlds()[2], M.worlds()[2], t));
        CHECK_FALSE(agree_at(M.worlds()[0], M.worlds()[1], t));
    }
    const auto X = crossing();
    for (int t = 0; t <= 4; ++t) CHECK(agree_at(X.worlds()[0], X.worlds()[1], t) == (t == 3));
    CHECK_THROWS_AS(agree_at(X.worlds()[0], X.worlds()[1], 5), ValidationError);
}

TEST_CASE("determinism checks on fixtures") {
    const auto six = six_worlds();
    CHECK(check_determinism(six).holds);
    CHECK(check_futuristic_determinism(six).holds);
    CHECK(check_historical_determinism(six).holds);
    CHECK_FALSE(check_strong_determinism(six));

    const auto diverge = ModelSet(0, 1, {world("w", {"a", "b"}), world("v", {"a", "c"})});
    const auto d = check_determinism(diverge);
    CHECK_FALSE(d.holds);
    REQUIRE(d.counterexample.has_value());
    CHECK(d.counterexample->tAgree == 0);
    CHECK(d.counterexample->tDisagree == 1);

    const auto single = ModelSet(0, 2, {world("only", {"a", "b", "c"})});
    CHECK(check_determinism(single).holds);
    CHECK(check_strong_determinism(single));

    const auto merge = merging();
    CHECK(check_futuristic_determinism(merge).holds);
    CHECK_FALSE(check_historical_determinism(merge).holds);
    CHECK_FALSE(check_determinism(merge).holds);

    const auto split = splitting();
    CHECK_FALSE(check_futuristic_determinism(split).holds);
    CHECK(check_historical_determinism(split).holds);
    CHECK_FALSE(check_determinism(split).holds);

    const auto cross = check_determinism(crossing());
    CHECK_FALSE(cross.holds);
    CHECK(cross.counterexample->tAgree == 3);

    CHECK(check_strong_determinism(toyworlds::lone_particle_model_set(5)));
    CHECK_THROWS_AS(check_determinism(ModelSet(0, 1, {})), ValidationError);
}

TEST_CASE("model set invariants") {
    CHECK_THROWS_AS(ModelSet(0, 2, {world("w", {"a", "b"})}), ValidationError);
    CHECK_THROWS_AS(ModelSet(0, 0, {world("w", {"a"}), world("w", {"b"})}), ValidationError);
    CHECK_THROWS_AS(ModelSet(0, 0, {world("w", {"a"})}, "nobody"), ValidationError);
}

TEST_CASE("counterfactual examples") {
    const auto single = ModelSet(0, 2, {world("only", {"a", "b", "c"})}, "only");
    const auto sim1 = SimilarityOrder::uniform(single);
    const auto notA = Proposition::state_at("a", 0).negation();
    CHECK(counterfactual(single, sim1, notA, Proposition::state_at("b", 1), "only") == Truth::VacuousTrue);
    CHECK(counterfactual(single, sim1, notA, Proposition::state_at("b", 1).negation(), "only") == Truth::VacuousTrue);

    const auto X = crossing();
    const auto simX = SimilarityOrder::uniform(X);
    CHECK(counterfactual(X, simX, Proposition::state_at("a", 0), Proposition::state_at("b", 1), "w") == Truth::True);
    CHECK(counterfactual(X, simX, Proposition::state_at("a", 0), Proposition::state_at("f", 1), "w") == Truth::False);

    const auto three = ModelSet(0, 1, {world("u", {"p", "q"}), world("v", {"r", "q"}), world("x", {"r", "z"})}, "u");
    const auto sim = SimilarityOrder({{"u", {{"u", 0}, {"v", 2}, {"x", 1}}},
                                      {"v", {{"v", 0}, {"u", 1}, {"x", 1}}},
                                      {"x", {{"x", 0}, {"u", 3}, {"v", 2}}}},
                                     three);
    const auto A = Proposition::state_at("r", 0);
    for (const auto& C : {Proposition::state_at("q", 1), Proposition::state_at("z", 1)})
        for (const auto& w : {"u", "v", "x"})
            CHECK(to_string(counterfactual(three, sim, A, C, w)) == oracle::brute_force_counterfactual(three, sim, A, C, w));
    CHECK(counterfactual(three, sim, A, Proposition::state_at("q", 1), "u") == Truth::False);

    CHECK_THROWS_AS(SimilarityOrder({{"u", {{"u", 1}}}}, ModelSet(0, 0, {world("u", {"p"})})), ValidationError);
    CHECK_THROWS_AS(counterfactual(three, sim, A, A, "nobody"), ValidationError);
}

TEST_CASE("counterfactual_dependence") {
    SUBCASE("singleton world with both events actual: the vacuity pathology") {
        const auto single = ModelSet(0, 2, {world("only", {"a", "b", "c"})}, "only");
        const auto d = counterfactual_dependence(single, SimilarityOrder::uniform(single),
                                                 Proposition::state_at("a", 0), Proposition::state_at("c", 2), "only");
        CHECK(d.holds);
        CHECK(d.ifA == Truth::True);
        CHECK(d.ifNotA == Truth::VacuousTrue);
        CHECK(d.degenerate);
    }
    SUBCASE("not-A world still has C") {
        const auto M = ModelSet(0, 1, {world("w", {"a", "c"}), world("v", {"b", "c"})}, "w");
        const auto d = counterfactual_dependence(M, SimilarityOrder::uniform(M), Proposition::state_at("a", 0),
                                                 Proposition::state_at("c", 1), "w");
        CHECK_FALSE(d.holds);
        CHECK(d.ifNotA == Truth::False);
    }
    SUBCASE("nearest not-A world lacks C") {
        const auto M = ModelSet(0, 1, {world("w", {"a", "c"}), world("v", {"b", "d"})}, "w");
        const auto d = counterfactual_dependence(M, SimilarityOrder::uniform(M), Proposition::state_at("a", 0),
                                                 Proposition::state_at("c", 1), "w");
        CHECK(d.holds);
        CHECK(d.ifA == Truth::True);
        CHECK(d.ifNotA == Truth::True);
        CHECK_FALSE(d.degenerate);
    }
}

TEST_CASE("modal properties on random model sets") {
    Engine eng(20240601);
    for (int trial = 0; trial < 500; ++trial) {
        CAPTURE(trial);
        const auto M = random_model_set(eng, 6, 8);
        const auto sim = random_similarity(eng, M);
        const bool det = check_determinism(M).holds;
        if (check_strong_determinism(M)) CHECK(det);
        CHECK(det == (check_futuristic_determinism(M).holds && check_historical_determinism(M).holds));
        const auto A = random_proposition(eng, M);
        const auto C = random_proposition(eng, M);
        for (const auto& w : M.worlds()) {
            const auto got = counterfactual(M, sim, A, C, w.id);
            CHECK(to_string(got) == oracle::brute_force_counterfactual(M, sim, A, C, w.id));
            if (A.holds_at(w)) CHECK(got == (C.holds_at(w) ? Truth::True : Truth::False));
        }
    }
}

TEST_CASE("singleton vacuity") {
    Engine eng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto M = random_model_set(eng, 1, 8);
        auto A = random_proposition(eng, M);
        if (A.holds_at(M.worlds()[0])) A = A.negation();
        const auto C = random_proposition(eng, M);
        CHECK(counterfactual(M, SimilarityOrder::uniform(M), A, C, M.worlds()[0].id) == Truth::VacuousTrue);
    }
}

TEST_CASE("JSON loading") {
    const auto M = model_set_from_json(Json::parse(
        R"({"times":[0,1],"worlds":[{"id":"a","trajectory":{"0":"s1","1":"s2"}},{"id":"b","trajectory":{"0":"s1","1":"s3"}}],"actual":"a"})"));
    CHECK(M.size() == 2);
    CHECK(M.actual() == std::optional<std::string>("a"));
    CHECK(model_set_from_json(model_set_to_json(M)).worlds()[1].at(1) == "s3");

    CHECK_THROWS_AS(model_set_from_json(Json::parse(R"({"times":[0,1],"worlds":[{"id":"a","trajectory":{"0":"s"}}]})")),
                    ValidationError);
    CHECK_THROWS_AS(model_set_from_json(Json::parse(R"({"worlds":[]})")), ValidationError);
    CHECK_THROWS_AS(model_set_from_json(Json::parse(R"({"times":[0,0],"worlds":[{"id":"a","trajectory":{"x":"s"}}]})")),
                    ValidationError);

    const auto p = proposition_from_json(Json::parse(R"({"events":[["s2",1]],"negated":true})"));
    CHECK_FALSE(p.holds_at(M.worlds()[0]));
    CHECK(p.holds_at(M.worlds()[1]));
    CHECK_THROWS_AS(proposition_from_json(Json::parse(R"({"events":[["s9",7]]})")).validate(M), ValidationError);
    CHECK(proposition_from_json(proposition_to_json(p)).negated);

    const auto sim = similarity_from_json(Json::parse(R"({"ranks":{"a":{"a":0,"b":4},"b":{"b":0,"a":1}}})"), M);
    CHECK(sim.rank("a", "b") == 4);
    CHECK_THROWS_AS(similarity_from_json(Json::parse(R"({"ranks":{"a":{"a":0,"b":4}}})"), M), ValidationError);
}
