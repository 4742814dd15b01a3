#include <doctest.h>

#include <cmath>

#include "strongdet/laws.hpp"
#include "strongdet/rng.hpp"

using namespace strongdet;

TEST_CASE("theory constructors") {
    const auto H = random_hamiltonian(4, 1);
    const auto S = Subspace::first_k(2, 4);
    const auto M = mentaculus(H, S);
    CHECK(M.name == "everettian-mentaculus");
    CHECK(M.statistics.has_value());
    CHECK(M.is_schrodinger());
    const auto W = wentaculus(H, S);
    CHECK(W.name == "everettian-wentaculus");
    CHECK_FALSE(W.statistics.has_value());
    CHECK(initial_projection(S).purity() == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(mentaculus(H, Subspace::first_k(2, 3)), ValidationError);
    CHECK_THROWS_AS(wentaculus(H, Subspace::first_k(2, 5)), ValidationError);
    CHECK_THROWS_AS(make_theory("bad", SchrodingerFlow{H}, PastHypothesis{S}, std::nullopt), ValidationError);
    CHECK_THROWS_AS(make_theory("bad", VonNeumannFlow{H}, InitialProjection{S}, StatisticalPostulate{S}),
                    ValidationError);
    CHECK_THROWS_AS(make_theory("bad", SchrodingerFlow{H}, PastHypothesis{S},
                                StatisticalPostulate{Subspace::basis_block(2, 2, 4)}),
                    ValidationError);
}

TEST_CASE("initial_projection") {
    CMatrix e00 = CMatrix::Zero(2, 2);
    e00(0, 0) = 1.0;
    CHECK((initial_projection(Subspace::first_k(1, 2)).entries() - e00).norm() < 1e-12);
    CHECK((initial_projection(Subspace::first_k(2, 2)).entries() - CMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
    CHECK(initial_projection(Subspace::first_k(4, 4)).distance_max(DensityMatrix::maximally_mixed(4)) < 1e-12);

    CMatrix cols = CMatrix::Zero(3, 2);
    cols(0, 0) = cols(1, 0) = 1.0 / std::sqrt(2.0);
    cols(2, 1) = 1.0;
    CMatrix expected(3, 3);
    expected << 0.5, 0.5, 0, 0.5, 0.5, 0, 0, 0, 1;
    expected /= 2.0;
    CHECK((initial_projection(Subspace(cols)).entries() - expected).cwiseAbs().maxCoeff() < 1e-12);

    for (Index k = 1; k <= 16; ++k) {
        const auto W = initial_projection(Subspace::first_k(k, 16));
        CHECK(std::abs(W.purity() * static_cast<double>(k) - 1.0) < 1e-12);
        CHECK(std::abs(W.entries().trace() - Complex(1.0, 0.0)) < 1e-12);
    }
}

TEST_CASE("sample_statistical_postulate") {
    const auto S1 = Subspace::basis_block(2, 1, 5);
    for (std::uint64_t seed : {0ULL, 1ULL, 999ULL})
        CHECK(sample_statistical_postulate({S1}, seed).physically_equals(StateVector::basis(5, 2)));

    const auto S = Subspace::lowest_eigenvectors(random_hamiltonian(7, 3), 3);
    const CMatrix P = projector(S);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto psi = sample_statistical_postulate({S}, seed);
        CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-12);
        CHECK(((CMatrix::Identity(7, 7) - P) * psi.amplitudes()).norm() < 1e-9);
    }
    CHECK((sample_statistical_postulate({S}, 5).amplitudes() - sample_statistical_postulate({S}, 5).amplitudes())
              .norm() == 0.0);
}

TEST_CASE("is_strongly_deterministic") {
    const auto H = random_hamiltonian(4, 2);
    CHECK(is_strongly_deterministic(wentaculus(H, Subspace::first_k(2, 4))).strongly_deterministic);

    const auto v = is_strongly_deterministic(mentaculus(H, Subspace::first_k(2, 4)));
    CHECK_FALSE(v.strongly_deterministic);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->first.physically_equals(StateVector::basis(4, 0)));
    CHECK(v.witness->second.physically_equals(StateVector::basis(4, 1)));
    CHECK(std::abs(v.witness->first.amplitudes().dot(v.witness->second.amplitudes())) < 1.0 - 1e-6);

    const auto one = is_strongly_deterministic(mentaculus(H, Subspace::first_k(1, 4)));
    CHECK(one.strongly_deterministic);
    CHECK_FALSE(one.note.empty());

    const auto pure = make_theory("pure", SchrodingerFlow{H}, ExactPureState{StateVector::basis(4, 3)}, std::nullopt);
    CHECK(is_strongly_deterministic(pure).strongly_deterministic);
}

TEST_CASE("is_deterministic") {
    const auto H = random_hamiltonian(6, 8);
    const auto S = Subspace::first_k(3, 6);
    std::vector<double> times;
    for (int i = 0; i < 20; ++i) times.push_back(0.37 * i);

    const auto W = wentaculus(H, S);
    CHECK(is_deterministic(W, {initial_projection(S)}, times).deterministic);

    const auto M = mentaculus(H, S);
    std::vector<QuantumState> probes;
    for (std::uint64_t i = 0; i < 5; ++i) probes.emplace_back(sample_statistical_postulate(*M.statistics, i));
    const auto cert = is_deterministic(M, probes, times);
    CHECK(cert.deterministic);
    CHECK(cert.pairs_checked == 10);

    const QuantumState p = sample_statistical_postulate(*M.statistics, 42);
    const auto a = trajectory(M, p, times);
    const auto b = trajectory(M, p, times);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(states_agree(a[i], b[i], 1e-10));
    CHECK(is_deterministic(M, {p, p}, times, 1e-10).deterministic);

    CHECK_THROWS_AS(is_deterministic(M, {StateVector::basis(6, 5)}, times), ValidationError);
    CHECK_THROWS_AS(is_deterministic(W, {DensityMatrix::maximally_mixed(6)}, times), ValidationError);
}

TEST_CASE("strong_prediction") {
    const auto H = random_hamiltonian(4, 9);
    const auto S = Subspace::first_k(2, 4);
    const auto W = wentaculus(H, S);

    const auto at0 = strong_prediction(W, 0.0);
    REQUIRE(std::holds_alternative<DensityMatrix>(at0));
    CHECK(std::get<DensityMatrix>(at0).distance_max(initial_projection(S)) < 1e-12);

    const auto at1 = strong_prediction(W, 1.0);
    REQUIRE(std::holds_alternative<DensityMatrix>(at1));
    const CMatrix U = make_propagator(H, 1.0).entries();
    const CMatrix expected = U * initial_projection(S).entries() * U.adjoint();
    CHECK((std::get<DensityMatrix>(at1).entries() - expected).cwiseAbs().maxCoeff() < 1e-12);

    for (double t : {0.0, 2.5}) {
        const auto refused = strong_prediction(mentaculus(H, S), t);
        REQUIRE(std::holds_alternative<PredictionRefusal>(refused));
        CHECK(std::get<PredictionRefusal>(refused).missing_input == "initial wave function");
    }
}

TEST_CASE("description_length") {
    const auto named = description_length(InitialProjection{Subspace::first_k(2, 16)});
    CHECK(named >= 10);
    CHECK(named < 100);

    Engine eng(3);
    const auto pure = description_length(ExactPureState{StateVector::normalized(complex_normal_vector(eng, 16))});
    CHECK(pure >= 100);
    CHECK(pure > named);

    std::vector<double> xs(60);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 0.1 * static_cast<double>(i) + 1e-3;
    CHECK(description_length(ExactMicrostate::from_doubles(xs)) >= 480);

    for (Index n = 4; n <= 32; n *= 2) {
        Engine e(n);
        CHECK(description_length(InitialProjection{Subspace::first_k(2, n)}) <
              description_length(ExactPureState{StateVector::normalized(complex_normal_vector(e, n))}));
    }
}

TEST_CASE("theory JSON round trip") {
    const auto H = random_hamiltonian(3, 4);
    for (const auto& T : {mentaculus(H, Subspace::first_k(2, 3)), wentaculus(H, Subspace::first_k(1, 3))}) {
        const Json j = theory_to_json(T);
        const Theory back = theory_from_json(j);
        CHECK(back.name == T.name);
        CHECK(back.is_schrodinger() == T.is_schrodinger());
        CHECK((hamiltonian_of(back.dynamics).entries() - H.entries()).norm() == 0.0);
        CHECK(theory_to_json(back).dump() == j.dump());
    }
    CHECK_THROWS_AS(theory_from_json(Json::parse(R"({"name":"x"})")), ValidationError);
}
