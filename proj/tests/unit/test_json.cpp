#include <doctest.h>

#include "strongdet/laws.hpp"
#include "strongdet/matrix_json.hpp"

using namespace strongdet;

TEST_CASE("matrix JSON round trip is exact") {
    const CMatrix m = random_hamiltonian(5, 12).entries();
    CHECK(matrix_from_json(matrix_to_json(m)) == m);
    const CVector v = m.col(2);
    CHECK(vector_from_json(vector_to_json(v)) == v);
    const Json j = matrix_to_json(m);
    CHECK(j.at("dim") == 5);
    CHECK(j.at("re").size() == 5);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dim":2,"re":[[1,0]],"im":[[0,0]]})")), ValidationError);
}

TEST_CASE("subspace families") {
    CHECK(subspace_from_family("first-3-of-8").dim() == 3);
    CHECK(subspace_from_family("block-2-3-of-8").residual(CVector::Unit(8, 4)) < 1e-12);
    const auto H = random_hamiltonian(6, 2);
    const auto low = subspace_from_family("lowest-2-eigenvectors-of-6", &H);
    CHECK(low.dim() == 2);
    CHECK_THROWS_AS(subspace_from_family("lowest-2-eigenvectors-of-6"), ValidationError);
    CHECK_THROWS_AS(subspace_from_family("first-9-of-8"), ValidationError);
    CHECK_THROWS_AS(subspace_from_family("random"), ValidationError);

    const auto S = Subspace::first_k(2, 16);
    const Json sym = subspace_to_json(S, true);
    CHECK(sym.at("family") == "first-2-of-16");
    CHECK_FALSE(sym.contains("basis"));
    CHECK(subspace_from_json(sym).basis() == S.basis());
    const auto back = subspace_from_json(subspace_to_json(low, false));
    CHECK((projector(back) - projector(low)).norm() < 1e-12);
}

TEST_CASE("boundary JSON") {
    const auto micro = ExactMicrostate::from_doubles({1.0, -2.5, 3.25});
    const auto back = boundary_from_json(boundary_to_json(micro));
    REQUIRE(std::holds_alternative<ExactMicrostate>(back));
    CHECK(std::get<ExactMicrostate>(back).blob == micro.blob);

    const auto psi = StateVector::normalized(CVector::Ones(3));
    const auto pure = boundary_from_json(boundary_to_json(ExactPureState{psi}));
    CHECK(std::get<ExactPureState>(pure).psi.amplitudes() == psi.amplitudes());
    CHECK_THROWS_AS(boundary_from_json(Json::parse(R"({"type":"nonsense"})")), ValidationError);
}
