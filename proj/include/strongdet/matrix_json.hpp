#pragma once

// Shared JSON schema for matrices and vectors:
//   matrix: {"dim": n, "re": [[...], ...], "im": [[...], ...]}  (row-major)
//   vector: {"dim": n, "re": [...], "im": [...]}

#include <nlohmann/json.hpp>

#include "strongdet/quantum_core.hpp"

namespace strongdet {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

/// {"ambientDim": n, "k": k, "family": name?, "basis": [vector, ...]}.
/// With `symbolic` and a named family, the basis is omitted.
Json subspace_to_json(const Subspace& S, bool symbolic = false);
/// Reconstructs "first-k-of-n" and "block-o-k-of-n" families from their names;
/// other subspaces need an explicit basis. `H` resolves "lowest-k-eigenvectors-of-n".
Subspace subspace_from_json(const Json& j, const Hamiltonian* H = nullptr);

/// Parses a family name such as "first-2-of-16".
Subspace subspace_from_family(const std::string& family, const Hamiltonian* H = nullptr);

}  // namespace strongdet
