#include "strongdet/matrix_json.hpp"

#include <regex>

namespace strongdet {

Json matrix_to_json(const CMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ir = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ir.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    Json out;
    out["dim"] = m.rows();
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

CMatrix matrix_from_json(const Json& j) {
    try {
        const auto n = j.at("dim").get<Index>();
        const Json& re = j.at("re");
        const Json& im = j.at("im");
        if (n < 1 || static_cast<Index>(re.size()) != n || static_cast<Index>(im.size()) != n)
            throw ValidationError("matrix JSON: row count does not match dim");
        CMatrix m(n, n);
        for (Index i = 0; i < n; ++i) {
            if (static_cast<Index>(re[i].size()) != n || static_cast<Index>(im[i].size()) != n)
                throw ValidationError("matrix JSON: column count does not match dim");
            for (Index k = 0; k < n; ++k) m(i, k) = Complex(re[i][k].get<double>(), im[i][k].get<double>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("matrix JSON: ") + e.what());
    }
}

Json vector_to_json(const CVector& v) {
    Json re = Json::array();
    Json im = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    Json out;
    out["dim"] = v.size();
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

CVector vector_from_json(const Json& j) {
    try {
        const auto n = j.at("dim").get<Index>();
        const Json& re = j.at("re");
        const Json& im = j.at("im");
        if (n < 1 || static_cast<Index>(re.size()) != n || static_cast<Index>(im.size()) != n)
            throw ValidationError("vector JSON: length does not match dim");
        CVector v(n);
        for (Index i = 0; i < n; ++i) v(i) = Complex(re[i].get<double>(), im[i].get<double>());
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("vector JSON: ") + e.what());
    }
}

Json subspace_to_json(const Subspace& S, bool symbolic) {
    Json out;
    out["ambientDim"] = S.ambient_dim();
    out["k"] = S.dim();
    if (S.family()) out["family"] = *S.family();
    if (symbolic && S.family()) return out;
    Json basis = Json::array();
    for (Index c = 0; c < S.dim(); ++c) basis.push_back(vector_to_json(S.basis().col(c)));
    out["basis"] = std::move(basis);
    return out;
}

Subspace subspace_from_family(const std::string& family, const Hamiltonian* H) {
    static const std::regex first(R"(first-(\d+)-of-(\d+))");
    static const std::regex block(R"(block-(\d+)-(\d+)-of-(\d+))");
    static const std::regex lowest(R"(lowest-(\d+)-eigenvectors-of-(\d+))");
    std::smatch m;
    if (std::regex_match(family, m, first))
        return Subspace::first_k(std::stol(m[1]), std::stol(m[2]));
    if (std::regex_match(family, m, block))
        return Subspace::basis_block(std::stol(m[1]), std::stol(m[2]), std::stol(m[3]));
    if (std::regex_match(family, m, lowest)) {
        if (H == nullptr) throw ValidationError("family '" + family + "' needs a Hamiltonian");
        if (H->dim() != std::stol(m[2])) throw ValidationError("family '" + family + "': dimension mismatch");
        return Subspace::lowest_eigenvectors(*H, std::stol(m[1]));
    }
    throw ValidationError("unknown subspace family '" + family + "'");
}

Subspace subspace_from_json(const Json& j, const Hamiltonian* H) {
    try {
        if (j.contains("basis")) {
            const Json& cols = j.at("basis");
            const auto n = j.at("ambientDim").get<Index>();
            if (cols.empty()) throw ValidationError("subspace JSON: empty basis");
            CMatrix b(n, static_cast<Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) {
                CVector v = vector_from_json(cols[c]);
                if (v.size() != n) throw ValidationError("subspace JSON: basis vector has wrong dim");
                b.col(static_cast<Index>(c)) = v;
            }
            std::optional<std::string> family;
            if (j.contains("family")) family = j.at("family").get<std::string>();
            return Subspace(std::move(b), std::move(family));
        }
        if (j.contains("family")) return subspace_from_family(j.at("family").get<std::string>(), H);
        throw ValidationError("subspace JSON needs 'basis' or 'family'");
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("subspace JSON: ") + e.what());
    }
}

}  // namespace strongdet
