#include "oracles.hpp"

#include <cmath>
#include <complex>

namespace oracle {

Eigen::MatrixXcd taylor_propagator(const Eigen::MatrixXcd& H, double t) {
    const Eigen::Index n = H.rows();
    Eigen::MatrixXcd A = std::complex<double>(0.0, -t) * H;
    // scale until ||A|| <= 1/2, then square back up
    const double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
    A /= std::pow(2.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = (term * A / static_cast<double>(k)).eval();
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
    return sum;
}

Eigen::MatrixXcd pauli_x_rotation(double theta) {
    Eigen::MatrixXcd U(2, 2);
    const std::complex<double> c = std::cos(theta);
    const std::complex<double> s(0.0, -std::sin(theta));
    U << c, s, s, c;
    return U;
}

std::string brute_force_counterfactual(const strongdet::modal::ModelSet& M,
                                       const strongdet::modal::SimilarityOrder& sim,
                                       const strongdet::modal::Proposition& A,
                                       const strongdet::modal::Proposition& C, const std::string& world) {
    bool any_a = false;
    for (const auto& w : M.worlds()) any_a = any_a || A.holds_at(w);
    if (!any_a) return "vacuous-true";
    for (const auto& u : M.worlds()) {
        if (!(A.holds_at(u) && C.holds_at(u))) continue;
        bool closer_than_all_counter = true;
        for (const auto& v : M.worlds())
            if (A.holds_at(v) && !C.holds_at(v) && !(sim.rank(world, u.id) < sim.rank(world, v.id)))
                closer_than_all_counter = false;
        if (closer_than_all_counter) return "true";
    }
    return "false";
}

}  // namespace oracle
