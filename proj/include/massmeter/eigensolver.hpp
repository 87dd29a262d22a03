#pragma once
/// Lowest eigenpairs of K x = lambda B x for sparse SPD K and B.
///
/// Shift-invert Lanczos on the operator K^{-1} B (shift 0, K is positive
/// definite once Dirichlet rows are gone) in the B inner product, with full
/// reorthogonalization. Converged Ritz pairs are locked and the iteration is
/// restarted from the remaining wanted Ritz vectors with a larger basis.

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "massmeter/error.hpp"

namespace massmeter {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenOptions {
    int count = 10;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int max_restarts = 12;
    int initial_basis = 0; // 0: chosen from count
};

struct RawEigenPair {
    double lambda = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
};

/// ||K x - lambda B x|| / (lambda ||B x||), Euclidean norms.
inline double relative_residual(const SparseMatrix& K, const SparseMatrix& B, double lambda,
                                const Eigen::VectorXd& x) {
    const Eigen::VectorXd bx = B * x;
    const double denom = std::abs(lambda) * bx.norm();
    if (denom == 0.0) return (K * x).norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return (K * x - lambda * bx).norm() / denom;
}

namespace detail {

inline Eigen::VectorXd start_vector(Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::VectorXd v(dim);
    // Top 53 bits -> [0, 1); identical across standard libraries.
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
    return v;
}

/// Orthogonalize `w` against the columns of `basis` in the B inner product
/// (two passes of classical Gram-Schmidt).
inline void b_orthogonalize(Eigen::VectorXd& w, const std::vector<Eigen::VectorXd>& basis,
                            const std::vector<Eigen::VectorXd>& b_basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < basis.size(); ++j) w -= b_basis[j].dot(w) * basis[j];
}

} // namespace detail

inline std::vector<RawEigenPair> lowest_eigenpairs(const SparseMatrix& K, const SparseMatrix& B,
                                                   const EigenOptions& opt) {
    const Eigen::Index dim = K.rows();
    if (opt.count < 1) throw PreconditionError("eigencount k must be >= 1");
    if (K.cols() != dim || B.rows() != dim || B.cols() != dim)
        throw SolverError("matrix dimensions disagree", 0.0);
    if (opt.count > dim) throw PreconditionError("eigencount exceeds number of unknowns");

    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> factor(K);
    if (factor.info() != Eigen::Success) throw SolverError("factorization of the stiffness form failed", 0.0);

    std::vector<Eigen::VectorXd> locked;
    std::vector<Eigen::VectorXd> locked_b;
    std::vector<RawEigenPair> result;

    const auto wanted_total = static_cast<std::size_t>(opt.count);
    Eigen::Index basis_size = opt.initial_basis > 0 ? opt.initial_basis : std::max(2 * opt.count + 20, 40);
    Eigen::VectorXd start = detail::start_vector(dim, opt.seed);
    double worst = 0.0;

    for (int restart = 0; restart <= opt.max_restarts && result.size() < wanted_total; ++restart) {
        const Eigen::Index free_dim = dim - static_cast<Eigen::Index>(locked.size());
        const Eigen::Index m = std::min(basis_size, free_dim);
        const auto wanted = static_cast<Eigen::Index>(wanted_total - result.size());

        std::vector<Eigen::VectorXd> q;
        std::vector<Eigen::VectorXd> bq;
        q.reserve(static_cast<std::size_t>(m));
        bq.reserve(static_cast<std::size_t>(m));
        Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd beta = Eigen::VectorXd::Zero(m);

        Eigen::VectorXd v = start;
        detail::b_orthogonalize(v, locked, locked_b);
        double vn = std::sqrt(v.dot(B * v));
        if (!(vn > 0.0)) throw SolverError("degenerate Lanczos start vector", 0.0);
        v /= vn;

        Eigen::Index steps = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            q.push_back(v);
            bq.push_back(B * v);
            Eigen::VectorXd w = factor.solve(bq.back());
            alpha[j] = bq.back().dot(w);
            detail::b_orthogonalize(w, locked, locked_b);
            detail::b_orthogonalize(w, q, bq);
            ++steps;
            const double bn = std::sqrt(std::max(0.0, w.dot(B * w)));
            if (j + 1 == m) {
                beta[j] = bn;
                break;
            }
            if (bn < 1e-13 * std::abs(alpha[j])) {
                // Invariant subspace found.
                beta[j] = 0.0;
                break;
            }
            beta[j] = bn;
            v = w / bn;
        }

        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
        for (Eigen::Index j = 0; j < steps; ++j) {
            T(j, j) = alpha[j];
            if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
        // Largest theta = 1 / lambda are the lowest lambda.
        const Eigen::Index take = std::min<Eigen::Index>(wanted, steps);
        std::vector<RawEigenPair> ritz;
        for (Eigen::Index r = 0; r < take; ++r) {
            const Eigen::Index col = steps - 1 - r;
            const double theta = tri.eigenvalues()[col];
            Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
            for (Eigen::Index j = 0; j < steps; ++j) y += tri.eigenvectors()(j, col) * q[static_cast<std::size_t>(j)];
            RawEigenPair p;
            p.lambda = 1.0 / theta;
            const double yn = std::sqrt(y.dot(B * y));
            p.vector = y / yn;
            p.residual = relative_residual(K, B, p.lambda, p.vector);
            ritz.push_back(std::move(p));
        }

        // Lock the leading run of converged pairs; keep order so the lowest
        // eigenvalues are always locked first.
        std::size_t converged = 0;
        while (converged < ritz.size() && ritz[converged].residual <= opt.tol) ++converged;
        for (std::size_t r = 0; r < converged; ++r) {
            locked.push_back(ritz[r].vector);
            locked_b.push_back(B * ritz[r].vector);
            result.push_back(ritz[r]);
        }
        if (result.size() >= wanted_total) break;

        worst = 0.0;
        start = Eigen::VectorXd::Zero(dim);
        for (std::size_t r = converged; r < ritz.size(); ++r) {
            start += ritz[r].vector;
            worst = std::max(worst, ritz[r].residual);
        }
        if (start.norm() == 0.0) start = detail::start_vector(dim, opt.seed + static_cast<std::uint64_t>(restart) + 1);
        basis_size = std::min<Eigen::Index>(2 * basis_size, free_dim);
    }

    if (result.size() < wanted_total) {
        std::ostringstream os;
        os << "eigensolver did not converge: " << result.size() << " of " << wanted_total
           << " pairs reached tol " << opt.tol << ", worst residual " << worst;
        throw SolverError(os.str(), worst);
    }

    std::stable_sort(result.begin(), result.end(),
                     [](const RawEigenPair& a, const RawEigenPair& b) { return a.lambda < b.lambda; });
    result.resize(wanted_total);
    return result;
}

} // namespace massmeter
