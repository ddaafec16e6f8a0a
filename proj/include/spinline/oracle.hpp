// oracle.hpp: dense reference construction of the full generator on the flattened
// (n, m) index, wired independently of the block assembly. Shares only the scalar
// coefficient functions (ladder factors, energies, rates, coupling elements).
// Small spins only; every result here exists to cross-check the production path.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "spinline/bath.hpp"
#include "spinline/block_system.hpp"
#include "spinline/spin_model.hpp"

namespace spinline {

// Generator as one dense matrix over the flat index (n, m) -> (n + S)(2S + 1) + (m + S).
struct DenseLiouvillian {
    int dim = 0; // 2S+1; the matrix is dim^2 x dim^2
    Eigen::MatrixXcd q;

    long flat(int n_idx, int m_idx) const { return static_cast<long>(n_idx) * dim + m_idx; }
};

// Refuses spins above S = 8: the dense matrix grows as (2S+1)^4.
DenseLiouvillian build_dense(const SpinModel& model, const CouplingSpec& cpl,
                             const BathSpec& bath, Complex extra_bplus = 0.0,
                             Complex extra_bminus = 0.0);

// Dense S_x, S_y, S_z in the level basis.
struct SpinMatrices {
    Eigen::MatrixXcd sx, sy, sz;
};
SpinMatrices spin_matrices(const SpinModel& model);

// -i [H, .] built purely from dense matrix algebra with H = -D Sz^2 - B.S; the
// unitary part of the generator without any level-basis bookkeeping.
Eigen::MatrixXcd unitary_superoperator(const SpinModel& model);

// Equilibrium from the dense generator: one row replaced by the trace row, direct solve.
Eigen::VectorXcd oracle_stationary(const SpinModel& model, const CouplingSpec& cpl,
                                   const BathSpec& bath);

// chi(omega) from a dense solve of the linearized driven system on the flat index.
Complex oracle_susceptibility(const SpinModel& model, const CouplingSpec& cpl,
                              const BathSpec& bath, double omega);

// Number of singular values of q below tol * largest.
int null_space_dimension(const Eigen::MatrixXcd& q, double tol = 1e-10);

// Pointwise comparison of two susceptibility traces on the same grid.
struct ComparisonReport {
    double max_rel = 0.0;
    double mean_rel = 0.0;
    double omega_at_max = 0.0;
};
ComparisonReport compare(const std::vector<double>& omega, const std::vector<Complex>& a,
                         const std::vector<Complex>& b);

} // namespace spinline
