// block_system.hpp: the master-equation generator in block-tridiagonal form.
// Coefficients (c_n)_m = <X_n^m> = rho_{mn} are grouped into vectors c_n indexed by m;
// the equation of motion couples c_n only to c_{n-1} and c_{n+1}.
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "spinline/bath.hpp"
#include "spinline/spin_model.hpp"

namespace spinline {

using Complex = std::complex<double>;

// Q_{n,n-1} = sub[n], Q_{n,n} = diag[n], Q_{n,n+1} = sup[n]; blocks are dim x dim and
// each is tridiagonal in m. sub.front() and sup.back() are empty (no neighbor there).
struct BlockSystem {
    int dim = 0; // block side; for the spin generator, 2S+1
    std::vector<Eigen::MatrixXcd> sub, diag, sup;

    int num_blocks() const { return static_cast<int>(diag.size()); }
};

// Coefficient stack {c_n}: one dim-sized complex vector per block row.
struct CoefficientVectorSet {
    std::vector<Eigen::VectorXcd> c;

    int num_blocks() const { return static_cast<int>(c.size()); }

    // Sum over the diagonal sector (c_n)_n = rho_{nn}. Valid when c has the full
    // square layout (block count equals the vector dimension).
    Complex trace() const;

    // max |(c_n)_m - conj((c_m)_n)|; zero when c represents a Hermitian rho.
    double hermiticity_defect() const;

    double norm() const;

    static CoefficientVectorSet zero(int num_blocks, int dim);
};

// Full generator: free precession i Delta_{nm}, transverse-field ladder terms from
// B_plus/B_minus, and the bath relaxation coefficients. The static transverse
// components of model.field enter through the same B terms; extra_bplus/extra_bminus
// add a drive on top (pass 0 for the drive-free generator).
BlockSystem build_blocks(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
                         Complex extra_bplus = 0.0, Complex extra_bminus = 0.0);

// c' = Q c by block matrix-vector products.
CoefficientVectorSet apply_generator(const BlockSystem& blocks, const CoefficientVectorSet& c);

// The unit-amplitude transverse drive generator applied directly: the B_plus = B_minus = 1
// ladder terms acting on c, without materializing their blocks. O(dim^2) work.
CoefficientVectorSet apply_transverse_drive(const SpinModel& model, const CoefficientVectorSet& c);

// When the static field is longitudinal, Q conserves the sector k = n - m and the rows
// with m = n - k form a closed chain: a tridiagonal system in n alone. Returned as a
// BlockSystem with 1x1 blocks so the same elimination code solves it.
// Chain entry j corresponds to block n = first_block_of_sector(k) + j.
BlockSystem extract_sector_chain(const BlockSystem& blocks, int k);

// The same chain assembled directly from the coefficient functions, without
// materializing the full block system. O(dim) memory. Requires model.longitudinal().
BlockSystem build_sector_chain(const SpinModel& model, const CouplingSpec& cpl,
                               const BathSpec& bath, int k);

int first_block_of_sector(int dim, int k);
int sector_chain_length(int dim, int k);

// Largest |(c_n)_m| outside the listed sectors k = n - m; measures sector confinement.
double off_sector_magnitude(const CoefficientVectorSet& c, const std::vector<int>& sectors);

// Dense (num_blocks*dim)^2 matrix with flat index (n_idx, m_idx) -> n_idx*dim + m_idx.
// Diagnostic and small-system use only.
Eigen::MatrixXcd to_dense(const BlockSystem& blocks);

} // namespace spinline
