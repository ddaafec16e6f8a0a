// mcf_solver.hpp: direct solution of (z I + Q) c = f for block-tridiagonal Q by
// one-directional block elimination (matrix continued fractions), plus the
// stationary state of Q via trace-row replacement.
#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinline/block_system.hpp"

namespace spinline {

// Elimination order. Descending starts at the last block and substitutes upward
// with c_n = Stilde_n c_{n-1} + a_n; Ascending mirrors it. Both must agree.
enum class SweepDirection { Descending, Ascending };

// Which path computes a result that admits both: the full block system, or the
// decoupled sector chains available when the static field is longitudinal.
enum class SolveRoute { Auto, FullBlock, SectorChains };

struct SolverError : std::runtime_error {
    int block_index; // storage index of the offending pivot block
    SolverError(const std::string& what, int block) : std::runtime_error(what), block_index(block) {}
};

// One frequency-domain system: (shift I + Q) c = source.
struct ShiftedSystem {
    std::shared_ptr<const BlockSystem> blocks;
    Complex shift = 0.0;
    std::vector<Eigen::VectorXcd> source;
};

// Block elimination with partial-pivot LU per pivot block. Pivot blocks whose LU
// diagonal growth exceeds 1e12 (or contains an exact zero) raise SolverError.
std::vector<Eigen::VectorXcd> solve_shifted(const BlockSystem& blocks, Complex shift,
                                            const std::vector<Eigen::VectorXcd>& source,
                                            SweepDirection dir = SweepDirection::Descending);

std::vector<Eigen::VectorXcd> solve_shifted(const ShiftedSystem& sys,
                                            SweepDirection dir = SweepDirection::Descending);

// Unique c with Q c = 0 and trace 1. The scalar equation for the largest
// equilibrium population is replaced by a unit pin on that component; the solve
// then yields the null vector scaled so that component is 1, and the trace
// normalization rescales it. Requires lambda > 0 (otherwise every diagonal
// density matrix is stationary and the state is not unique).
CoefficientVectorSet stationary_state(const SpinModel& model, const CouplingSpec& cpl,
                                      const BathSpec& bath, SolveRoute route = SolveRoute::Auto);

} // namespace spinline
