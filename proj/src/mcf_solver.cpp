#include "spinline/mcf_solver.hpp"

#include <algorithm>
#include <cmath>

namespace spinline {

namespace {

constexpr double kPivotGrowthLimit = 1e12;

Eigen::PartialPivLU<Eigen::MatrixXcd> factor_pivot(Eigen::MatrixXcd pivot, int block) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(std::move(pivot));
    const Eigen::VectorXd mag = lu.matrixLU().diagonal().cwiseAbs();
    const double lo = mag.minCoeff();
    const double hi = mag.maxCoeff();
    if (lo == 0.0)
        throw SolverError("solve_shifted: singular pivot block " + std::to_string(block), block);
    if (hi / lo > kPivotGrowthLimit)
        throw SolverError("solve_shifted: pivot growth " + std::to_string(hi / lo) +
                              " beyond limit at block " + std::to_string(block),
                          block);
    return lu;
}

void check_sizes(const BlockSystem& blocks, const std::vector<Eigen::VectorXcd>& source) {
    const int nb = blocks.num_blocks();
    if (nb == 0) throw std::invalid_argument("solve_shifted: empty system");
    if (static_cast<int>(source.size()) != nb)
        throw std::invalid_argument("solve_shifted: source block count mismatch");
    for (const auto& v : source)
        if (v.size() != blocks.dim)
            throw std::invalid_argument("solve_shifted: source dimension mismatch");
}

} // namespace

std::vector<Eigen::VectorXcd> solve_shifted(const BlockSystem& blocks, Complex shift,
                                            const std::vector<Eigen::VectorXcd>& source,
                                            SweepDirection dir) {
    check_sizes(blocks, source);
    const int nb = blocks.num_blocks();
    const int dim = blocks.dim;
    const Eigen::MatrixXcd zi = shift * Eigen::MatrixXcd::Identity(dim, dim);
    std::vector<Eigen::VectorXcd> c(static_cast<std::size_t>(nb));
    std::vector<Eigen::MatrixXcd> prop(static_cast<std::size_t>(nb));
    std::vector<Eigen::VectorXcd> part(static_cast<std::size_t>(nb));

    if (dir == SweepDirection::Descending) {
        // Eliminate from the top: c_n = prop_n c_{n-1} + part_n.
        for (int n = nb - 1; n >= 0; --n) {
            const auto ns = static_cast<std::size_t>(n);
            Eigen::MatrixXcd pivot = blocks.diag[ns] + zi;
            Eigen::VectorXcd rhs = source[ns];
            if (n + 1 < nb) {
                pivot.noalias() += blocks.sup[ns] * prop[ns + 1];
                rhs.noalias() -= blocks.sup[ns] * part[ns + 1];
            }
            const auto lu = factor_pivot(std::move(pivot), n);
            part[ns] = lu.solve(rhs);
            if (n > 0) prop[ns] = -lu.solve(blocks.sub[ns]);
        }
        c[0] = part[0];
        for (int n = 1; n < nb; ++n) {
            const auto ns = static_cast<std::size_t>(n);
            c[ns] = prop[ns] * c[ns - 1] + part[ns];
        }
    } else {
        // Eliminate from the bottom: c_n = prop_n c_{n+1} + part_n.
        for (int n = 0; n < nb; ++n) {
            const auto ns = static_cast<std::size_t>(n);
            Eigen::MatrixXcd pivot = blocks.diag[ns] + zi;
            Eigen::VectorXcd rhs = source[ns];
            if (n > 0) {
                pivot.noalias() += blocks.sub[ns] * prop[ns - 1];
                rhs.noalias() -= blocks.sub[ns] * part[ns - 1];
            }
            const auto lu = factor_pivot(std::move(pivot), n);
            part[ns] = lu.solve(rhs);
            if (n + 1 < nb) prop[ns] = -lu.solve(blocks.sup[ns]);
        }
        c[static_cast<std::size_t>(nb - 1)] = part[static_cast<std::size_t>(nb - 1)];
        for (int n = nb - 2; n >= 0; --n) {
            const auto ns = static_cast<std::size_t>(n);
            c[ns] = prop[ns] * c[ns + 1] + part[ns];
        }
    }
    return c;
}

std::vector<Eigen::VectorXcd> solve_shifted(const ShiftedSystem& sys, SweepDirection dir) {
    if (!sys.blocks) throw std::invalid_argument("solve_shifted: null block system");
    return solve_shifted(*sys.blocks, sys.shift, sys.source, dir);
}

namespace {

// Replaces the scalar equation for component (pin, pin) of block pin with the unit
// pin c = 1, solves, and rescales to unit trace. The pinned row lies inside one block,
// so the system stays block-tridiagonal.
CoefficientVectorSet stationary_full(const SpinModel& model, const CouplingSpec& cpl,
                                     const BathSpec& bath, int pin) {
    BlockSystem blocks = build_blocks(model, cpl, bath);
    const auto ps = static_cast<std::size_t>(pin);
    if (blocks.sub[ps].size() > 0) blocks.sub[ps].row(pin).setZero();
    if (blocks.sup[ps].size() > 0) blocks.sup[ps].row(pin).setZero();
    blocks.diag[ps].row(pin).setZero();
    blocks.diag[ps](pin, pin) = 1.0;

    std::vector<Eigen::VectorXcd> rhs(static_cast<std::size_t>(blocks.num_blocks()),
                                      Eigen::VectorXcd::Zero(blocks.dim));
    rhs[ps](pin) = 1.0;
    auto u = solve_shifted(blocks, 0.0, rhs);

    CoefficientVectorSet out;
    out.c = std::move(u);
    const Complex tr = out.trace();
    if (std::abs(tr) < 1e-300)
        throw SolverError("stationary_state: traceless null vector", pin);
    for (auto& v : out.c) v /= tr;
    return out;
}

// Longitudinal case: the populations close on the diagonal sector chain.
CoefficientVectorSet stationary_sector(const SpinModel& model, const CouplingSpec& cpl,
                                       const BathSpec& bath, int pin) {
    // The k = 0 chain is a birth-death rate matrix whose gains satisfy
    // detailed balance, so the stationary populations follow from the
    // rate-ratio recurrence anchored at the pinned level. Elimination at
    // zero shift sheds digits when the rates span many decades; the
    // recurrence stays at machine precision.
    const BlockSystem chain = build_sector_chain(model, cpl, bath, 0);
    const int len = chain.num_blocks();
    std::vector<double> p(static_cast<std::size_t>(len), 0.0);
    p[static_cast<std::size_t>(pin)] = 1.0;
    for (int j = pin; j + 1 < len; ++j) {
        const double up = chain.sub[static_cast<std::size_t>(j + 1)](0, 0).real();
        const double down = chain.sup[static_cast<std::size_t>(j)](0, 0).real();
        if (!(down > 0.0))
            throw SolverError("stationary_state: levels " + std::to_string(j) + " and " +
                                  std::to_string(j + 1) + " are not rate-connected",
                              j);
        p[static_cast<std::size_t>(j + 1)] = p[static_cast<std::size_t>(j)] * (up / down);
    }
    for (int j = pin; j > 0; --j) {
        const double down = chain.sup[static_cast<std::size_t>(j - 1)](0, 0).real();
        const double up = chain.sub[static_cast<std::size_t>(j)](0, 0).real();
        if (!(up > 0.0))
            throw SolverError("stationary_state: levels " + std::to_string(j - 1) + " and " +
                                  std::to_string(j) + " are not rate-connected",
                              j - 1);
        p[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] * (down / up);
    }

    double tr = 0.0;
    for (double w : p) tr += w;
    CoefficientVectorSet out = CoefficientVectorSet::zero(model.dim(), model.dim());
    for (int n = 0; n < model.dim(); ++n)
        out.c[static_cast<std::size_t>(n)](n) = p[static_cast<std::size_t>(n)] / tr;
    return out;
}

} // namespace

CoefficientVectorSet stationary_state(const SpinModel& model, const CouplingSpec& cpl,
                                      const BathSpec& bath, SolveRoute route) {
    if (bath.lambda <= 0.0)
        throw std::invalid_argument(
            "stationary_state: lambda must be > 0 for a unique stationary state");

    // Pin the level with the largest equilibrium population; ties go to larger m.
    int pin = 0;
    double best = model.level_energy(model.level_m(0));
    for (int i = 1; i < model.dim(); ++i) {
        const double e = model.level_energy(model.level_m(i));
        if (e <= best) { best = e; pin = i; }
    }

    if (route == SolveRoute::Auto)
        route = model.longitudinal() ? SolveRoute::SectorChains : SolveRoute::FullBlock;
    if (route == SolveRoute::SectorChains) {
        if (!model.longitudinal())
            throw std::invalid_argument(
                "stationary_state: sector route requires a longitudinal static field");
        return stationary_sector(model, cpl, bath, pin);
    }
    return stationary_full(model, cpl, bath, pin);
}

} // namespace spinline
