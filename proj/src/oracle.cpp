#include "spinline/oracle.hpp"

#include <stdexcept>

namespace spinline {

DenseLiouvillian build_dense(const SpinModel& model, const CouplingSpec& cpl,
                             const BathSpec& bath, Complex extra_bplus, Complex extra_bminus) {
    if (model.spin > 8.0)
        throw std::invalid_argument("build_dense: refusing S > 8 (dense matrix too large)");
    const int dim = model.dim();
    const long size = static_cast<long>(dim) * dim;
    const Complex bplus = Complex(model.field[0], model.field[1]) + extra_bplus;
    const Complex bminus = Complex(model.field[0], -model.field[1]) + extra_bminus;
    const Complex ihalf(0.0, 0.5);
    const CouplingElements elems = coupling_elements(model, cpl);

    DenseLiouvillian out;
    out.dim = dim;
    out.q = Eigen::MatrixXcd::Zero(size, size);

    for (int ni = 0; ni < dim; ++ni) {
        for (int mi = 0; mi < dim; ++mi) {
            const double n = model.level_m(ni);
            const double m = model.level_m(mi);
            const long row = out.flat(ni, mi);
            const RedfieldCoefficients rc = redfield_coefficients(model, elems, bath, n, m);

            out.q(row, row) += Complex(0.0, model.transition_frequency(n, m)) + rc.loss();
            if (mi + 1 < dim)
                out.q(row, out.flat(ni, mi + 1)) += ihalf * bplus * model.ladder(m);
            if (ni > 0)
                out.q(row, out.flat(ni - 1, mi)) -= ihalf * bplus * model.ladder(n - 1.0);
            if (mi > 0)
                out.q(row, out.flat(ni, mi - 1)) += ihalf * bminus * model.ladder(m - 1.0);
            if (ni + 1 < dim)
                out.q(row, out.flat(ni + 1, mi)) -= ihalf * bminus * model.ladder(n);
            if (ni > 0 && mi > 0) out.q(row, out.flat(ni - 1, mi - 1)) += rc.gain_up;
            if (ni + 1 < dim && mi + 1 < dim)
                out.q(row, out.flat(ni + 1, mi + 1)) += rc.gain_down;
        }
    }
    return out;
}

SpinMatrices spin_matrices(const SpinModel& model) {
    const int dim = model.dim();
    SpinMatrices s;
    s.sx = Eigen::MatrixXcd::Zero(dim, dim);
    s.sy = Eigen::MatrixXcd::Zero(dim, dim);
    s.sz = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double m = model.level_m(i);
        s.sz(i, i) = m;
        if (i + 1 < dim) {
            const double l = model.ladder(m); // <m+1|S_+|m>
            s.sx(i + 1, i) = 0.5 * l;
            s.sx(i, i + 1) = 0.5 * l;
            s.sy(i + 1, i) = Complex(0.0, -0.5) * l;
            s.sy(i, i + 1) = Complex(0.0, 0.5) * l;
        }
    }
    return s;
}

Eigen::MatrixXcd unitary_superoperator(const SpinModel& model) {
    const int dim = model.dim();
    const long size = static_cast<long>(dim) * dim;
    const SpinMatrices s = spin_matrices(model);
    const Eigen::MatrixXcd h = -model.anisotropy * (s.sz * s.sz) - model.field[0] * s.sx -
                               model.field[1] * s.sy - model.field[2] * s.sz;

    // d rho_{mn}/dt = -i sum_k (H_{mk} rho_{kn} - rho_{mk} H_{kn}) on the flat
    // vector v_{(n,m)} = rho_{mn}.
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(size, size);
    const Complex mi_unit(0.0, -1.0);
    for (int ni = 0; ni < dim; ++ni)
        for (int mi = 0; mi < dim; ++mi) {
            const long row = static_cast<long>(ni) * dim + mi;
            for (int ki = 0; ki < dim; ++ki) {
                q(row, static_cast<long>(ni) * dim + ki) += mi_unit * h(mi, ki);
                q(row, static_cast<long>(ki) * dim + mi) -= mi_unit * h(ki, ni);
            }
        }
    return q;
}

Eigen::VectorXcd oracle_stationary(const SpinModel& model, const CouplingSpec& cpl,
                                   const BathSpec& bath) {
    if (bath.lambda <= 0.0)
        throw std::invalid_argument("oracle_stationary: lambda must be > 0");
    DenseLiouvillian dense = build_dense(model, cpl, bath);
    const int dim = dense.dim;
    const long size = static_cast<long>(dim) * dim;

    // Trace row replaces the first scalar equation.
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(size);
    rhs(0) = 1.0;
    dense.q.row(0).setZero();
    for (int i = 0; i < dim; ++i) dense.q(0, dense.flat(i, i)) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(dense.q);
    if (!lu.isInvertible())
        throw std::runtime_error("oracle_stationary: singular after trace replacement");
    return lu.solve(rhs);
}

Complex oracle_susceptibility(const SpinModel& model, const CouplingSpec& cpl,
                              const BathSpec& bath, double omega) {
    const DenseLiouvillian q0 = build_dense(model, cpl, bath);
    const DenseLiouvillian q1 = build_dense(model, cpl, bath, 1.0, 1.0);
    const Eigen::VectorXcd eq = oracle_stationary(model, cpl, bath);
    const Eigen::VectorXcd forcing = (q1.q - q0.q) * eq;

    const long size = q0.q.rows();
    const Eigen::MatrixXcd lhs =
        Complex(0.0, omega) * Eigen::MatrixXcd::Identity(size, size) + q0.q;
    const Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(lhs).solve(-forcing);

    // chi = Tr(rho^1 S_x) = sum (S_x)_{rc} rho^1_{cr}, and rho^1_{cr} = x_{(r,c)}.
    Complex chi = 0.0;
    for (const SxElement& e : sx_matrix_elements(model)) {
        const int r = model.index_of(e.m_row);
        const int c = model.index_of(e.m_col);
        chi += e.value * x(q0.flat(r, c));
    }
    return chi;
}

int null_space_dimension(const Eigen::MatrixXcd& q, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(q);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    int count = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol * sv(0)) ++count;
    return count;
}

ComparisonReport compare(const std::vector<double>& omega, const std::vector<Complex>& a,
                         const std::vector<Complex>& b) {
    if (omega.size() != a.size() || a.size() != b.size())
        throw std::invalid_argument("compare: traces must share one grid");
    if (omega.empty()) throw std::invalid_argument("compare: empty grid");
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    if (scale == 0.0) scale = 1.0;

    ComparisonReport rep;
    rep.omega_at_max = omega[0];
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 1e-12 * scale});
        const double rel = std::abs(a[i] - b[i]) / denom;
        sum += rel;
        if (rel > rep.max_rel) {
            rep.max_rel = rel;
            rep.omega_at_max = omega[i];
        }
    }
    rep.mean_rel = sum / static_cast<double>(a.size());
    return rep;
}

} // namespace spinline
