#include "spinline/block_system.hpp"

#include <stdexcept>

namespace spinline {

Complex CoefficientVectorSet::trace() const {
    Complex t = 0.0;
    for (int n = 0; n < num_blocks(); ++n) {
        if (c[n].size() != num_blocks())
            throw std::invalid_argument("trace: coefficient set is not square");
        t += c[static_cast<std::size_t>(n)](n);
    }
    return t;
}

double CoefficientVectorSet::hermiticity_defect() const {
    double d = 0.0;
    for (int n = 0; n < num_blocks(); ++n)
        for (int m = 0; m < num_blocks(); ++m)
            d = std::max(d, std::abs(c[static_cast<std::size_t>(n)](m) -
                                     std::conj(c[static_cast<std::size_t>(m)](n))));
    return d;
}

double CoefficientVectorSet::norm() const {
    double s = 0.0;
    for (const auto& v : c) s += v.squaredNorm();
    return std::sqrt(s);
}

CoefficientVectorSet CoefficientVectorSet::zero(int num_blocks, int dim) {
    CoefficientVectorSet out;
    out.c.assign(static_cast<std::size_t>(num_blocks), Eigen::VectorXcd::Zero(dim));
    return out;
}

BlockSystem build_blocks(const SpinModel& model, const CouplingSpec& cpl, const BathSpec& bath,
                         Complex extra_bplus, Complex extra_bminus) {
    const int dim = model.dim();
    const Complex bplus = Complex(model.field[0], model.field[1]) + extra_bplus;
    const Complex bminus = Complex(model.field[0], -model.field[1]) + extra_bminus;
    const Complex ihalf(0.0, 0.5);
    const CouplingElements elems = coupling_elements(model, cpl);

    BlockSystem out;
    out.dim = dim;
    out.sub.resize(static_cast<std::size_t>(dim));
    out.diag.resize(static_cast<std::size_t>(dim));
    out.sup.resize(static_cast<std::size_t>(dim));

    for (int ni = 0; ni < dim; ++ni) {
        const double n = model.level_m(ni);
        auto& d = out.diag[static_cast<std::size_t>(ni)];
        d = Eigen::MatrixXcd::Zero(dim, dim);
        Eigen::MatrixXcd* lo = nullptr;
        Eigen::MatrixXcd* hi = nullptr;
        if (ni > 0) {
            out.sub[static_cast<std::size_t>(ni)] = Eigen::MatrixXcd::Zero(dim, dim);
            lo = &out.sub[static_cast<std::size_t>(ni)];
        }
        if (ni + 1 < dim) {
            out.sup[static_cast<std::size_t>(ni)] = Eigen::MatrixXcd::Zero(dim, dim);
            hi = &out.sup[static_cast<std::size_t>(ni)];
        }

        for (int mi = 0; mi < dim; ++mi) {
            const double m = model.level_m(mi);
            const RedfieldCoefficients rc = redfield_coefficients(model, elems, bath, n, m);

            d(mi, mi) = Complex(rc.loss(), model.transition_frequency(n, m));
            if (mi + 1 < dim) d(mi, mi + 1) += ihalf * bplus * model.ladder(m);
            if (mi > 0) d(mi, mi - 1) += ihalf * bminus * model.ladder(m - 1.0);

            if (lo) {
                (*lo)(mi, mi) -= ihalf * bplus * model.ladder(n - 1.0);
                if (mi > 0) (*lo)(mi, mi - 1) = rc.gain_up;
            }
            if (hi) {
                (*hi)(mi, mi) -= ihalf * bminus * model.ladder(n);
                if (mi + 1 < dim) (*hi)(mi, mi + 1) = rc.gain_down;
            }
        }
    }
    return out;
}

CoefficientVectorSet apply_generator(const BlockSystem& blocks, const CoefficientVectorSet& c) {
    const int nb = blocks.num_blocks();
    if (c.num_blocks() != nb)
        throw std::invalid_argument("apply_generator: block count mismatch");
    CoefficientVectorSet out;
    out.c.resize(static_cast<std::size_t>(nb));
    for (int n = 0; n < nb; ++n) {
        const auto ns = static_cast<std::size_t>(n);
        if (c.c[ns].size() != blocks.dim)
            throw std::invalid_argument("apply_generator: vector dimension mismatch");
        Eigen::VectorXcd v = blocks.diag[ns] * c.c[ns];
        if (n > 0 && blocks.sub[ns].size() > 0) v.noalias() += blocks.sub[ns] * c.c[ns - 1];
        if (n + 1 < nb && blocks.sup[ns].size() > 0) v.noalias() += blocks.sup[ns] * c.c[ns + 1];
        out.c[ns] = std::move(v);
    }
    return out;
}

CoefficientVectorSet apply_transverse_drive(const SpinModel& model,
                                            const CoefficientVectorSet& c) {
    const int dim = model.dim();
    if (c.num_blocks() != dim)
        throw std::invalid_argument("apply_transverse_drive: block count mismatch");
    const Complex ihalf(0.0, 0.5);
    CoefficientVectorSet out = CoefficientVectorSet::zero(dim, dim);
    for (int ni = 0; ni < dim; ++ni) {
        const auto ns = static_cast<std::size_t>(ni);
        const double n = model.level_m(ni);
        for (int mi = 0; mi < dim; ++mi) {
            const double m = model.level_m(mi);
            Complex v = 0.0;
            if (mi + 1 < dim) v += ihalf * model.ladder(m) * c.c[ns](mi + 1);
            if (ni > 0) v -= ihalf * model.ladder(n - 1.0) * c.c[ns - 1](mi);
            if (mi > 0) v += ihalf * model.ladder(m - 1.0) * c.c[ns](mi - 1);
            if (ni + 1 < dim) v -= ihalf * model.ladder(n) * c.c[ns + 1](mi);
            out.c[ns](mi) = v;
        }
    }
    return out;
}

int first_block_of_sector(int dim, int k) { return k > 0 ? k : 0; }

int sector_chain_length(int dim, int k) { return dim - std::abs(k); }

BlockSystem extract_sector_chain(const BlockSystem& blocks, int k) {
    const int dim = blocks.dim;
    const int len = sector_chain_length(dim, k);
    if (len <= 0) throw std::invalid_argument("extract_sector_chain: |k| too large");
    const int n0 = first_block_of_sector(dim, k);

    BlockSystem chain;
    chain.dim = 1;
    chain.sub.resize(static_cast<std::size_t>(len));
    chain.diag.resize(static_cast<std::size_t>(len));
    chain.sup.resize(static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) {
        const int n = n0 + j;
        const int m = n - k;
        const auto ns = static_cast<std::size_t>(n);
        const auto js = static_cast<std::size_t>(j);
        chain.diag[js] = Eigen::MatrixXcd::Constant(1, 1, blocks.diag[ns](m, m));
        if (j > 0)
            chain.sub[js] = Eigen::MatrixXcd::Constant(1, 1, blocks.sub[ns](m, m - 1));
        if (j + 1 < len)
            chain.sup[js] = Eigen::MatrixXcd::Constant(1, 1, blocks.sup[ns](m, m + 1));
    }
    return chain;
}

BlockSystem build_sector_chain(const SpinModel& model, const CouplingSpec& cpl,
                               const BathSpec& bath, int k) {
    if (!model.longitudinal())
        throw std::invalid_argument("build_sector_chain: transverse static field mixes sectors");
    const int dim = model.dim();
    const int len = sector_chain_length(dim, k);
    if (len <= 0) throw std::invalid_argument("build_sector_chain: |k| too large");
    const int n0 = first_block_of_sector(dim, k);
    const CouplingElements elems = coupling_elements(model, cpl);

    BlockSystem chain;
    chain.dim = 1;
    chain.sub.resize(static_cast<std::size_t>(len));
    chain.diag.resize(static_cast<std::size_t>(len));
    chain.sup.resize(static_cast<std::size_t>(len));
    for (int j = 0; j < len; ++j) {
        const double n = model.level_m(n0 + j);
        const double m = n - k;
        const RedfieldCoefficients rc = redfield_coefficients(model, elems, bath, n, m);
        chain.diag[static_cast<std::size_t>(j)] = Eigen::MatrixXcd::Constant(
            1, 1, Complex(rc.loss(), model.transition_frequency(n, m)));
        if (j > 0)
            chain.sub[static_cast<std::size_t>(j)] =
                Eigen::MatrixXcd::Constant(1, 1, rc.gain_up);
        if (j + 1 < len)
            chain.sup[static_cast<std::size_t>(j)] =
                Eigen::MatrixXcd::Constant(1, 1, rc.gain_down);
    }
    return chain;
}

double off_sector_magnitude(const CoefficientVectorSet& c, const std::vector<int>& sectors) {
    double worst = 0.0;
    for (int n = 0; n < c.num_blocks(); ++n)
        for (int m = 0; m < c.c[static_cast<std::size_t>(n)].size(); ++m) {
            bool listed = false;
            for (int k : sectors)
                if (n - m == k) { listed = true; break; }
            if (!listed)
                worst = std::max(worst, std::abs(c.c[static_cast<std::size_t>(n)](m)));
        }
    return worst;
}

Eigen::MatrixXcd to_dense(const BlockSystem& blocks) {
    const int nb = blocks.num_blocks();
    const int dim = blocks.dim;
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(nb * dim, nb * dim);
    for (int n = 0; n < nb; ++n) {
        const auto ns = static_cast<std::size_t>(n);
        q.block(n * dim, n * dim, dim, dim) = blocks.diag[ns];
        if (n > 0 && blocks.sub[ns].size() > 0)
            q.block(n * dim, (n - 1) * dim, dim, dim) = blocks.sub[ns];
        if (n + 1 < nb && blocks.sup[ns].size() > 0)
            q.block(n * dim, (n + 1) * dim, dim, dim) = blocks.sup[ns];
    }
    return q;
}

} // namespace spinline
