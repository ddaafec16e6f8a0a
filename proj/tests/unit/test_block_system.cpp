#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <random>

#include "spinline/block_system.hpp"
#include "spinline/oracle.hpp"

using namespace spinline;

namespace {

CoefficientVectorSet random_hermitian_set(int dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    CoefficientVectorSet c = CoefficientVectorSet::zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m <= n; ++m) {
            const Complex v = (n == m) ? Complex(g(gen), 0.0) : Complex(g(gen), g(gen));
            c.c[static_cast<std::size_t>(n)](m) = v;
            c.c[static_cast<std::size_t>(m)](n) = std::conj(v);
        }
    return c;
}

double max_block_difference(const BlockSystem& a, const BlockSystem& b) {
    REQUIRE(a.num_blocks() == b.num_blocks());
    REQUIRE(a.dim == b.dim);
    double worst = 0.0;
    for (int n = 0; n < a.num_blocks(); ++n) {
        const auto ns = static_cast<std::size_t>(n);
        auto acc = [&worst](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
            REQUIRE(x.rows() == y.rows());
            if (x.size() > 0) worst = std::max(worst, (x - y).cwiseAbs().maxCoeff());
        };
        acc(a.diag[ns], b.diag[ns]);
        acc(a.sub[ns], b.sub[ns]);
        acc(a.sup[ns], b.sup[ns]);
    }
    return worst;
}

} // namespace

TEST_CASE("generator blocks have the tridiagonal frame with empty outer couplings") {
    const SpinModel model(2.0, 0.3, {0.0, 0.0, 0.1}, 1.0);
    const BlockSystem blocks = build_blocks(model, phonon_coupling(), BathSpec(1e-2, 3));
    REQUIRE(blocks.num_blocks() == 5);
    CHECK(blocks.dim == 5);
    CHECK(blocks.sub.front().size() == 0);
    CHECK(blocks.sup.back().size() == 0);
    for (int n = 0; n < 5; ++n) {
        CHECK(blocks.diag[static_cast<std::size_t>(n)].rows() == 5);
        if (n > 0) CHECK(blocks.sub[static_cast<std::size_t>(n)].rows() == 5);
        if (n < 4) CHECK(blocks.sup[static_cast<std::size_t>(n)].rows() == 5);
    }
}

TEST_CASE("free two-level generator has the bare precession spectrum") {
    // lambda = 0, B = (0,0,h): eigenvalues {0, 0, +-ih} and no real parts
    const double h = 0.8;
    const SpinModel model(0.5, 0.0, {0.0, 0.0, h}, 1.0);
    const BlockSystem blocks = build_blocks(model, electron_hole_coupling(), BathSpec(0.0, 1));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_dense(blocks));
    std::vector<double> imag(4);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(es.eigenvalues()(i).real()) <= 1e-14);
        imag[static_cast<std::size_t>(i)] = es.eigenvalues()(i).imag();
    }
    std::sort(imag.begin(), imag.end());
    CHECK(imag[0] == doctest::Approx(-h).epsilon(1e-14));
    CHECK(std::abs(imag[1]) <= 1e-14);
    CHECK(std::abs(imag[2]) <= 1e-14);
    CHECK(imag[3] == doctest::Approx(h).epsilon(1e-14));
}

TEST_CASE("transverse static field enters the generator as a precession of the same rate") {
    const double b = 0.37;
    const SpinModel model(0.5, 0.0, {b, 0.0, 0.0}, 1.0);
    const BlockSystem blocks = build_blocks(model, electron_hole_coupling(), BathSpec(0.0, 1));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_dense(blocks));
    std::vector<double> imag(4);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(es.eigenvalues()(i).real()) <= 1e-14);
        imag[static_cast<std::size_t>(i)] = es.eigenvalues()(i).imag();
    }
    std::sort(imag.begin(), imag.end());
    CHECK(imag[0] == doctest::Approx(-b).epsilon(1e-13));
    CHECK(imag[3] == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("undamped generator equals the dense commutator superoperator") {
    // Level-basis coefficient assembly against -i[H, .] built from matrix algebra.
    const SpinModel model(1.5, 0.4, {0.3, 0.7, 0.2}, 1.0);
    const BlockSystem blocks = build_blocks(model, electron_hole_coupling(), BathSpec(0.0, 1));
    const Eigen::MatrixXcd lhs = to_dense(blocks);
    const Eigen::MatrixXcd rhs = unitary_superoperator(model);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("damped generator blocks match the dense reference entry for entry") {
    const SpinModel model(2.0, 0.5, {0.0, 0.0, 0.2}, 1.0);
    const CouplingSpec cpl = phonon_coupling();
    const BathSpec bath(1e-2, 3);
    const Eigen::MatrixXcd lhs = to_dense(build_blocks(model, cpl, bath));
    const DenseLiouvillian ref = build_dense(model, cpl, bath);
    const double scale = ref.q.cwiseAbs().maxCoeff();
    CHECK((lhs - ref.q).cwiseAbs().maxCoeff() <= 1e-14 * scale);
}

TEST_CASE("generator preserves trace and hermiticity of the coefficient stack") {
    const SpinModel model(2.0, 0.5, {0.0, 0.0, 0.2}, 0.8);
    const BlockSystem blocks = build_blocks(model, phonon_coupling(), BathSpec(3e-2, 3));
    const CoefficientVectorSet c = random_hermitian_set(model.dim(), 97u);
    const CoefficientVectorSet qc = apply_generator(blocks, c);
    CHECK(std::abs(qc.trace()) <= 1e-13 * qc.norm());
    CHECK(qc.hermiticity_defect() <= 1e-12 * qc.norm());
}

TEST_CASE("transverse drive application equals the generator difference") {
    const SpinModel model(1.5, 0.3, {0.0, 0.0, 0.1}, 0.9);
    const CouplingSpec cpl = phonon_coupling();
    const BathSpec bath(1e-2, 3);
    const BlockSystem q0 = build_blocks(model, cpl, bath);
    const BlockSystem q1 = build_blocks(model, cpl, bath, 1.0, 1.0);
    const CoefficientVectorSet c = random_hermitian_set(model.dim(), 5u);
    const CoefficientVectorSet drive = apply_transverse_drive(model, c);
    const CoefficientVectorSet a = apply_generator(q1, c);
    const CoefficientVectorSet b = apply_generator(q0, c);
    double worst = 0.0;
    for (int n = 0; n < c.num_blocks(); ++n) {
        const auto ns = static_cast<std::size_t>(n);
        worst = std::max(worst,
                         (a.c[ns] - b.c[ns] - drive.c[ns]).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-14 * c.norm());

    // the drive is a commutator, so it annihilates multiples of the identity
    CoefficientVectorSet ident = CoefficientVectorSet::zero(model.dim(), model.dim());
    for (int n = 0; n < model.dim(); ++n) ident.c[static_cast<std::size_t>(n)](n) = 0.25;
    CHECK(apply_transverse_drive(model, ident).norm() <= 1e-15);
}

TEST_CASE("sector chains built directly agree with extraction from the full generator") {
    const SpinModel model(2.0, 0.4, {0.0, 0.0, 0.15}, 0.7);
    const CouplingSpec cpl = phonon_coupling();
    const BathSpec bath(2e-2, 3);
    const BlockSystem blocks = build_blocks(model, cpl, bath);
    for (int k : {-2, -1, 0, 1, 2}) {
        CAPTURE(k);
        const BlockSystem direct = build_sector_chain(model, cpl, bath, k);
        const BlockSystem pulled = extract_sector_chain(blocks, k);
        CHECK(direct.num_blocks() == sector_chain_length(model.dim(), k));
        CHECK(max_block_difference(direct, pulled) <= 1e-15);
    }
    CHECK(first_block_of_sector(5, 1) == 1);
    CHECK(first_block_of_sector(5, -1) == 0);
    CHECK(sector_chain_length(5, 0) == 5);
    CHECK(sector_chain_length(5, 4) == 1);
    CHECK_THROWS_AS(build_sector_chain(model, cpl, bath, 5), std::invalid_argument);

    const SpinModel tilted(2.0, 0.4, {0.1, 0.0, 0.15}, 0.7);
    CHECK_THROWS_AS(build_sector_chain(tilted, cpl, bath, 1), std::invalid_argument);
}

TEST_CASE("off-sector magnitude isolates the named diagonals") {
    const int dim = 4;
    CoefficientVectorSet c = CoefficientVectorSet::zero(dim, dim);
    c.c[2](1) = Complex(0.0, 3.0); // sector k = 1
    c.c[1](2) = Complex(2.0, 0.0); // sector k = -1
    c.c[3](0) = Complex(0.5, 0.0); // sector k = 3
    CHECK(off_sector_magnitude(c, {1, -1}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(off_sector_magnitude(c, {1, -1, 3}) == 0.0);
    CHECK(off_sector_magnitude(c, {}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("coefficient stack helpers") {
    CoefficientVectorSet c = CoefficientVectorSet::zero(3, 3);
    CHECK(c.num_blocks() == 3);
    CHECK(c.norm() == 0.0);
    c.c[0](0) = Complex(1.0, 0.0);
    c.c[1](1) = Complex(2.0, 0.0);
    c.c[2](0) = Complex(0.0, 1.0);
    CHECK(c.trace() == Complex(3.0, 0.0));
    // (c_2)_0 without the mirrored conjugate in (c_0)_2
    CHECK(c.hermiticity_defect() == doctest::Approx(1.0).epsilon(1e-15));
}
