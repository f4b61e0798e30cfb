#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "latkern/errors.hpp"
#include "latkern/generators.hpp"

using namespace latkern;

namespace {

CoefficientField constant_field(const SpatialGrid& g, double s2, double mu, double a, double b) {
    CoefficientRecipe r;
    r.sigma2 = ScalarRecipe::make_constant(s2);
    r.mu = ScalarRecipe::make_constant(mu);
    r.a = ScalarRecipe::make_constant(a);
    r.b = ScalarRecipe::make_constant(b);
    return CoefficientField::sample(r, g);
}

} // namespace

TEST_CASE("minimum refinement level from the diffusion bound") {
    CoefficientRecipe r;
    r.sigma2 = ScalarRecipe::make_constant(1.0);
    r.mu = ScalarRecipe::make_constant(1.0);
    CHECK(min_refinement_level(r, 1.0, 8) == 1); // h=1 fails (1/2 > 1/2 false), h=1/2 passes

    r.mu = ScalarRecipe::make_constant(0.0);
    CHECK(min_refinement_level(r, 1.0, 8) == 0);

    r.sigma2 = ScalarRecipe::make_constant(2.0);
    r.mu = ScalarRecipe::make_constant(1.0);
    CHECK(min_refinement_level(r, 1.0, 8) == 0);

    // no admissible level within the cap
    r.sigma2 = ScalarRecipe::make_constant(1e-12);
    r.mu = ScalarRecipe::make_constant(10.0);
    CHECK_THROWS_AS((void)min_refinement_level(r, 1.0, 3), GuardError);
}

TEST_CASE("diffusion generator stencil") {
    const SpatialGrid g(1, 1.0); // h = 0.5
    const double h = g.step();

    SUBCASE("pure diffusion reproduces the second-difference stencil") {
        const CoefficientField c = constant_field(g, 2.0, 0.0, 0.0, 0.0);
        const GeneratorMatrix gen = diffusion_generator(g, c);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            CHECK(gen.entries(i, g.wrap(i + 1)) == doctest::Approx(1.0 / (h * h)));
            CHECK(gen.entries(i, g.wrap(i - 1)) == doctest::Approx(1.0 / (h * h)));
            CHECK(gen.entries(i, i) == doctest::Approx(-2.0 / (h * h)));
        }
    }

    SUBCASE("drift splits the rates") {
        const CoefficientField c = constant_field(g, 2.0, 1.0, 0.0, 0.0);
        const GeneratorMatrix gen = diffusion_generator(g, c);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            CHECK(gen.entries(i, g.wrap(i + 1)) == doctest::Approx(5.0));
            CHECK(gen.entries(i, g.wrap(i - 1)) == doctest::Approx(3.0));
            CHECK(gen.entries(i, i) == doctest::Approx(-8.0));
        }
    }

    SUBCASE("rows sum to zero and the band is tridiagonal with corners") {
        const SpatialGrid g3(3, 1.0);
        const CoefficientField c = CoefficientField::sample(smooth_family(), g3);
        const GeneratorMatrix gen = diffusion_generator(g3, c);
        CHECK(gen.entries.rowwise().sum().cwiseAbs().maxCoeff() <=
              1e-12 * gen.entries.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < g3.size(); ++i)
            for (Eigen::Index j = 0; j < g3.size(); ++j) {
                const bool neighbour = j == i || j == g3.wrap(i + 1) || j == g3.wrap(i - 1);
                if (!neighbour)
                    CHECK(gen.entries(i, j) == 0.0);
                else if (j != i)
                    CHECK(gen.entries(i, j) > 0.0);
            }
    }

    SUBCASE("too coarse a grid is rejected naming the site") {
        const CoefficientField c = constant_field(SpatialGrid(0, 1.0), 1.0, 1.0, 0.0, 0.0);
        try {
            (void)diffusion_generator(SpatialGrid(0, 1.0), c);
            FAIL("expected GuardError");
        } catch (const GuardError& e) {
            CHECK(std::string(e.what()).find("x = ") != std::string::npos);
        }
    }
}

TEST_CASE("adjoint transposes the generator") {
    const SpatialGrid g(1, 1.0);

    // symmetric case is unchanged
    const CoefficientField sym = constant_field(g, 2.0, 0.0, 0.0, 0.0);
    const GeneratorMatrix gen_sym = diffusion_generator(g, sym);
    CHECK((adjoint(gen_sym) - gen_sym.entries).cwiseAbs().maxCoeff() == 0.0);

    const CoefficientField c = constant_field(g, 2.0, 1.0, 0.0, 0.0);
    const GeneratorMatrix gen = diffusion_generator(g, c);
    const RealMatrix adj = adjoint(gen);
    for (Eigen::Index i = 0; i < g.size(); ++i)
        for (Eigen::Index j = 0; j < g.size(); ++j)
            CHECK(adj(i, j) == gen.entries(j, i));
    CHECK(adj.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * adj.cwiseAbs().maxCoeff());
    // double transpose restores the original
    CHECK((adjoint({g, adj}) - gen.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fourier slice hopping phases") {
    SUBCASE("z = 0 equals the plain generator exactly") {
        const SpatialGrid g(3, 1.0);
        const CoefficientField c = CoefficientField::sample(smooth_family(), g);
        const GeneratorMatrix gen = diffusion_generator(g, c);
        const FourierSlice slice = fourier_slice(g, c, Complex(0.0, 0.0));
        CHECK(max_abs(ComplexMatrix(slice.entries - gen.entries.cast<Complex>())) == 0.0);
    }

    SUBCASE("no integrands means no z dependence") {
        const SpatialGrid g(2, 1.0);
        const CoefficientField c = constant_field(g, 1.0, 0.2, 0.0, 0.0);
        const FourierSlice s1 = fourier_slice(g, c, Complex(0.7, 0.0));
        const FourierSlice s2 = fourier_slice(g, c, Complex(-3.0, 1.5));
        CHECK(max_abs(ComplexMatrix(s1.entries - s2.entries)) == 0.0);
    }

    SUBCASE("hand-evaluated phases at z = pi") {
        const SpatialGrid g(1, 1.0); // h = 0.5
        const CoefficientField c = constant_field(g, 2.0, 0.0, 1.0, 0.0);
        const FourierSlice slice = fourier_slice(g, c, Complex(M_PI, 0.0));
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            CHECK(std::abs(slice.entries(i, g.wrap(i + 1)) - Complex(0.0, -4.0)) <= 1e-13 * 4.0);
            CHECK(std::abs(slice.entries(i, g.wrap(i - 1)) - Complex(0.0, 4.0)) <= 1e-13 * 4.0);
            CHECK(std::abs(slice.entries(i, i) - Complex(-8.0, 0.0)) <= 1e-13 * 8.0);
        }
    }

    SUBCASE("row sums follow the closed form") {
        const SpatialGrid g(3, 1.0);
        const CoefficientField c = CoefficientField::sample(smooth_family(), g);
        const double h = g.step();
        for (const Complex z : {Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.4, -0.8)}) {
            const FourierSlice slice = fourier_slice(g, c, z);
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                const double up = c.sigma2()[i] / (2 * h * h) + c.mu()[i] / (2 * h);
                const double down = c.sigma2()[i] / (2 * h * h) - c.mu()[i] / (2 * h);
                const Complex theta = h * c.a()[i] * z;
                const Complex expected = Complex(0, -1) * z * c.b()[i] +
                                         up * (std::exp(Complex(0, -1) * theta) - 1.0) +
                                         down * (std::exp(Complex(0, 1) * theta) - 1.0);
                CHECK(std::abs(slice.entries.row(i).sum() - expected) <=
                      1e-12 * (1.0 + std::abs(expected)));
            }
        }
    }

    SUBCASE("real z conjugation symmetry") {
        const SpatialGrid g(3, 1.0);
        const CoefficientField c = CoefficientField::sample(smooth_family(), g);
        for (const double p : {0.3, 1.0, 2.5}) {
            const FourierSlice plus = fourier_slice(g, c, Complex(p, 0.0));
            const FourierSlice minus = fourier_slice(g, c, Complex(-p, 0.0));
            CHECK(max_abs(ComplexMatrix(minus.entries - plus.entries.conjugate())) == 0.0);
        }
    }
}

TEST_CASE("slice coefficients reassemble the slice") {
    const SpatialGrid g(2, 1.0); // 8 points
    const CoefficientField c = CoefficientField::sample(smooth_family(), g);

    SUBCASE("z = 0 reduces to the bare coefficients") {
        const SliceCoefficients sc = slice_coefficients(g, c, Complex(0.0, 0.0));
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            CHECK(std::abs(sc.sigma2_z[i] - Complex(c.sigma2()[i], 0.0)) == 0.0);
            CHECK(std::abs(sc.mu_z[i] - Complex(c.mu()[i], 0.0)) == 0.0);
            CHECK(std::abs(sc.kappa_z[i]) == 0.0);
        }
    }

    SUBCASE("a = 0 keeps only the dt-integrand term") {
        const CoefficientField c0 = constant_field(g, 1.3, 0.1, 0.0, 0.7);
        const Complex z(0.8, -0.2);
        const SliceCoefficients sc = slice_coefficients(g, c0, z);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            CHECK(std::abs(sc.sigma2_z[i] - Complex(1.3, 0.0)) <= 1e-15);
            CHECK(std::abs(sc.mu_z[i] - Complex(0.1, 0.0)) <= 1e-15);
            CHECK(std::abs(sc.kappa_z[i] - Complex(0, -1) * z * 0.7) <= 1e-15);
        }
    }

    SUBCASE("reassembly reproduces the slice") {
        const Complex z(1.0, 0.5);
        const FourierSlice slice = fourier_slice(g, c, z);
        const ComplexMatrix rebuilt = assemble_slice(g, slice_coefficients(g, c, z));
        CHECK(max_abs(ComplexMatrix(rebuilt - slice.entries)) <= 1e-12 * max_abs(slice.entries));
    }
}

TEST_CASE("gauge phase accumulates the dx integrand") {
    const SpatialGrid g(1, 1.0); // points -1,-0.5,0,0.5 with h=0.5

    SUBCASE("zero integrand gives zero phase") {
        const CoefficientField c = constant_field(g, 1.0, 0.0, 0.0, 0.0);
        const GridFunction phi = gauge_phase(g, c);
        CHECK(phi.values.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("unit integrand gives the running ramp") {
        const CoefficientField c = constant_field(g, 1.0, 0.0, 1.0, 0.0);
        const GridFunction phi = gauge_phase(g, c);
        const double expected[] = {0.5, 1.0, 1.5, 2.0};
        for (Eigen::Index i = 0; i < 4; ++i)
            CHECK(phi.values[i].real() == doctest::Approx(expected[i]));
    }

    SUBCASE("indicator integrand jumps once") {
        RealVector a = RealVector::Zero(g.size());
        const Eigen::Index i0 = g.index_of(0.0);
        a[i0] = 1.0;
        const CoefficientField c(g, RealVector::Ones(g.size()), RealVector::Zero(g.size()), a,
                                 RealVector::Zero(g.size()));
        const GridFunction phi = gauge_phase(g, c);
        for (Eigen::Index i = 0; i < g.size(); ++i)
            CHECK(phi.values[i].real() == doctest::Approx(i >= i0 ? g.step() : 0.0));
    }
}

TEST_CASE("ito slice is an exact gauge conjugation") {
    const SpatialGrid g(3, 1.0);
    const CoefficientField c = CoefficientField::sample(smooth_family(), g);

    SUBCASE("z = 0 equals the plain generator") {
        const FourierSlice ito = ito_slice(g, c, Complex(0.0, 0.0));
        const GeneratorMatrix gen = diffusion_generator(g, c);
        CHECK(max_abs(ComplexMatrix(ito.entries - gen.entries.cast<Complex>())) == 0.0);
        CHECK(ito.representation == SliceRepresentation::Ito);
    }

    SUBCASE("conjugating back recovers the slice") {
        const Complex z(1.3, -0.4);
        const FourierSlice slice = fourier_slice(g, c, z);
        const FourierSlice ito = ito_slice(g, c, z);
        const GridFunction phi = gauge_phase(g, c);
        ComplexVector d(g.size());
        for (Eigen::Index i = 0; i < g.size(); ++i)
            d[i] = std::exp(Complex(0, -1) * z * phi.values[i]);
        ComplexMatrix back(g.size(), g.size());
        for (Eigen::Index i = 0; i < g.size(); ++i)
            for (Eigen::Index j = 0; j < g.size(); ++j)
                back(i, j) = d[i] * ito.entries(i, j) / d[j];
        CHECK(max_abs(ComplexMatrix(back - slice.entries)) <= 1e-13 * max_abs(slice.entries));
    }

    SUBCASE("similar matrices share their spectrum") {
        const Complex z(0.9, 0.6);
        const FourierSlice slice = fourier_slice(g, c, z);
        const FourierSlice ito = ito_slice(g, c, z);
        Eigen::ComplexEigenSolver<ComplexMatrix> es1(slice.entries, false);
        Eigen::ComplexEigenSolver<ComplexMatrix> es2(ito.entries, false);
        std::vector<Complex> e1(es1.eigenvalues().data(),
                                es1.eigenvalues().data() + g.size());
        std::vector<Complex> e2(es2.eigenvalues().data(),
                                es2.eigenvalues().data() + g.size());
        auto by_parts = [](Complex a, Complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        };
        std::sort(e1.begin(), e1.end(), by_parts);
        std::sort(e2.begin(), e2.end(), by_parts);
        const double scale = std::abs(e1.front());
        for (std::size_t i = 0; i < e1.size(); ++i)
            CHECK(std::abs(e1[i] - e2[i]) <= 1e-10 * scale);
    }
}

TEST_CASE("gauge removal exposes the ito drift correction") {
    // Conjugating the slice so the hopping phases cancel leaves a
    // multiplication part -i z (b - sigma^2 a' / 2) + O(h); measured as the
    // action on constants across three refinements, the error halves with h.
    const Complex z(0.7, 0.3);
    std::vector<double> errs;
    for (const int m : {6, 7, 8}) {
        const SpatialGrid g(m, 1.0);
        const CoefficientField c = CoefficientField::sample(smooth_family(), g);
        const FourierSlice slice = fourier_slice(g, c, z);
        const GridFunction phi = gauge_phase(g, c);
        const Eigen::Index n = g.size();
        ComplexVector d(n);
        for (Eigen::Index i = 0; i < n; ++i)
            d[i] = std::exp(Complex(0, -1) * z * phi.values[i]);
        ComplexMatrix cancel(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                cancel(i, j) = d[i] * slice.entries(i, j) / d[j];
        const ComplexVector mult = cancel.rowwise().sum();
        const double h = g.step();
        double worst = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double da = (c.a()[g.wrap(i + 1)] - c.a()[g.wrap(i - 1)]) / (2.0 * h);
            const Complex expected =
                Complex(0, -1) * z * (c.b()[i] - c.sigma2()[i] * da / 2.0);
            worst = std::max(worst, std::abs(mult[i] - expected));
        }
        errs.push_back(worst);
    }
    CHECK(errs[1] <= 0.7 * errs[0]);
    CHECK(errs[2] <= 0.7 * errs[1]);
    CHECK(errs[2] <= 0.05);
}

TEST_CASE("commutation check") {
    SUBCASE("diagonal matrices commute") {
        ComplexMatrix d1 = ComplexMatrix::Zero(3, 3);
        ComplexMatrix d2 = ComplexMatrix::Zero(3, 3);
        d1.diagonal() << Complex(1, 0), Complex(2, 1), Complex(0, -1);
        d2.diagonal() << Complex(-1, 2), Complex(0.5, 0), Complex(3, 3);
        const CommutationReport rep = commutation_check({d1, d2}, 1e-14);
        CHECK(rep.pass);
        CHECK(rep.max_defect == 0.0);
    }

    SUBCASE("cyclic translations commute") {
        const Eigen::Index n = 5;
        auto shift = [n](Eigen::Index by) {
            ComplexMatrix s = ComplexMatrix::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                s(i, (i + by) % n) = 1.0;
            return s;
        };
        const CommutationReport rep = commutation_check({shift(1), shift(2), shift(3)}, 1e-14);
        CHECK(rep.pass);
        CHECK(rep.max_defect == 0.0);
    }

    SUBCASE("a non-commuting pair is reported") {
        ComplexMatrix a(2, 2), b(2, 2);
        a << 0, 1, 0, 0;
        b << 0, 0, 1, 0;
        const CommutationReport rep = commutation_check({a, b}, 1e-14);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_defect == doctest::Approx(1.0));
    }

    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS((void)commutation_check({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)},
                                                1e-14),
                        std::invalid_argument);
    }
}
