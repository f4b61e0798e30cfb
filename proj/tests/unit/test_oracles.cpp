#include <doctest.h>

#include <cmath>

#include "latkern/errors.hpp"
#include "latkern/oracles.hpp"
#include "latkern/propagation.hpp"

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

TEST_CASE("single euler step enumerates the three moves") {
    const SpatialGrid g(2, 1.0);
    const double h = g.step();
    const CoefficientField c = constant_field(g, 1.0, 0.2, 0.7, 0.5);
    const double dt = 0.5 * h * h; // comfortably inside the bound
    const Eigen::Index x0 = g.index_of(0.0);
    const PathEnumeration paths = enumerate_euler_paths(g, c, dt, 1, x0);
    REQUIRE(paths.outcomes.size() == 3);

    const double up = dt * (1.0 / (2 * h * h) + 0.2 / (2 * h));
    const double down = dt * (1.0 / (2 * h * h) - 0.2 / (2 * h));
    const double stay = 1.0 - up - down;
    bool saw_up = false, saw_down = false, saw_stay = false;
    for (const auto& o : paths.outcomes) {
        if (o.x == g.wrap(x0 + 1)) {
            saw_up = true;
            CHECK(o.weight == doctest::Approx(up));
            CHECK(o.y == doctest::Approx(0.7 * h + 0.5 * dt));
        } else if (o.x == g.wrap(x0 - 1)) {
            saw_down = true;
            CHECK(o.weight == doctest::Approx(down));
            CHECK(o.y == doctest::Approx(-0.7 * h + 0.5 * dt));
        } else {
            saw_stay = true;
            CHECK(o.x == x0);
            CHECK(o.weight == doctest::Approx(stay));
            CHECK(o.y == doctest::Approx(0.5 * dt));
        }
    }
    CHECK((saw_up && saw_down && saw_stay));
}

TEST_CASE("zero integrands give a point mass in y") {
    const SpatialGrid g(2, 1.0);
    const CoefficientField c = constant_field(g, 1.0, 0.0, 0.0, 0.0);
    const double dt = 0.4 * g.step() * g.step();
    const PathEnumeration paths = enumerate_euler_paths(g, c, dt, 5, 0);
    for (const auto& o : paths.outcomes)
        CHECK(o.y == 0.0);
    CHECK(std::abs(paths.total_mass() - 1.0) <= 1e-13);
    // the merged table then reproduces the marginal law exactly
    const auto table = paths.merged();
    const FourierSlice slice = fourier_slice(g, c, Complex(0, 0));
    EulerScheme sch{dt, 5, 1.0};
    const KernelSlice kernel = euler_kernel(slice, 5 * dt, sch);
    for (const auto& [key, weight] : table) {
        CHECK(key.second == 0);
        CHECK(weight ==
              doctest::Approx(g.step() * kernel.values(0, key.first).real()).epsilon(1e-12));
    }
}

TEST_CASE("path mass is conserved across step counts") {
    const SpatialGrid g(2, 1.0);
    const CoefficientField c = CoefficientField::sample(smooth_family(), g);
    for (const long long steps : {1LL, 3LL, 6LL}) {
        const double dt = 0.3 * g.step() * g.step();
        const PathEnumeration paths = enumerate_euler_paths(g, c, dt, steps, 2);
        CHECK(std::abs(paths.total_mass() - 1.0) <= 1e-13);
        for (const auto& o : paths.outcomes)
            CHECK(o.weight >= 0.0);
    }
}

TEST_CASE("transformed path table equals the frequency-slice euler kernel") {
    const SpatialGrid g(2, 1.0);
    const CoefficientField c = CoefficientField::sample(smooth_family_dx_only(), g);
    const FourierSlice slice0 = fourier_slice(g, c, Complex(0, 0));
    const double dt = 0.9 * courant_max_step({slice0}, 1.0);
    const long long steps = 6;
    for (const Eigen::Index x0 : {Eigen::Index(0), g.index_of(0.0)}) {
        const PathEnumeration paths = enumerate_euler_paths(g, c, dt, steps, x0);
        for (const Complex p :
             {Complex(0, 0), Complex(1, 0), Complex(2.5, 0), Complex(0, 1), Complex(-1.2, 0.3)}) {
            const FourierSlice slice = fourier_slice(g, c, p);
            EulerScheme sch{dt, steps, 1.0};
            const KernelSlice kernel = euler_kernel(slice, dt * static_cast<double>(steps), sch);
            const ComplexVector lhs = characteristic_sum(paths, p);
            const ComplexVector rhs = g.step() * kernel.values.row(x0).transpose();
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("enumeration guards") {
    const SpatialGrid g(3, 1.0);
    const CoefficientField c = constant_field(g, 1.0, 0.0, 0.0, 0.0);
    CHECK_THROWS_AS((void)enumerate_euler_paths(g, c, 0.3 * g.step() * g.step(), 8, 0),
                    GuardError); // 16^8 work
    CHECK_THROWS_AS((void)enumerate_euler_paths(g, c, 1.0, 2, 0), GuardError); // Courant
    CHECK_THROWS_AS((void)enumerate_euler_paths(g, c, 0.0, 2, 0), std::invalid_argument);
}

TEST_CASE("periodic heat kernel") {
    SUBCASE("symmetric in its arguments") {
        CHECK(periodic_heat_kernel(1.0, 0.25, 0.3, -0.4, 2.0, 7) ==
              doctest::Approx(periodic_heat_kernel(1.0, 0.25, -0.4, 0.3, 2.0, 7)));
    }

    SUBCASE("integrates to one over the period cell") {
        const int n = 4000;
        const double L = 2.0;
        double mass = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = -L + (i + 0.5) * (2.0 * L / n);
            mass += periodic_heat_kernel(0.8, 0.3, 0.1, x, L, 9) * (2.0 * L / n);
        }
        CHECK(std::abs(mass - 1.0) <= 1e-10);
    }

    SUBCASE("matches the lattice diffusion kernel") {
        const SpatialGrid g(7, 4.0);
        const CoefficientField c = constant_field(g, 1.0, 0.0, 0.0, 0.0);
        const KernelSlice k = exact_kernel(fourier_slice(g, c, Complex(0, 0)), 0.25);
        double worst = 0.0;
        const Eigen::Index x0 = g.index_of(0.0);
        for (Eigen::Index j = 0; j < g.size(); ++j)
            worst = std::max(worst,
                             std::abs(k.values(x0, j).real() -
                                      periodic_heat_kernel(1.0, 0.25, g.point(x0), g.point(j),
                                                           4.0, 5)));
        CHECK(worst <= 2e-3);
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS((void)periodic_heat_kernel(0.0, 0.1, 0, 0, 1.0, 5),
                        std::invalid_argument);
        CHECK_THROWS_AS((void)periodic_heat_kernel(1.0, 0.1, 0, 0, 1.0, 2),
                        std::invalid_argument);
    }
}

TEST_CASE("reflection-principle sup density") {
    SUBCASE("vanishes off the support") {
        CHECK(bm_sup_density(0.25, 0.5, 0.4) == 0.0);
        CHECK(bm_sup_density(0.25, -0.3, -0.1) == 0.0);
        CHECK(bm_sup_density(0.25, 0.2, 0.3) > 0.0);
    }

    SUBCASE("normalizes over the support") {
        const double t = 0.25;
        const int n = 1600;
        const double span = 7.0 * std::sqrt(t);
        double mass = 0.0;
        const double dx = 2.0 * span / n;
        for (int i = 0; i < n; ++i) {
            const double x = -span + (i + 0.5) * dx;
            const double y_lo = std::max(0.0, x);
            for (int j = 0; j < n; ++j) {
                const double y = y_lo + (j + 0.5) * (span - y_lo) / n;
                mass += bm_sup_density(t, x, y) * dx * ((span - y_lo) / n);
            }
        }
        CHECK(std::abs(mass - 1.0) <= 1e-6);
    }

    SUBCASE("scaling in sigma") {
        // sigma W has the law of W run at sigma^2 t
        CHECK(bm_sup_density(0.25, 0.2, 0.5, 0.0, 2.0) ==
              doctest::Approx(bm_sup_density(1.0, 0.2, 0.5, 0.0, 1.0)));
    }
}

TEST_CASE("constant-coefficient characteristic kernel") {
    SUBCASE("p = 0 is the plain gaussian") {
        const Complex v = constant_coeff_char(1.0, 0.5, 1.0, 0.3, {0, 0}, 0.2, 0.1, 0.4);
        const double gauss = std::exp(-std::pow(0.3 - 0.3 * 0.2, 2) / (2 * 0.2)) /
                             std::sqrt(2 * M_PI * 0.2);
        CHECK(v.real() == doctest::Approx(gauss));
        CHECK(v.imag() == doctest::Approx(0.0));
    }

    SUBCASE("no integrands means no p dependence") {
        for (const Complex p : {Complex(0, 0), Complex(1.3, 0), Complex(-2, 0)})
            CHECK(std::abs(constant_coeff_char(0.0, 0.0, 1.0, 0.0, p, 0.2, 0.0, 0.3) -
                           constant_coeff_char(0.0, 0.0, 1.0, 0.0, {0, 0}, 0.2, 0.0, 0.3)) ==
                  0.0);
    }

    SUBCASE("matches the lattice slice away from the wrap") {
        // second-order lattice error: the gap shrinks by ~4x per level
        std::vector<double> rel;
        for (const int m : {6, 7}) {
            const SpatialGrid g(m, 4.0);
            const CoefficientField c = constant_field(g, 1.0, 0.0, 1.0, 0.5);
            const KernelSlice k = exact_kernel(fourier_slice(g, c, Complex(1, 0)), 0.05);
            const Eigen::Index x0 = g.index_of(0.0);
            double worst = 0.0, scale = 0.0;
            for (Eigen::Index j = 0; j < g.size(); ++j) {
                const Complex ref =
                    constant_coeff_char(1.0, 0.5, 1.0, 0.0, {1, 0}, 0.05, g.point(x0), g.point(j));
                worst = std::max(worst, std::abs(k.values(x0, j) - ref));
                scale = std::max(scale, std::abs(ref));
            }
            rel.push_back(worst / scale);
        }
        CHECK(rel[1] <= 3e-3);
        CHECK(rel[1] <= 0.35 * rel[0]);
    }
}
