#pragma once

#include <map>
#include <utility>
#include <vector>

#include "latkern/coefficients.hpp"
#include "latkern/lattice.hpp"
#include "latkern/linalg.hpp"

namespace latkern {

/// Exact joint law of (x_N, y_N) for the explicit Euler chain, obtained by
/// exhaustive enumeration of the N-step transfer product. Weights are the
/// real one-step products; y accumulates a(x) dx + b(x) dt with a and b
/// sampled at the departure state.
struct PathEnumeration {
    SpatialGrid grid;
    double dt = 0.0;
    long long steps = 0;
    Eigen::Index x0 = 0;
    struct Outcome {
        Eigen::Index x;
        double y;
        double weight;
    };
    std::vector<Outcome> outcomes;

    double total_mass() const;
    /// Table keyed by (terminal index, y rounded at 1e-12).
    std::map<std::pair<Eigen::Index, long long>, double> merged() const;
};

PathEnumeration enumerate_euler_paths(const SpatialGrid& grid, const CoefficientField& coeffs,
                                      double dt, long long steps, Eigen::Index x0);

/// Per terminal site, sum of weight * exp(-i z y): the transform matching
/// the frequency-slice convention of the joint generator.
ComplexVector characteristic_sum(const PathEnumeration& paths, Complex z);

/// Image-charge periodization of the Gaussian kernel on [-L, L).
double periodic_heat_kernel(double sigma, double t, double x, double x_prime, double half_width,
                            int images);

/// Reflection-principle joint density of terminal value and running maximum
/// of Brownian motion started at x0; zero outside {y >= max(x0, x)}.
double bm_sup_density(double t, double x, double y, double x0 = 0.0, double sigma = 1.0);

/// Free-line characteristic kernel for constant coefficients:
/// exp(-i p (a (x'-x) + b t)) times the drifted Gaussian density.
Complex constant_coeff_char(double a, double b, double sigma2, double mu, Complex p, double t,
                            double x, double x_prime);

} // namespace latkern
