#pragma once

#include <functional>
#include <string>
#include <vector>

#include "latkern/coefficients.hpp"
#include "latkern/generators.hpp"
#include "latkern/lattice.hpp"
#include "latkern/linalg.hpp"
#include "latkern/propagation.hpp"

namespace latkern {

/// ||f|| + ||L f|| + ||f L|| in the uniform (max entry) norm; for families
/// each term is the sup over the z samples before summing.
struct GraphNormReport {
    double uniform = 0.0;
    double gen_term = 0.0;
    double adj_term = 0.0;
    double total = 0.0;
    double disc_radius = 0.0;
    std::size_t z_count = 1;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
};

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<double> coarse_steps; // h of the coarse side of each gap
    std::vector<double> gaps;
    double fitted_rate = 0.0;
    double fit_residual = 0.0;
    double t = 0.0;
    double disc_radius = 0.0;
    std::size_t z_count = 0;
    std::string coefficients;
    std::string method;
};

double uniform_norm(const ComplexMatrix& kernel);
double uniform_norm(const std::vector<ComplexMatrix>& family);

GraphNormReport graph_norm(const ComplexMatrix& kernel, const GeneratorMatrix& gen);
GraphNormReport graph_norm(const std::vector<ComplexMatrix>& family, const GeneratorMatrix& gen);

/// Sample a level-(m+1) kernel at the even-index sites shared with level m.
ComplexMatrix restrict_to_coarse(const SpatialGrid& fine, const ComplexMatrix& values,
                                 const SpatialGrid& coarse);

/// Ordinary least squares on (log x, log y) pairs.
FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// Graph-norm gaps between consecutive-level kernel families (fine restricted
/// to coarse, measured with the coarse generator) and the fitted rate.
ConvergenceReport convergence_rate(const std::vector<SpatialGrid>& grids,
                                   const std::vector<std::vector<ComplexMatrix>>& kernels,
                                   const std::vector<GeneratorMatrix>& gens);

/// Discrete Cauchy mean-value test: |f(z0) - mean of f on the circle|.
double analyticity_residual(const std::function<Complex(Complex)>& sampler, Complex center,
                            double radius, std::size_t quadrature_points);

/// Default z sample set for a disc of radius K: 0, +-K/2, +-K, +-iK/2, +-iK
/// and 8 points on |z| = K, deduplicated.
std::vector<Complex> disc_samples(double radius);

/// Exact kernels of the joint process across refinement levels, gap fit.
ConvergenceReport convergence_experiment(const CoefficientRecipe& recipe, double half_width,
                                         const std::vector<int>& levels, double t,
                                         double disc_radius, const KernelMethod& method);

/// Per-level graph-norm gap between the explicit Euler kernel at the Courant
/// step and the exact kernel, fitted against h.
ConvergenceReport euler_gap_experiment(const CoefficientRecipe& recipe, double half_width,
                                       const std::vector<int>& levels, double t,
                                       double disc_radius, double safety);

} // namespace latkern
