#pragma once

#include <utility>
#include <vector>

#include "latkern/coefficients.hpp"
#include "latkern/generators.hpp"
#include "latkern/lattice.hpp"
#include "latkern/linalg.hpp"
#include "latkern/propagation.hpp"

namespace latkern {

/// One absorbed generator per running-max level y: transitions into sites
/// above the level are masked off and absorbed rows (x > y) are zero.
struct SupBlocks {
    SpatialGrid grid;
    std::vector<RealMatrix> blocks; // indexed by the level's grid index
};

/// Joint law of (position, running max) started from (x0, x0); entries are
/// probabilities over the (x', y') product grid.
struct SupJointKernel {
    SpatialGrid grid;
    double t = 0.0;
    Eigen::Index x0 = 0;
    RealMatrix u; // u(ix', iy')
    double marginal_defect = 0.0;
};

/// Per-period summand psi(x1, x2), period length and period count of a
/// discrete-time summation.
struct DiscreteSumSpec {
    RealMatrix psi;
    double period = 0.0;
    long long periods = 1;

    static DiscreteSumSpec from_matrix(RealMatrix psi, double period, long long periods);
    /// psi(x1, x2) = g(x2) - g(x1)
    static DiscreteSumSpec separable(const SpatialGrid& grid, const RealVector& g, double period,
                                     long long periods);
    /// psi(x1, x2) = g(x2)
    static DiscreteSumSpec of_arrival(const SpatialGrid& grid, const RealVector& g, double period,
                                      long long periods);
};

SupBlocks sup_blocks(const SpatialGrid& grid, const CoefficientField& coeffs);

SupJointKernel sup_joint_kernel(const SpatialGrid& grid, const CoefficientField& coeffs, double t,
                                Eigen::Index x0);

/// Explicit generator of the lifted (position, running max) chain on the
/// product grid; oracle scale only (guarded at 32 sites).
RealMatrix lifted_sup_generator(const SpatialGrid& grid, const CoefficientField& coeffs);

/// The cumulative-indicator transform V and its inverse on the product grid.
std::pair<RealMatrix, RealMatrix> sup_transform(const SpatialGrid& grid);

/// One-period x-propagator as a stochastic matrix (probability convention).
RealMatrix one_period_propagator(const SpatialGrid& grid, const CoefficientField& coeffs,
                                 double period, const KernelMethod& method);

/// Entrywise phase twist of a one-period propagator.
ComplexMatrix dsum_slice_from_propagator(const RealMatrix& propagator, const RealMatrix& psi,
                                         Complex p);

ComplexMatrix dsum_slice(const SpatialGrid& grid, const CoefficientField& coeffs,
                         const DiscreteSumSpec& spec, Complex p, const KernelMethod& method);

JointKernelFT dsum_kernel(const SpatialGrid& grid, const CoefficientField& coeffs,
                          const DiscreteSumSpec& spec, const FrequencyGrid& freqs,
                          const KernelMethod& method);

} // namespace latkern
