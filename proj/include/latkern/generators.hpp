#pragma once

#include <vector>

#include "latkern/coefficients.hpp"
#include "latkern/lattice.hpp"
#include "latkern/linalg.hpp"

namespace latkern {

/// Nearest-neighbour Markov generator on a periodic grid. Entry (x, x') is
/// the rate from x to x'; rows sum to zero.
struct GeneratorMatrix {
    SpatialGrid grid;
    RealMatrix entries;
};

enum class SliceRepresentation { Standard, Ito };

/// One frequency block of the joint generator: complex tridiagonal-with-
/// corners matrix, entire in z. At z = 0 the standard representation equals
/// the plain diffusion generator exactly.
struct FourierSlice {
    SpatialGrid grid;
    Complex z;
    SliceRepresentation representation = SliceRepresentation::Standard;
    ComplexMatrix entries;
};

/// Frequency-dependent coefficient triple reproducing a slice through
/// (sigma_z^2 / 2) Delta + mu_z Grad + kappa_z.
struct SliceCoefficients {
    ComplexVector sigma2_z;
    ComplexVector mu_z;
    ComplexVector kappa_z;
};

struct CommutationReport {
    double max_defect = 0.0;
    std::size_t worst_i = 0, worst_j = 0;
    bool pass = true;
};

/// Smallest m <= m_cap with sigma^2(x)/(2h^2) > |mu(x)|/(2h) on all of X_m.
/// Throws GuardError when no level up to m_cap satisfies the bound.
int min_refinement_level(const CoefficientRecipe& recipe, double half_width, int m_cap);

GeneratorMatrix diffusion_generator(const SpatialGrid& grid, const CoefficientField& coeffs);

RealMatrix adjoint(const GeneratorMatrix& gen);

FourierSlice fourier_slice(const SpatialGrid& grid, const CoefficientField& coeffs, Complex z);

SliceCoefficients slice_coefficients(const SpatialGrid& grid, const CoefficientField& coeffs,
                                     Complex z);

/// Reassemble a slice matrix from its coefficient triple (test hook for the
/// decomposition identity).
ComplexMatrix assemble_slice(const SpatialGrid& grid, const SliceCoefficients& sc);

/// phi(x) = h * sum of a over grid points <= x.
GridFunction gauge_phase(const SpatialGrid& grid, const CoefficientField& coeffs);

/// Gauge-conjugated slice D(z)^-1 L(z) D(z) with D(z) = diag exp(-i z phi).
FourierSlice ito_slice(const SpatialGrid& grid, const CoefficientField& coeffs, Complex z);

CommutationReport commutation_check(const std::vector<ComplexMatrix>& mats, double tolerance);

} // namespace latkern
