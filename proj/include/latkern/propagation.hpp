#pragma once

#include <cstdint>
#include <vector>

#include "latkern/coefficients.hpp"
#include "latkern/generators.hpp"
#include "latkern/lattice.hpp"
#include "latkern/linalg.hpp"

namespace latkern {

/// Explicit time stepping parameters. dt must satisfy the Courant bound of
/// the slice family it is used with; steps = floor(t / dt).
struct EulerScheme {
    double dt = 0.0;
    long long steps = 0;
    double safety = 0.9;
};

struct KernelMethod {
    enum class Kind { Exact, Euler } kind = Kind::Exact;
    double dt = 0.0;        // Euler only
    long long steps = 0;    // Euler only
    double safety = 0.9;    // Euler only; dt = safety * Courant bound when auto

    static KernelMethod exact() { return {}; }
    static KernelMethod euler_auto(double safety = 0.9);
    static KernelMethod euler_fixed(double dt);
};

/// Propagated kernel for one frequency, density normalized (carries 1/h).
struct KernelSlice {
    Complex z;
    double t = 0.0;
    KernelMethod method;
    ComplexMatrix values;
};

/// Family of kernel slices over a frequency grid.
struct JointKernelFT {
    SpatialGrid grid;
    FrequencyGrid freqs;
    double t = 0.0;
    std::vector<KernelSlice> slices;
    /// max |slice(-p) - conj(slice(p))| over matched pairs (real grids only)
    double hermitian_defect = 0.0;
};

/// Joint density over offsets dy = y' - y, reconstructed by Fourier
/// quadrature; values are the real parts, the largest imaginary residual is
/// kept as a quality metric.
struct JointDensity {
    SpatialGrid grid;
    std::vector<double> offsets;
    double t = 0.0;
    std::vector<RealMatrix> values; // one matrix per offset
    double max_imag_residual = 0.0;
    double offset_weight = 0.0; // quadrature weight of one offset cell
};

/// Largest dt with Re(1 + dt * diag) > 0 for every diagonal entry of every
/// slice, scaled by safety. Returns +infinity when no entry constrains dt.
double courant_max_step(const std::vector<FourierSlice>& slices, double safety);

/// Number of whole Euler steps fitting in horizon t.
long long num_steps(double t, double dt);

/// One explicit Euler step I + dt * L; rejects dt violating the Courant
/// bound, naming the offending diagonal entry.
ComplexMatrix euler_transfer(const FourierSlice& slice, double dt);

/// M^N by binary square-and-multiply; N = 0 gives the identity.
ComplexMatrix matrix_power(const ComplexMatrix& m, std::uint64_t n);
RealMatrix matrix_power(const RealMatrix& m, std::uint64_t n);

/// Scaling-and-squaring matrix exponential with a truncated series core.
ComplexMatrix matrix_exponential(const ComplexMatrix& a);
RealMatrix matrix_exponential(const RealMatrix& a);

KernelSlice exact_kernel(const FourierSlice& slice, double t);

KernelSlice euler_kernel(const FourierSlice& slice, double t, const EulerScheme& scheme);

JointKernelFT joint_kernel(const SpatialGrid& grid, const CoefficientField& coeffs, double t,
                           const FrequencyGrid& freqs, const KernelMethod& method);

/// Offsets dual to a closed symmetric uniform frequency window, for which
/// the weighted offset sum inverts the quadrature exactly at p = 0.
std::vector<double> dual_offsets(const FrequencyGrid& freqs);

JointDensity reconstruct_joint_density(const JointKernelFT& ft, const std::vector<double>& offsets);

} // namespace latkern
