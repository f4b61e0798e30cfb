#include "latkern/generators.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "latkern/errors.hpp"

namespace latkern {

namespace {

struct HoppingRates {
    RealVector up, down;
};

// Rates of eq-style nearest-neighbour hopping. Rejects sites where the
// refinement is too coarse (a negative or vanishing rate would appear).
HoppingRates hopping_rates(const SpatialGrid& grid, const CoefficientField& coeffs) {
    const Eigen::Index n = grid.size();
    const double h = grid.step();
    HoppingRates r{RealVector(n), RealVector(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double diffusive = coeffs.sigma2()[i] / (2.0 * h * h);
        const double drift = coeffs.mu()[i] / (2.0 * h);
        r.up[i] = diffusive + drift;
        r.down[i] = diffusive - drift;
        if (!(r.up[i] > 0.0 && r.down[i] > 0.0)) {
            std::ostringstream os;
            os << "refinement too coarse at x = " << grid.point(i) << " (m = " << grid.level()
               << "): sigma^2/(2h^2) = " << diffusive << " must exceed |mu|/(2h) = "
               << std::abs(drift);
            throw GuardError(os.str());
        }
    }
    return r;
}

} // namespace

int min_refinement_level(const CoefficientRecipe& recipe, double half_width, int m_cap) {
    if (m_cap < 0)
        throw std::invalid_argument("min_refinement_level: m_cap must be >= 0");
    double worst_ratio = 0.0;
    double worst_x = 0.0;
    for (int m = 0; m <= m_cap; ++m) {
        const SpatialGrid grid(m, half_width);
        const double h = grid.step();
        bool ok = true;
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            const double x = grid.point(i);
            const double s2 = recipe.sigma2.eval(x, half_width);
            const double mu = std::abs(recipe.mu.eval(x, half_width));
            // sigma^2/(2h^2) > |mu|/(2h)  <=>  sigma^2 > h |mu|
            if (!(s2 > h * mu)) {
                ok = false;
                const double ratio = s2 > 0.0 ? h * mu / s2 : std::numeric_limits<double>::infinity();
                if (ratio > worst_ratio) {
                    worst_ratio = ratio;
                    worst_x = x;
                }
                break;
            }
        }
        if (ok)
            return m;
    }
    std::ostringstream os;
    os << "no refinement level m <= " << m_cap << " satisfies the diffusion bound; "
       << "worst site x = " << worst_x << " with h|mu|/sigma^2 = " << worst_ratio;
    throw GuardError(os.str());
}

GeneratorMatrix diffusion_generator(const SpatialGrid& grid, const CoefficientField& coeffs) {
    if (!(coeffs.grid() == grid))
        throw std::invalid_argument("diffusion_generator: coefficients sampled on a different grid");
    const auto rates = hopping_rates(grid, coeffs);
    const Eigen::Index n = grid.size();
    RealMatrix L = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // accumulate: on the 2-point grid up and down hit the same site
        L(i, grid.wrap(i + 1)) += rates.up[i];
        L(i, grid.wrap(i - 1)) += rates.down[i];
        L(i, i) -= rates.up[i] + rates.down[i];
    }
    return {grid, std::move(L)};
}

RealMatrix adjoint(const GeneratorMatrix& gen) {
    return gen.entries.transpose();
}

FourierSlice fourier_slice(const SpatialGrid& grid, const CoefficientField& coeffs, Complex z) {
    if (!(coeffs.grid() == grid))
        throw std::invalid_argument("fourier_slice: coefficients sampled on a different grid");
    const auto rates = hopping_rates(grid, coeffs);
    const Eigen::Index n = grid.size();
    const double h = grid.step();
    const Complex minus_i(0.0, -1.0);
    ComplexMatrix L = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex theta = h * coeffs.a()[i] * z;
        const Complex up_phase = std::exp(minus_i * theta);
        const Complex down_phase = std::exp(-minus_i * theta);
        L(i, grid.wrap(i + 1)) += rates.up[i] * up_phase;
        L(i, grid.wrap(i - 1)) += rates.down[i] * down_phase;
        L(i, i) += -(rates.up[i] + rates.down[i]) + minus_i * z * coeffs.b()[i];
    }
    return {grid, z, SliceRepresentation::Standard, std::move(L)};
}

SliceCoefficients slice_coefficients(const SpatialGrid& grid, const CoefficientField& coeffs,
                                     Complex z) {
    if (!(coeffs.grid() == grid))
        throw std::invalid_argument("slice_coefficients: coefficients sampled on a different grid");
    hopping_rates(grid, coeffs); // refinement guard, same as fourier_slice
    const Eigen::Index n = grid.size();
    const double h = grid.step();
    const Complex minus_i(0.0, -1.0);
    SliceCoefficients sc{ComplexVector(n), ComplexVector(n), ComplexVector(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s2 = coeffs.sigma2()[i];
        const double mu = coeffs.mu()[i];
        const Complex theta = h * coeffs.a()[i] * z;
        const Complex c = std::cos(theta);
        const Complex s = std::sin(theta);
        sc.sigma2_z[i] = s2 * c + minus_i * (h * mu) * s;
        sc.mu_z[i] = mu * c + minus_i * (s / h) * s2;
        sc.kappa_z[i] = minus_i * (s / h) * mu + s2 * (c - 1.0) / (h * h) + minus_i * z * coeffs.b()[i];
    }
    return sc;
}

ComplexMatrix assemble_slice(const SpatialGrid& grid, const SliceCoefficients& sc) {
    const Eigen::Index n = grid.size();
    const double h = grid.step();
    ComplexMatrix L = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex diffusive = sc.sigma2_z[i] / (2.0 * h * h);
        const Complex drift = sc.mu_z[i] / (2.0 * h);
        L(i, grid.wrap(i + 1)) += diffusive + drift;
        L(i, grid.wrap(i - 1)) += diffusive - drift;
        L(i, i) += -2.0 * diffusive + sc.kappa_z[i];
    }
    return L;
}

GridFunction gauge_phase(const SpatialGrid& grid, const CoefficientField& coeffs) {
    const Eigen::Index n = grid.size();
    const double h = grid.step();
    ComplexVector phi(n);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        acc += h * coeffs.a()[i];
        phi[i] = acc;
    }
    return {grid, std::move(phi)};
}

FourierSlice ito_slice(const SpatialGrid& grid, const CoefficientField& coeffs, Complex z) {
    FourierSlice slice = fourier_slice(grid, coeffs, z);
    const GridFunction phi = gauge_phase(grid, coeffs);
    const Eigen::Index n = grid.size();
    const Complex minus_i(0.0, -1.0);
    ComplexVector d(n);
    for (Eigen::Index i = 0; i < n; ++i)
        d[i] = std::exp(minus_i * z * phi.values[i]);
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = slice.entries(i, j) * d[j] / d[i];
    return {grid, z, SliceRepresentation::Ito, std::move(out)};
}

CommutationReport commutation_check(const std::vector<ComplexMatrix>& mats, double tolerance) {
    CommutationReport report;
    if (mats.empty())
        return report;
    const Eigen::Index n = mats.front().rows();
    for (const auto& m : mats)
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("commutation_check: dimension mismatch");
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t j = i + 1; j < mats.size(); ++j) {
            const double defect = max_abs(ComplexMatrix(mats[i] * mats[j] - mats[j] * mats[i]));
            if (defect > report.max_defect) {
                report.max_defect = defect;
                report.worst_i = i;
                report.worst_j = j;
            }
        }
    }
    report.pass = report.max_defect <= tolerance;
    return report;
}

} // namespace latkern
