#include "latkern/abelian_ext.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latkern/errors.hpp"

namespace latkern {

DiscreteSumSpec DiscreteSumSpec::from_matrix(RealMatrix psi, double period, long long periods) {
    if (psi.rows() != psi.cols())
        throw std::invalid_argument("DiscreteSumSpec: psi must be square");
    if (!psi.allFinite())
        throw std::invalid_argument("DiscreteSumSpec: psi must be finite");
    if (!(period > 0.0))
        throw std::invalid_argument("DiscreteSumSpec: period must be positive");
    if (periods < 1)
        throw std::invalid_argument("DiscreteSumSpec: at least one period required");
    return {std::move(psi), period, periods};
}

DiscreteSumSpec DiscreteSumSpec::separable(const SpatialGrid& grid, const RealVector& g,
                                           double period, long long periods) {
    if (g.size() != grid.size())
        throw std::invalid_argument("DiscreteSumSpec: g must match the grid");
    const Eigen::Index n = grid.size();
    RealMatrix psi(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            psi(i, j) = g[j] - g[i];
    return from_matrix(std::move(psi), period, periods);
}

DiscreteSumSpec DiscreteSumSpec::of_arrival(const SpatialGrid& grid, const RealVector& g,
                                            double period, long long periods) {
    if (g.size() != grid.size())
        throw std::invalid_argument("DiscreteSumSpec: g must match the grid");
    const Eigen::Index n = grid.size();
    RealMatrix psi(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            psi(i, j) = g[j];
    return from_matrix(std::move(psi), period, periods);
}

SupBlocks sup_blocks(const SpatialGrid& grid, const CoefficientField& coeffs) {
    const GeneratorMatrix gen = diffusion_generator(grid, coeffs);
    const Eigen::Index n = grid.size();
    SupBlocks out{grid, {}};
    out.blocks.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index level = 0; level < n; ++level) {
        RealMatrix block = RealMatrix::Zero(n, n);
        // mask transitions into sites above the level; absorbed rows stay zero
        block.topLeftCorner(level + 1, level + 1) =
            gen.entries.topLeftCorner(level + 1, level + 1);
        out.blocks.push_back(std::move(block));
    }
    return out;
}

SupJointKernel sup_joint_kernel(const SpatialGrid& grid, const CoefficientField& coeffs, double t,
                                Eigen::Index x0) {
    if (t < 0.0)
        throw std::invalid_argument("sup_joint_kernel: negative horizon");
    const Eigen::Index n = grid.size();
    if (x0 < 0 || x0 >= n)
        throw std::invalid_argument("sup_joint_kernel: start index off the grid");
    const SupBlocks blocks = sup_blocks(grid, coeffs);

    SupJointKernel out;
    out.grid = grid;
    out.t = t;
    out.x0 = x0;
    out.u = RealMatrix::Zero(n, n);

    // u(x0,y0; x',y') = delta(y'-y0) uhat(x0,x'; y0) + 1(y'>y0)(uhat(y') - uhat(y'-h))
    // with uhat(.,.; y) = exp(t block(y)) and y0 = x0.
    RealVector prev_row(n);
    for (Eigen::Index level = x0; level < n; ++level) {
        const RealMatrix k = matrix_exponential(RealMatrix(t * blocks.blocks[level]));
        const RealVector row = k.row(x0);
        if (level == x0)
            out.u.col(level) = row;
        else
            out.u.col(level) = row - prev_row;
        prev_row = row;
    }

    // telescoping marginal check against the unconstrained kernel row
    const GeneratorMatrix gen = diffusion_generator(grid, coeffs);
    const RealMatrix full = matrix_exponential(RealMatrix(t * gen.entries));
    const RealVector marginal = out.u.rowwise().sum();
    out.marginal_defect = (marginal - full.row(x0).transpose()).cwiseAbs().maxCoeff();
    return out;
}

RealMatrix lifted_sup_generator(const SpatialGrid& grid, const CoefficientField& coeffs) {
    const Eigen::Index n = grid.size();
    if (n > 32) {
        std::ostringstream os;
        os << "lifted_sup_generator: oracle-scale guard, grid has " << n << " > 32 points";
        throw GuardError(os.str());
    }
    const GeneratorMatrix gen = diffusion_generator(grid, coeffs);
    RealMatrix lifted = RealMatrix::Zero(n * n, n * n);
    for (Eigen::Index ix = 0; ix < n; ++ix) {
        for (Eigen::Index iy = 0; iy < n; ++iy) {
            for (Eigen::Index jx = 0; jx < n; ++jx) {
                const double rate = gen.entries(ix, jx);
                if (rate == 0.0)
                    continue;
                const Eigen::Index jy = jx < iy ? iy : jx; // the sup rides the position
                lifted(ix * n + iy, jx * n + jy) += rate;
            }
        }
    }
    return lifted;
}

std::pair<RealMatrix, RealMatrix> sup_transform(const SpatialGrid& grid) {
    const Eigen::Index n = grid.size();
    RealMatrix v = RealMatrix::Zero(n * n, n * n);
    RealMatrix v_inv = RealMatrix::Zero(n * n, n * n);
    for (Eigen::Index ix = 0; ix < n; ++ix) {
        for (Eigen::Index iy = 0; iy < n; ++iy) {
            for (Eigen::Index jy = iy; jy < n; ++jy)
                v(ix * n + iy, ix * n + jy) = 1.0;
            v_inv(ix * n + iy, ix * n + iy) = 1.0;
            if (iy + 1 < n)
                v_inv(ix * n + iy, ix * n + iy + 1) = -1.0;
        }
    }
    return {std::move(v), std::move(v_inv)};
}

RealMatrix one_period_propagator(const SpatialGrid& grid, const CoefficientField& coeffs,
                                 double period, const KernelMethod& method) {
    if (!(period > 0.0))
        throw std::invalid_argument("one_period_propagator: period must be positive");
    const GeneratorMatrix gen = diffusion_generator(grid, coeffs);
    if (method.kind == KernelMethod::Kind::Exact)
        return matrix_exponential(RealMatrix(period * gen.entries));

    double dt = method.dt;
    if (!(dt > 0.0)) {
        const double diag_min = gen.entries.diagonal().minCoeff();
        dt = method.safety * (-1.0 / diag_min);
    }
    const Eigen::Index n = grid.size();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(1.0 + dt * gen.entries(i, i) > 0.0))
            throw GuardError("one_period_propagator: Courant condition violated at x = " +
                             std::to_string(grid.point(i)));
    const RealMatrix transfer = RealMatrix::Identity(n, n) + dt * gen.entries;
    return matrix_power(transfer, static_cast<std::uint64_t>(num_steps(period, dt)));
}

ComplexMatrix dsum_slice_from_propagator(const RealMatrix& propagator, const RealMatrix& psi,
                                         Complex p) {
    if (propagator.rows() != psi.rows() || propagator.cols() != psi.cols())
        throw std::invalid_argument("dsum_slice: psi and propagator shapes differ");
    const Complex minus_i(0.0, -1.0);
    ComplexMatrix out(propagator.rows(), propagator.cols());
    for (Eigen::Index i = 0; i < propagator.rows(); ++i)
        for (Eigen::Index j = 0; j < propagator.cols(); ++j)
            out(i, j) = propagator(i, j) * std::exp(minus_i * p * psi(i, j));
    return out;
}

ComplexMatrix dsum_slice(const SpatialGrid& grid, const CoefficientField& coeffs,
                         const DiscreteSumSpec& spec, Complex p, const KernelMethod& method) {
    if (spec.psi.rows() != grid.size())
        throw std::invalid_argument("dsum_slice: psi does not match the grid");
    const RealMatrix propagator = one_period_propagator(grid, coeffs, spec.period, method);
    return dsum_slice_from_propagator(propagator, spec.psi, p);
}

JointKernelFT dsum_kernel(const SpatialGrid& grid, const CoefficientField& coeffs,
                          const DiscreteSumSpec& spec, const FrequencyGrid& freqs,
                          const KernelMethod& method) {
    if (spec.psi.rows() != grid.size())
        throw std::invalid_argument("dsum_kernel: psi does not match the grid");
    const RealMatrix propagator = one_period_propagator(grid, coeffs, spec.period, method);
    const double inv_h = 1.0 / grid.step();
    const auto periods = static_cast<std::uint64_t>(spec.periods);

    JointKernelFT out;
    out.grid = grid;
    out.freqs = freqs;
    out.t = spec.period * static_cast<double>(spec.periods);
    out.slices.resize(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const Complex p = freqs.value(i);
        KernelSlice slice;
        slice.z = p;
        slice.t = out.t;
        slice.method = method;
        slice.values = inv_h * matrix_power(dsum_slice_from_propagator(propagator, spec.psi, p),
                                            periods);
        out.slices[i] = std::move(slice);
    }

    if (freqs.uniform_real()) {
        double defect = 0.0;
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            const Complex p = freqs.value(i);
            for (std::size_t j = i; j < freqs.size(); ++j) {
                if (std::abs(freqs.value(j) + p) < 1e-14 * std::max(1.0, std::abs(p))) {
                    defect = std::max(defect,
                                      max_abs(ComplexMatrix(out.slices[j].values -
                                                            out.slices[i].values.conjugate())));
                    break;
                }
            }
        }
        out.hermitian_defect = defect;
    }
    return out;
}

} // namespace latkern
