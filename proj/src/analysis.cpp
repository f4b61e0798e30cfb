#include "latkern/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latkern/parallel.hpp"

namespace latkern {

double uniform_norm(const ComplexMatrix& kernel) {
    if (kernel.size() == 0)
        throw std::invalid_argument("uniform_norm: empty kernel");
    return max_abs(kernel);
}

double uniform_norm(const std::vector<ComplexMatrix>& family) {
    if (family.empty())
        throw std::invalid_argument("uniform_norm: empty family");
    double v = 0.0;
    for (const auto& k : family)
        v = std::max(v, uniform_norm(k));
    return v;
}

GraphNormReport graph_norm(const ComplexMatrix& kernel, const GeneratorMatrix& gen) {
    return graph_norm(std::vector<ComplexMatrix>{kernel}, gen);
}

GraphNormReport graph_norm(const std::vector<ComplexMatrix>& family, const GeneratorMatrix& gen) {
    if (family.empty())
        throw std::invalid_argument("graph_norm: empty family");
    const ComplexMatrix lc = gen.entries.cast<Complex>();
    GraphNormReport report;
    report.z_count = family.size();
    for (const auto& f : family) {
        if (f.rows() != lc.rows() || f.cols() != lc.cols())
            throw std::invalid_argument("graph_norm: kernel and generator dimensions differ");
        report.uniform = std::max(report.uniform, max_abs(f));
        report.gen_term = std::max(report.gen_term, max_abs(ComplexMatrix(lc * f)));
        report.adj_term = std::max(report.adj_term, max_abs(ComplexMatrix(f * lc)));
    }
    report.total = report.uniform + report.gen_term + report.adj_term;
    return report;
}

ComplexMatrix restrict_to_coarse(const SpatialGrid& fine, const ComplexMatrix& values,
                                 const SpatialGrid& coarse) {
    if (fine.level() != coarse.level() + 1 || fine.half_width() != coarse.half_width())
        throw std::invalid_argument("restrict_to_coarse: grids are not consecutive levels");
    if (values.rows() != fine.size() || values.cols() != fine.size())
        throw std::invalid_argument("restrict_to_coarse: kernel does not match the fine grid");
    const Eigen::Index n = coarse.size();
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = values(2 * i, 2 * j);
    return out;
}

FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_loglog: need at least two points");
    const std::size_t n = xs.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw std::invalid_argument("fit_loglog: all values must be positive");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / static_cast<double>(n));
    return fit;
}

ConvergenceReport convergence_rate(const std::vector<SpatialGrid>& grids,
                                   const std::vector<std::vector<ComplexMatrix>>& kernels,
                                   const std::vector<GeneratorMatrix>& gens) {
    const std::size_t levels = grids.size();
    if (levels < 3)
        throw std::invalid_argument("convergence_rate: need at least 3 consecutive levels");
    if (kernels.size() != levels || gens.size() != levels)
        throw std::invalid_argument("convergence_rate: per-level inputs of unequal length");

    ConvergenceReport report;
    for (std::size_t i = 0; i + 1 < levels; ++i) {
        const std::size_t nz = kernels[i].size();
        if (kernels[i + 1].size() != nz)
            throw std::invalid_argument("convergence_rate: families must share the z samples");
        std::vector<ComplexMatrix> diffs;
        diffs.reserve(nz);
        for (std::size_t k = 0; k < nz; ++k)
            diffs.push_back(restrict_to_coarse(grids[i + 1], kernels[i + 1][k], grids[i]) -
                            kernels[i][k]);
        report.gaps.push_back(graph_norm(diffs, gens[i]).total);
        report.coarse_steps.push_back(grids[i].step());
        report.levels.push_back(grids[i].level());
    }
    const FitResult fit = fit_loglog(report.coarse_steps, report.gaps);
    report.fitted_rate = fit.slope;
    report.fit_residual = fit.residual;
    return report;
}

double analyticity_residual(const std::function<Complex(Complex)>& sampler, Complex center,
                            double radius, std::size_t quadrature_points) {
    if (!(radius > 0.0))
        throw std::invalid_argument("analyticity_residual: radius must be positive");
    if (quadrature_points < 16)
        throw std::invalid_argument("analyticity_residual: need at least 16 quadrature points");
    Complex mean(0.0, 0.0);
    for (std::size_t q = 0; q < quadrature_points; ++q) {
        const double theta = 2.0 * M_PI * static_cast<double>(q) / static_cast<double>(quadrature_points);
        mean += sampler(center + radius * Complex(std::cos(theta), std::sin(theta)));
    }
    mean /= static_cast<double>(quadrature_points);
    return std::abs(sampler(center) - mean);
}

std::vector<Complex> disc_samples(double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("disc_samples: radius must be positive");
    std::vector<Complex> zs = {
        {0.0, 0.0},           {radius / 2.0, 0.0},  {-radius / 2.0, 0.0},
        {radius, 0.0},        {-radius, 0.0},       {0.0, radius / 2.0},
        {0.0, -radius / 2.0}, {0.0, radius},        {0.0, -radius},
    };
    for (int q = 0; q < 8; ++q) {
        const double theta = 2.0 * M_PI * static_cast<double>(q) / 8.0;
        zs.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
    }
    std::sort(zs.begin(), zs.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    const double tol = 1e-12 * radius;
    zs.erase(std::unique(zs.begin(), zs.end(),
                         [tol](Complex a, Complex b) { return std::abs(a - b) <= tol; }),
             zs.end());
    return zs;
}

ConvergenceReport convergence_experiment(const CoefficientRecipe& recipe, double half_width,
                                         const std::vector<int>& levels, double t,
                                         double disc_radius, const KernelMethod& method) {
    if (levels.size() < 3)
        throw std::invalid_argument("convergence_experiment: need at least 3 levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] != levels[i - 1] + 1)
            throw std::invalid_argument("convergence_experiment: levels must be consecutive");

    const std::vector<Complex> zs = disc_samples(disc_radius);
    std::vector<SpatialGrid> grids;
    std::vector<GeneratorMatrix> gens;
    std::vector<std::vector<ComplexMatrix>> kernels(levels.size());
    for (std::size_t li = 0; li < levels.size(); ++li) {
        const SpatialGrid grid(levels[li], half_width);
        const CoefficientField coeffs = CoefficientField::sample(recipe, grid);
        gens.push_back(diffusion_generator(grid, coeffs));

        std::vector<FourierSlice> slices;
        slices.reserve(zs.size());
        for (const Complex z : zs)
            slices.push_back(fourier_slice(grid, coeffs, z));

        EulerScheme scheme;
        if (method.kind == KernelMethod::Kind::Euler) {
            scheme.safety = method.safety;
            scheme.dt = method.dt > 0.0 ? method.dt : courant_max_step(slices, method.safety);
            scheme.steps = num_steps(t, scheme.dt);
        }

        kernels[li].resize(zs.size());
        parallel_indexed(zs.size(), [&](std::size_t zi) {
            kernels[li][zi] = method.kind == KernelMethod::Kind::Exact
                                  ? exact_kernel(slices[zi], t).values
                                  : euler_kernel(slices[zi], t, scheme).values;
        });
        grids.push_back(grid);
    }

    ConvergenceReport report = convergence_rate(grids, kernels, gens);
    report.t = t;
    report.disc_radius = disc_radius;
    report.z_count = zs.size();
    report.coefficients = describe_recipe(recipe);
    report.method = method.kind == KernelMethod::Kind::Exact ? "exact" : "euler";
    return report;
}

ConvergenceReport euler_gap_experiment(const CoefficientRecipe& recipe, double half_width,
                                       const std::vector<int>& levels, double t,
                                       double disc_radius, double safety) {
    if (levels.size() < 2)
        throw std::invalid_argument("euler_gap_experiment: need at least 2 levels");
    const std::vector<Complex> zs = disc_samples(disc_radius);

    ConvergenceReport report;
    for (const int m : levels) {
        const SpatialGrid grid(m, half_width);
        const CoefficientField coeffs = CoefficientField::sample(recipe, grid);
        const GeneratorMatrix gen = diffusion_generator(grid, coeffs);

        std::vector<FourierSlice> slices;
        slices.reserve(zs.size());
        for (const Complex z : zs)
            slices.push_back(fourier_slice(grid, coeffs, z));

        EulerScheme scheme;
        scheme.safety = safety;
        scheme.dt = courant_max_step(slices, safety);
        scheme.steps = num_steps(t, scheme.dt);

        std::vector<ComplexMatrix> diffs(zs.size());
        parallel_indexed(zs.size(), [&](std::size_t zi) {
            diffs[zi] = euler_kernel(slices[zi], t, scheme).values -
                        exact_kernel(slices[zi], t).values;
        });
        report.gaps.push_back(graph_norm(diffs, gen).total);
        report.coarse_steps.push_back(grid.step());
        report.levels.push_back(m);
    }
    const FitResult fit = fit_loglog(report.coarse_steps, report.gaps);
    report.fitted_rate = fit.slope;
    report.fit_residual = fit.residual;
    report.t = t;
    report.disc_radius = disc_radius;
    report.z_count = zs.size();
    report.coefficients = describe_recipe(recipe);
    report.method = "euler_vs_exact";
    return report;
}

} // namespace latkern
