#include "latkern/oracles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "latkern/errors.hpp"

namespace latkern {

double PathEnumeration::total_mass() const {
    double m = 0.0;
    for (const auto& o : outcomes)
        m += o.weight;
    return m;
}

std::map<std::pair<Eigen::Index, long long>, double> PathEnumeration::merged() const {
    std::map<std::pair<Eigen::Index, long long>, double> table;
    for (const auto& o : outcomes)
        table[{o.x, std::llround(o.y / 1e-12)}] += o.weight;
    return table;
}

PathEnumeration enumerate_euler_paths(const SpatialGrid& grid, const CoefficientField& coeffs,
                                      double dt, long long steps, Eigen::Index x0) {
    if (!(dt > 0.0))
        throw std::invalid_argument("enumerate_euler_paths: dt must be positive");
    if (steps < 0)
        throw std::invalid_argument("enumerate_euler_paths: negative step count");
    if (x0 < 0 || x0 >= grid.size())
        throw std::invalid_argument("enumerate_euler_paths: start index off the grid");
    const double work = std::pow(static_cast<double>(grid.size()), static_cast<double>(steps));
    if (work > 1e7) {
        std::ostringstream os;
        os << "enumerate_euler_paths: work guard exceeded, " << grid.size() << "^" << steps
           << " > 1e7";
        throw GuardError(os.str());
    }

    const Eigen::Index n = grid.size();
    const double h = grid.step();
    RealVector up(n), down(n), stay(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double diffusive = coeffs.sigma2()[i] / (2.0 * h * h);
        const double drift = coeffs.mu()[i] / (2.0 * h);
        up[i] = dt * (diffusive + drift);
        down[i] = dt * (diffusive - drift);
        stay[i] = 1.0 - up[i] - down[i];
        if (!(up[i] > 0.0 && down[i] > 0.0))
            throw GuardError("enumerate_euler_paths: refinement too coarse at x = " +
                             std::to_string(grid.point(i)));
        if (!(stay[i] > 0.0))
            throw GuardError("enumerate_euler_paths: Courant condition violated at x = " +
                             std::to_string(grid.point(i)));
    }

    PathEnumeration out;
    out.grid = grid;
    out.dt = dt;
    out.steps = steps;
    out.x0 = x0;
    out.outcomes.reserve(static_cast<std::size_t>(std::min(work, 4e6)));

    struct Frame {
        Eigen::Index x;
        double y;
        double weight;
        long long depth;
    };
    // depth-first product over the three moves per step
    std::vector<Frame> stack;
    stack.push_back({x0, 0.0, 1.0, 0});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.depth == steps) {
            out.outcomes.push_back({f.x, f.y, f.weight});
            continue;
        }
        const double b_dt = coeffs.b()[f.x] * dt;
        const double a_h = coeffs.a()[f.x] * h;
        stack.push_back({grid.wrap(f.x + 1), f.y + a_h + b_dt, f.weight * up[f.x], f.depth + 1});
        stack.push_back({grid.wrap(f.x - 1), f.y - a_h + b_dt, f.weight * down[f.x], f.depth + 1});
        stack.push_back({f.x, f.y + b_dt, f.weight * stay[f.x], f.depth + 1});
    }
    return out;
}

ComplexVector characteristic_sum(const PathEnumeration& paths, Complex z) {
    const Complex minus_i(0.0, -1.0);
    ComplexVector acc = ComplexVector::Zero(paths.grid.size());
    for (const auto& o : paths.outcomes)
        acc[o.x] += o.weight * std::exp(minus_i * z * o.y);
    return acc;
}

double periodic_heat_kernel(double sigma, double t, double x, double x_prime, double half_width,
                            int images) {
    if (!(sigma > 0.0) || !(t > 0.0))
        throw std::invalid_argument("periodic_heat_kernel: sigma and t must be positive");
    if (images < 3)
        throw std::invalid_argument("periodic_heat_kernel: need at least 3 images");
    const double var = sigma * sigma * t;
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * var);
    double sum = 0.0;
    for (int k = -images; k <= images; ++k) {
        const double d = x_prime - x + 2.0 * static_cast<double>(k) * half_width;
        sum += norm * std::exp(-d * d / (2.0 * var));
    }
    return sum;
}

double bm_sup_density(double t, double x, double y, double x0, double sigma) {
    if (!(t > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("bm_sup_density: t and sigma must be positive");
    const double xs = x - x0;
    const double ys = y - x0;
    if (ys < 0.0 || ys < xs)
        return 0.0;
    const double s2t = sigma * sigma * t;
    const double arg = 2.0 * ys - xs;
    return 2.0 * arg / (s2t * std::sqrt(2.0 * M_PI * s2t)) * std::exp(-arg * arg / (2.0 * s2t));
}

Complex constant_coeff_char(double a, double b, double sigma2, double mu, Complex p, double t,
                            double x, double x_prime) {
    if (!(sigma2 > 0.0) || !(t > 0.0))
        throw std::invalid_argument("constant_coeff_char: sigma2 and t must be positive");
    const double dx = x_prime - x;
    const double var = sigma2 * t;
    const double gauss = std::exp(-(dx - mu * t) * (dx - mu * t) / (2.0 * var)) /
                         std::sqrt(2.0 * M_PI * var);
    const Complex minus_i(0.0, -1.0);
    return std::exp(minus_i * p * (a * dx + b * t)) * gauss;
}

} // namespace latkern
