#include "latkern/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace latkern {

double ScalarRecipe::eval(double x, double half_width) const {
    switch (kind) {
    case Kind::Constant:
        return constant;
    case Kind::AffineClipped:
        return std::clamp(intercept + slope * x, lo, hi);
    case Kind::Sinusoid:
        return offset + amplitude * std::sin(frequency * M_PI * x / half_width + phase);
    case Kind::Tabulated: {
        const auto n = static_cast<long>(table.size());
        const double h_tab = 2.0 * half_width / static_cast<double>(n);
        double t = (x + half_width) / h_tab;
        auto k = static_cast<long>(std::floor(t));
        const double frac = t - static_cast<double>(k);
        k %= n;
        if (k < 0) k += n;
        const long k1 = (k + 1) % n;
        return (1.0 - frac) * table[static_cast<std::size_t>(k)] +
               frac * table[static_cast<std::size_t>(k1)];
    }
    }
    throw std::logic_error("ScalarRecipe: unknown kind");
}

std::string ScalarRecipe::describe() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::Constant:
        os << "constant " << constant;
        break;
    case Kind::AffineClipped:
        os << "affine_clipped " << intercept << " " << slope << " " << lo << " " << hi;
        break;
    case Kind::Sinusoid:
        os << "sinusoid " << offset << " " << amplitude << " " << frequency << " " << phase;
        break;
    case Kind::Tabulated:
        os << "tabulated level=" << table_level << " n=" << table.size();
        break;
    }
    return os.str();
}

ScalarRecipe ScalarRecipe::make_constant(double c) {
    ScalarRecipe r;
    r.kind = Kind::Constant;
    r.constant = c;
    return r;
}

ScalarRecipe ScalarRecipe::affine_clipped(double intercept, double slope, double lo, double hi) {
    if (lo > hi)
        throw std::invalid_argument("ScalarRecipe: empty clip interval");
    ScalarRecipe r;
    r.kind = Kind::AffineClipped;
    r.intercept = intercept;
    r.slope = slope;
    r.lo = lo;
    r.hi = hi;
    return r;
}

ScalarRecipe ScalarRecipe::sinusoid(double offset, double amplitude, double frequency, double phase) {
    ScalarRecipe r;
    r.kind = Kind::Sinusoid;
    r.offset = offset;
    r.amplitude = amplitude;
    r.frequency = frequency;
    r.phase = phase;
    return r;
}

ScalarRecipe ScalarRecipe::tabulated(int level, std::vector<double> samples) {
    const std::size_t expected = std::size_t{1} << (level + 1);
    if (level < 0 || samples.size() != expected)
        throw std::invalid_argument("ScalarRecipe: table must hold 2^(level+1) samples");
    ScalarRecipe r;
    r.kind = Kind::Tabulated;
    r.table_level = level;
    r.table = std::move(samples);
    return r;
}

std::string describe_recipe(const CoefficientRecipe& recipe) {
    return "sigma2: " + recipe.sigma2.describe() + "; mu: " + recipe.mu.describe() +
           "; a: " + recipe.a.describe() + "; b: " + recipe.b.describe();
}

CoefficientRecipe smooth_family() {
    CoefficientRecipe r;
    r.sigma2 = ScalarRecipe::sinusoid(1.0, 0.2, 1.0, 0.0);
    r.mu = ScalarRecipe::sinusoid(0.0, 0.1, 1.0, M_PI / 2.0); // 0.1 cos(pi x/L)
    r.a = ScalarRecipe::sinusoid(0.0, 1.0, 1.0, 0.0);
    r.b = ScalarRecipe::sinusoid(0.0, 1.0, 1.0, M_PI / 2.0); // cos(pi x/L)
    return r;
}

CoefficientRecipe smooth_family_dx_only() {
    CoefficientRecipe r = smooth_family();
    r.b = ScalarRecipe::make_constant(0.0);
    return r;
}

CoefficientField::CoefficientField(SpatialGrid grid, RealVector sigma2, RealVector mu,
                                   RealVector a, RealVector b)
    : grid_(std::move(grid)),
      sigma2_(std::move(sigma2)),
      mu_(std::move(mu)),
      a_(std::move(a)),
      b_(std::move(b)) {
    const Eigen::Index n = grid_.size();
    if (sigma2_.size() != n || mu_.size() != n || a_.size() != n || b_.size() != n)
        throw std::invalid_argument("CoefficientField: array lengths must match the grid");
    const double min_sigma2 = sigma2_.minCoeff();
    if (!(min_sigma2 > 0.0))
        throw std::invalid_argument("CoefficientField: sigma^2 must be positive everywhere, min is " +
                                    std::to_string(min_sigma2));
    sigma0_ = std::sqrt(min_sigma2);

    // primitive B(x) = integral of b from 0 to x, trapezoid along the grid
    B_.resize(n);
    const Eigen::Index i0 = grid_.index_of(0.0);
    const double h = grid_.step();
    B_[i0] = 0.0;
    for (Eigen::Index i = i0 + 1; i < n; ++i)
        B_[i] = B_[i - 1] + 0.5 * h * (b_[i - 1] + b_[i]);
    for (Eigen::Index i = i0 - 1; i >= 0; --i)
        B_[i] = B_[i + 1] - 0.5 * h * (b_[i] + b_[i + 1]);
}

CoefficientField CoefficientField::sample(const CoefficientRecipe& recipe, const SpatialGrid& grid) {
    const Eigen::Index n = grid.size();
    const double L = grid.half_width();
    RealVector s2(n), mu(n), a(n), b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = grid.point(i);
        s2[i] = recipe.sigma2.eval(x, L);
        mu[i] = recipe.mu.eval(x, L);
        a[i] = recipe.a.eval(x, L);
        b[i] = recipe.b.eval(x, L);
    }
    return CoefficientField(grid, std::move(s2), std::move(mu), std::move(a), std::move(b));
}

} // namespace latkern
