#include "latkern/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace latkern {

namespace {
constexpr int kMaxLevel = 29; // 2^(m+1) must stay inside a 32-bit count
}

SpatialGrid::SpatialGrid(int m, double half_width) : m_(m), half_width_(half_width) {
    if (half_width <= 0.0)
        throw std::invalid_argument("SpatialGrid: half width must be positive, got " +
                                    std::to_string(half_width));
    if (m < 0)
        throw std::invalid_argument("SpatialGrid: refinement level must be >= 0, got " +
                                    std::to_string(m));
    if (m > kMaxLevel)
        throw std::invalid_argument("SpatialGrid: refinement level " + std::to_string(m) +
                                    " gives 2^" + std::to_string(m + 1) +
                                    " points, beyond supported sizing");
    step_ = half_width * std::ldexp(1.0, -m);
    const std::size_t n = std::size_t{1} << (m + 1);
    points_.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        points_[k] = -half_width + static_cast<double>(k) * step_;
}

Eigen::Index SpatialGrid::index_of(double x) const {
    const double offset = (x - points_.front()) / step_;
    const auto nearest = static_cast<Eigen::Index>(std::llround(offset));
    if (std::abs(offset - static_cast<double>(nearest)) > 1e-9)
        throw std::invalid_argument("SpatialGrid: coordinate " + std::to_string(x) +
                                    " is not a lattice site");
    return wrap(nearest);
}

SpatialGrid build_spatial_grid(int m, double half_width) {
    return SpatialGrid(m, half_width);
}

FrequencyGrid FrequencyGrid::inverse_lattice(int n, double half_width) {
    if (half_width <= 0.0)
        throw std::invalid_argument("FrequencyGrid: half width must be positive");
    if (n < 0 || n > kMaxLevel)
        throw std::invalid_argument("FrequencyGrid: level out of range: " + std::to_string(n));
    // step pi/L_y; the window edge pi/h_yn with h_yn = L_y 2^-n gives 2^(n+1)
    // frequencies on [-pi/h, pi/h), j = -2^n .. 2^n - 1.
    FrequencyGrid g;
    const double hat_h = M_PI / half_width;
    const long j_max = 1L << n;
    g.values_.reserve(static_cast<std::size_t>(2 * j_max));
    for (long j = -j_max; j < j_max; ++j)
        g.values_.emplace_back(static_cast<double>(j) * hat_h, 0.0);
    g.uniform_real_ = true;
    g.spacing_ = hat_h;
    return g;
}

FrequencyGrid FrequencyGrid::uniform_window(double p_max, std::size_t count) {
    if (p_max <= 0.0)
        throw std::invalid_argument("FrequencyGrid: window edge must be positive");
    if (count < 3 || count % 2 == 0)
        throw std::invalid_argument("FrequencyGrid: window needs an odd count >= 3");
    FrequencyGrid g;
    const auto half = static_cast<long>(count / 2);
    const double dp = p_max / static_cast<double>(half);
    g.values_.reserve(count);
    for (long j = -half; j <= half; ++j)
        g.values_.emplace_back(static_cast<double>(j) * dp, 0.0);
    g.uniform_real_ = true;
    g.spacing_ = dp;
    return g;
}

FrequencyGrid FrequencyGrid::explicit_list(std::vector<Complex> values) {
    if (values.empty())
        throw std::invalid_argument("FrequencyGrid: explicit list is empty");
    FrequencyGrid g;
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    values.erase(std::unique(values.begin(), values.end()), values.end());
    g.values_ = std::move(values);
    return g;
}

FrequencyGrid build_frequency_grid(int n, double half_width) {
    return FrequencyGrid::inverse_lattice(n, half_width);
}

GridFunction::GridFunction(SpatialGrid g, ComplexVector v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("GridFunction: value count does not match grid size");
}

GridFunction central_difference(const GridFunction& f) {
    const Eigen::Index n = f.grid.size();
    const double two_h = 2.0 * f.grid.step();
    ComplexVector out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = (f.values[f.grid.wrap(i + 1)] - f.values[f.grid.wrap(i - 1)]) / two_h;
    return {f.grid, std::move(out)};
}

GridFunction second_difference(const GridFunction& f) {
    const Eigen::Index n = f.grid.size();
    const double h2 = f.grid.step() * f.grid.step();
    ComplexVector out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = (f.values[f.grid.wrap(i + 1)] + f.values[f.grid.wrap(i - 1)] - 2.0 * f.values[i]) / h2;
    return {f.grid, std::move(out)};
}

GridFunction forward_difference(const GridFunction& f) {
    const Eigen::Index n = f.grid.size();
    const double h = f.grid.step();
    ComplexVector out(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out[i] = (f.values[f.grid.wrap(i + 1)] - f.values[i]) / h;
    return {f.grid, std::move(out)};
}

} // namespace latkern
