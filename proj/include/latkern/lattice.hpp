#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "latkern/linalg.hpp"

namespace latkern {

/// Periodic dyadic lattice on [-L, L) with 2^(m+1) sites; -L and +L are the
/// same site, index arithmetic wraps modulo the point count.
class SpatialGrid {
public:
    SpatialGrid() = default;
    SpatialGrid(int m, double half_width);

    int level() const { return m_; }
    double half_width() const { return half_width_; }
    double step() const { return step_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(points_.size()); }
    const std::vector<double>& points() const { return points_; }
    double point(Eigen::Index i) const { return points_[static_cast<std::size_t>(i)]; }

    /// Index arithmetic modulo the point count (accepts negatives).
    Eigen::Index wrap(Eigen::Index i) const {
        const Eigen::Index n = size();
        Eigen::Index r = i % n;
        return r < 0 ? r + n : r;
    }

    /// Index of the site nearest to x; throws if x is off-lattice by more
    /// than a small fraction of the step.
    Eigen::Index index_of(double x) const;

    bool operator==(const SpatialGrid& other) const {
        return m_ == other.m_ && half_width_ == other.half_width_;
    }

private:
    int m_ = 0;
    double half_width_ = 0.0;
    double step_ = 0.0;
    std::vector<double> points_;
};

SpatialGrid build_spatial_grid(int m, double half_width);

/// A finite frequency set: either the inverse lattice of a dyadic y-grid,
/// a closed symmetric uniform window, or an arbitrary explicit list of
/// (possibly complex) frequencies.
class FrequencyGrid {
public:
    FrequencyGrid() = default;

    const std::vector<Complex>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    Complex value(std::size_t i) const { return values_[i]; }

    /// True when built as a uniform real grid (inverse lattice or window).
    bool uniform_real() const { return uniform_real_; }
    double spacing() const { return spacing_; }

    static FrequencyGrid inverse_lattice(int n, double half_width);
    static FrequencyGrid uniform_window(double p_max, std::size_t count);
    static FrequencyGrid explicit_list(std::vector<Complex> values);

private:
    std::vector<Complex> values_;
    bool uniform_real_ = false;
    double spacing_ = 0.0;
};

FrequencyGrid build_frequency_grid(int n, double half_width);

/// Sampled function on a spatial grid, one value per site.
struct GridFunction {
    SpatialGrid grid;
    ComplexVector values;

    GridFunction() = default;
    GridFunction(SpatialGrid g, ComplexVector v);
};

GridFunction central_difference(const GridFunction& f);
GridFunction second_difference(const GridFunction& f);
GridFunction forward_difference(const GridFunction& f);

} // namespace latkern
