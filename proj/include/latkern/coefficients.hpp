#pragma once

#include <string>
#include <vector>

#include "latkern/lattice.hpp"

namespace latkern {

/// Recipe for one scalar coefficient, evaluable on any grid. Families:
///   constant         v(x) = c
///   affine_clipped   v(x) = clamp(intercept + slope*x, lo, hi)
///   sinusoid         v(x) = offset + amplitude*sin(frequency*pi*x/L + phase)
///   tabulated        samples on X_level, linear interpolation with wrap
struct ScalarRecipe {
    enum class Kind { Constant, AffineClipped, Sinusoid, Tabulated };

    Kind kind = Kind::Constant;
    double constant = 0.0;
    double intercept = 0.0, slope = 0.0;
    double lo = 0.0, hi = 0.0;
    double offset = 0.0, amplitude = 0.0, frequency = 1.0, phase = 0.0;
    int table_level = 0;
    std::vector<double> table;

    double eval(double x, double half_width) const;
    std::string describe() const;

    static ScalarRecipe make_constant(double c);
    static ScalarRecipe affine_clipped(double intercept, double slope, double lo, double hi);
    static ScalarRecipe sinusoid(double offset, double amplitude, double frequency, double phase);
    static ScalarRecipe tabulated(int level, std::vector<double> samples);
};

/// The four coefficient recipes of a joint process.
struct CoefficientRecipe {
    ScalarRecipe sigma2 = ScalarRecipe::make_constant(1.0);
    ScalarRecipe mu = ScalarRecipe::make_constant(0.0);
    ScalarRecipe a = ScalarRecipe::make_constant(0.0);
    ScalarRecipe b = ScalarRecipe::make_constant(0.0);
};

std::string describe_recipe(const CoefficientRecipe& recipe);

/// The standing smooth test field: sigma^2 = 1 + 0.2 sin(pi x/L),
/// mu = 0.1 cos(pi x/L), a = sin(pi x/L), b = cos(pi x/L).
CoefficientRecipe smooth_family();

/// Same x-dynamics as smooth_family but b = 0 (pure dx integrand).
CoefficientRecipe smooth_family_dx_only();

/// Coefficients sampled on a grid: variance rate sigma2 (> 0 everywhere),
/// drift mu, integrands a (dx term) and b (dt term), and the primitive B of b.
class CoefficientField {
public:
    CoefficientField(SpatialGrid grid, RealVector sigma2, RealVector mu,
                     RealVector a, RealVector b);

    static CoefficientField sample(const CoefficientRecipe& recipe, const SpatialGrid& grid);

    const SpatialGrid& grid() const { return grid_; }
    const RealVector& sigma2() const { return sigma2_; }
    const RealVector& mu() const { return mu_; }
    const RealVector& a() const { return a_; }
    const RealVector& b() const { return b_; }
    const RealVector& b_primitive() const { return B_; }

    /// Positive lower bound Sigma_0 <= min_x sigma(x).
    double sigma_lower_bound() const { return sigma0_; }

private:
    SpatialGrid grid_;
    RealVector sigma2_, mu_, a_, b_, B_;
    double sigma0_ = 0.0;
};

} // namespace latkern
