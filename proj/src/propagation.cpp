#include "latkern/propagation.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "latkern/errors.hpp"
#include "latkern/parallel.hpp"

namespace latkern {

KernelMethod KernelMethod::euler_auto(double safety) {
    KernelMethod m;
    m.kind = Kind::Euler;
    m.safety = safety;
    return m;
}

KernelMethod KernelMethod::euler_fixed(double dt) {
    KernelMethod m;
    m.kind = Kind::Euler;
    m.dt = dt;
    return m;
}

double courant_max_step(const std::vector<FourierSlice>& slices, double safety) {
    if (slices.empty())
        throw std::invalid_argument("courant_max_step: empty slice list");
    if (!(safety > 0.0 && safety <= 1.0))
        throw std::invalid_argument("courant_max_step: safety must lie in (0, 1]");
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& s : slices) {
        for (Eigen::Index i = 0; i < s.entries.rows(); ++i) {
            const double re = s.entries(i, i).real();
            if (re < 0.0)
                bound = std::min(bound, -1.0 / re);
        }
    }
    return std::isinf(bound) ? bound : safety * bound;
}

long long num_steps(double t, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("num_steps: dt must be positive");
    if (t < 0.0)
        throw std::invalid_argument("num_steps: negative horizon");
    const double ratio = t / dt;
    return static_cast<long long>(std::floor(ratio + 1e-9 * std::max(1.0, ratio)));
}

ComplexMatrix euler_transfer(const FourierSlice& slice, double dt) {
    if (dt < 0.0)
        throw std::invalid_argument("euler_transfer: dt must be >= 0");
    const Eigen::Index n = slice.entries.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = 1.0 + dt * slice.entries(i, i).real();
        if (!(re > 0.0)) {
            std::ostringstream os;
            os << "Courant condition violated: Re(1 + dt L(x,x)) = " << re << " at x = "
               << slice.grid.point(i) << " (dt = " << dt << ", diag = " << slice.entries(i, i).real()
               << (slice.entries(i, i).imag() >= 0 ? "+" : "") << slice.entries(i, i).imag() << "i)";
            throw GuardError(os.str());
        }
    }
    return ComplexMatrix::Identity(n, n) + dt * slice.entries;
}

namespace {

template <typename Matrix>
Matrix matrix_power_impl(const Matrix& m, std::uint64_t n) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("matrix_power: matrix must be square");
    Matrix result = Matrix::Identity(m.rows(), m.cols());
    if (n == 0)
        return result;
    Matrix base = m;
    for (;;) {
        if (n & 1u)
            result = result * base;
        n >>= 1u;
        if (n == 0)
            break;
        base = base * base;
    }
    return result;
}

template <typename Matrix>
Matrix matrix_exponential_impl(const Matrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("matrix_exponential: matrix must be square");
    const Eigen::Index n = a.rows();
    const double nrm = inf_norm(a);
    constexpr double theta = 0.25;
    int squarings = 0;
    if (nrm > theta)
        squarings = static_cast<int>(std::ceil(std::log2(nrm / theta)));
    const double scale = std::ldexp(1.0, -squarings);
    const Matrix b = a * scale;

    Matrix result = Matrix::Identity(n, n);
    Matrix term = b;
    for (int k = 1; k <= 40; ++k) {
        result += term;
        if (inf_norm(term) <= 1e-16 * inf_norm(result))
            break;
        term = (term * b) / static_cast<double>(k + 1);
    }
    for (int s = 0; s < squarings; ++s)
        result = result * result;
    return result;
}

} // namespace

ComplexMatrix matrix_power(const ComplexMatrix& m, std::uint64_t n) {
    return matrix_power_impl(m, n);
}

RealMatrix matrix_power(const RealMatrix& m, std::uint64_t n) {
    return matrix_power_impl(m, n);
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
    return matrix_exponential_impl(a);
}

RealMatrix matrix_exponential(const RealMatrix& a) {
    return matrix_exponential_impl(a);
}

KernelSlice exact_kernel(const FourierSlice& slice, double t) {
    if (t < 0.0)
        throw std::invalid_argument("exact_kernel: negative horizon");
    const double inv_h = 1.0 / slice.grid.step();
    KernelSlice out;
    out.z = slice.z;
    out.t = t;
    out.method = KernelMethod::exact();
    if (t == 0.0) {
        out.values = inv_h * ComplexMatrix::Identity(slice.entries.rows(), slice.entries.cols());
    } else {
        out.values = inv_h * matrix_exponential(ComplexMatrix(t * slice.entries));
    }
    return out;
}

KernelSlice euler_kernel(const FourierSlice& slice, double t, const EulerScheme& scheme) {
    if (t < 0.0)
        throw std::invalid_argument("euler_kernel: negative horizon");
    const ComplexMatrix transfer = euler_transfer(slice, scheme.dt);
    const long long steps = num_steps(t, scheme.dt);
    const double inv_h = 1.0 / slice.grid.step();
    KernelSlice out;
    out.z = slice.z;
    out.t = t;
    out.method = KernelMethod::euler_fixed(scheme.dt);
    out.method.steps = steps;
    out.method.safety = scheme.safety;
    out.values = inv_h * matrix_power(transfer, static_cast<std::uint64_t>(steps));
    return out;
}

JointKernelFT joint_kernel(const SpatialGrid& grid, const CoefficientField& coeffs, double t,
                           const FrequencyGrid& freqs, const KernelMethod& method) {
    if (freqs.size() == 0)
        throw std::invalid_argument("joint_kernel: empty frequency grid");
    std::vector<FourierSlice> slices;
    slices.reserve(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i)
        slices.push_back(fourier_slice(grid, coeffs, freqs.value(i)));

    EulerScheme scheme;
    if (method.kind == KernelMethod::Kind::Euler) {
        scheme.safety = method.safety;
        scheme.dt = method.dt > 0.0 ? method.dt : courant_max_step(slices, method.safety);
        if (std::isinf(scheme.dt))
            throw GuardError("joint_kernel: no Courant constraint, explicit stepping needs a dt");
        scheme.steps = num_steps(t, scheme.dt);
    }

    JointKernelFT out;
    out.grid = grid;
    out.freqs = freqs;
    out.t = t;
    out.slices.resize(freqs.size());
    parallel_indexed(freqs.size(), [&](std::size_t i) {
        out.slices[i] = method.kind == KernelMethod::Kind::Exact
                            ? exact_kernel(slices[i], t)
                            : euler_kernel(slices[i], t, scheme);
    });

    // Hermitian p-symmetry across p -> -p holds for real coefficient fields;
    // record the defect instead of symmetrizing.
    if (freqs.uniform_real()) {
        double defect = 0.0;
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            const Complex p = freqs.value(i);
            for (std::size_t j = i; j < freqs.size(); ++j) {
                if (std::abs(freqs.value(j) + p) < 1e-14 * std::max(1.0, std::abs(p))) {
                    defect = std::max(
                        defect, max_abs(ComplexMatrix(out.slices[j].values -
                                                      out.slices[i].values.conjugate())));
                    break;
                }
            }
        }
        out.hermitian_defect = defect;
    }
    return out;
}

std::vector<double> dual_offsets(const FrequencyGrid& freqs) {
    if (!freqs.uniform_real() || freqs.size() < 3)
        throw std::invalid_argument("dual_offsets: needs a uniform real frequency grid");
    const auto q = static_cast<long>(freqs.size());
    const double dy = 2.0 * M_PI / (static_cast<double>(q) * freqs.spacing());
    std::vector<double> offsets;
    offsets.reserve(freqs.size());
    const long half = q / 2;
    for (long k = -half; k <= half - (q % 2 == 0 ? 1 : 0); ++k)
        offsets.push_back(static_cast<double>(k) * dy);
    return offsets;
}

JointDensity reconstruct_joint_density(const JointKernelFT& ft, const std::vector<double>& offsets) {
    const std::size_t q = ft.freqs.size();
    if (!ft.freqs.uniform_real() || q < 3)
        throw std::invalid_argument("reconstruct_joint_density: non-uniform frequency grid");
    const Complex first = ft.freqs.value(0);
    const Complex last = ft.freqs.value(q - 1);
    if (std::abs(first + last) > 1e-12 * std::abs(last))
        throw std::invalid_argument("reconstruct_joint_density: frequency window is not symmetric");

    const Eigen::Index n = ft.grid.size();
    JointDensity out;
    out.grid = ft.grid;
    out.offsets = offsets;
    out.t = ft.t;
    out.values.assign(offsets.size(), RealMatrix::Zero(n, n));
    out.offset_weight = 2.0 * M_PI / (static_cast<double>(q) * ft.freqs.spacing());

    // trapezoid weights h_p [1/2, 1, ..., 1, 1/2] / (2 pi), inverse phase e^{+ip dy}
    const double base_w = ft.freqs.spacing() / (2.0 * M_PI);
    double residual = 0.0;
    for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
        const double dy = offsets[oi];
        ComplexMatrix acc = ComplexMatrix::Zero(n, n);
        for (std::size_t k = 0; k < q; ++k) {
            const double p = ft.freqs.value(k).real();
            const double w = (k == 0 || k + 1 == q) ? 0.5 * base_w : base_w;
            acc += (w * std::exp(Complex(0.0, p * dy))) * ft.slices[k].values;
        }
        out.values[oi] = acc.real();
        residual = std::max(residual, max_abs(RealMatrix(acc.imag())));
    }
    out.max_imag_residual = residual;
    return out;
}

} // namespace latkern
