#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latkern/abelian_ext.hpp"
#include "latkern/analysis.hpp"
#include "latkern/coefficients.hpp"
#include "latkern/generators.hpp"
#include "latkern/lattice.hpp"
#include "latkern/oracles.hpp"
#include "latkern/propagation.hpp"
#include "latkern/runner.hpp"
#include "latkern/version.hpp"

namespace py = pybind11;
using namespace latkern;

namespace {

KernelMethod method_from(const std::string& kind, double dt, double safety) {
    if (kind == "exact")
        return KernelMethod::exact();
    if (kind == "euler") {
        KernelMethod m = KernelMethod::euler_auto(safety);
        m.dt = dt;
        return m;
    }
    throw std::invalid_argument("method must be 'exact' or 'euler'");
}

} // namespace

PYBIND11_MODULE(_latkern, m) {
    m.doc() = "lattice kernels of diffusions joined with path functionals";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ConfigError>(m, "LatkernConfigError");
    py::register_exception<GuardError>(m, "LatkernGuardError");

    py::class_<SpatialGrid>(m, "SpatialGrid")
        .def(py::init<int, double>(), py::arg("m"), py::arg("half_width"))
        .def_property_readonly("level", &SpatialGrid::level)
        .def_property_readonly("half_width", &SpatialGrid::half_width)
        .def_property_readonly("step", &SpatialGrid::step)
        .def_property_readonly("points", [](const SpatialGrid& g) { return g.points(); })
        .def("__len__", &SpatialGrid::size)
        .def("wrap", &SpatialGrid::wrap)
        .def("index_of", &SpatialGrid::index_of);
    m.def("build_spatial_grid", &build_spatial_grid, py::arg("m"), py::arg("half_width"));

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def_property_readonly("values", [](const FrequencyGrid& g) { return g.values(); })
        .def_property_readonly("uniform_real", &FrequencyGrid::uniform_real)
        .def_property_readonly("spacing", &FrequencyGrid::spacing)
        .def("__len__", &FrequencyGrid::size)
        .def_static("inverse_lattice", &FrequencyGrid::inverse_lattice, py::arg("n"),
                    py::arg("half_width"))
        .def_static("uniform_window", &FrequencyGrid::uniform_window, py::arg("p_max"),
                    py::arg("count"))
        .def_static("explicit_list", &FrequencyGrid::explicit_list, py::arg("values"));
    m.def("build_frequency_grid", &build_frequency_grid, py::arg("n"), py::arg("half_width"));

    py::class_<ScalarRecipe>(m, "ScalarRecipe")
        .def_static("constant", &ScalarRecipe::make_constant, py::arg("c"))
        .def_static("affine_clipped", &ScalarRecipe::affine_clipped, py::arg("intercept"),
                    py::arg("slope"), py::arg("lo"), py::arg("hi"))
        .def_static("sinusoid", &ScalarRecipe::sinusoid, py::arg("offset"), py::arg("amplitude"),
                    py::arg("frequency"), py::arg("phase"))
        .def_static("tabulated", &ScalarRecipe::tabulated, py::arg("level"), py::arg("samples"))
        .def("eval", &ScalarRecipe::eval, py::arg("x"), py::arg("half_width"))
        .def("describe", &ScalarRecipe::describe);

    py::class_<CoefficientRecipe>(m, "CoefficientRecipe")
        .def(py::init<>())
        .def_readwrite("sigma2", &CoefficientRecipe::sigma2)
        .def_readwrite("mu", &CoefficientRecipe::mu)
        .def_readwrite("a", &CoefficientRecipe::a)
        .def_readwrite("b", &CoefficientRecipe::b);
    m.def("smooth_family", &smooth_family);
    m.def("smooth_family_dx_only", &smooth_family_dx_only);

    py::class_<CoefficientField>(m, "CoefficientField")
        .def(py::init<SpatialGrid, RealVector, RealVector, RealVector, RealVector>(),
             py::arg("grid"), py::arg("sigma2"), py::arg("mu"), py::arg("a"), py::arg("b"))
        .def_static("sample", &CoefficientField::sample, py::arg("recipe"), py::arg("grid"))
        .def_property_readonly("sigma2", &CoefficientField::sigma2)
        .def_property_readonly("mu", &CoefficientField::mu)
        .def_property_readonly("a", &CoefficientField::a)
        .def_property_readonly("b", &CoefficientField::b)
        .def_property_readonly("b_primitive", &CoefficientField::b_primitive)
        .def_property_readonly("sigma_lower_bound", &CoefficientField::sigma_lower_bound);

    m.def("min_refinement_level", &min_refinement_level, py::arg("recipe"), py::arg("half_width"),
          py::arg("m_cap"));

    py::class_<GeneratorMatrix>(m, "GeneratorMatrix")
        .def_readonly("entries", &GeneratorMatrix::entries);
    m.def("diffusion_generator", &diffusion_generator, py::arg("grid"), py::arg("coeffs"));
    m.def("adjoint", &adjoint, py::arg("generator"));

    py::class_<FourierSlice>(m, "FourierSlice")
        .def_readonly("z", &FourierSlice::z)
        .def_readonly("entries", &FourierSlice::entries);
    m.def("fourier_slice", &fourier_slice, py::arg("grid"), py::arg("coeffs"), py::arg("z"));
    m.def("ito_slice", &ito_slice, py::arg("grid"), py::arg("coeffs"), py::arg("z"));
    m.def(
        "gauge_phase",
        [](const SpatialGrid& grid, const CoefficientField& coeffs) {
            return ComplexVector(gauge_phase(grid, coeffs).values);
        },
        py::arg("grid"), py::arg("coeffs"));

    py::class_<SliceCoefficients>(m, "SliceCoefficients")
        .def_readonly("sigma2_z", &SliceCoefficients::sigma2_z)
        .def_readonly("mu_z", &SliceCoefficients::mu_z)
        .def_readonly("kappa_z", &SliceCoefficients::kappa_z);
    m.def("slice_coefficients", &slice_coefficients, py::arg("grid"), py::arg("coeffs"),
          py::arg("z"));

    py::class_<CommutationReport>(m, "CommutationReport")
        .def_readonly("max_defect", &CommutationReport::max_defect)
        .def_readonly("pass_", &CommutationReport::pass);
    m.def("commutation_check", &commutation_check, py::arg("matrices"), py::arg("tolerance"));

    py::class_<KernelSlice>(m, "KernelSlice")
        .def_readonly("z", &KernelSlice::z)
        .def_readonly("t", &KernelSlice::t)
        .def_readonly("values", &KernelSlice::values);

    py::class_<JointKernelFT>(m, "JointKernelFT")
        .def_readonly("t", &JointKernelFT::t)
        .def_readonly("slices", &JointKernelFT::slices)
        .def_readonly("hermitian_defect", &JointKernelFT::hermitian_defect)
        .def_property_readonly("frequencies",
                               [](const JointKernelFT& k) { return k.freqs.values(); });

    py::class_<JointDensity>(m, "JointDensity")
        .def_readonly("offsets", &JointDensity::offsets)
        .def_readonly("values", &JointDensity::values)
        .def_readonly("max_imag_residual", &JointDensity::max_imag_residual)
        .def_readonly("offset_weight", &JointDensity::offset_weight);

    m.def(
        "courant_max_step",
        [](const std::vector<FourierSlice>& slices, double safety) {
            return courant_max_step(slices, safety);
        },
        py::arg("slices"), py::arg("safety") = 0.9);
    m.def("matrix_power", py::overload_cast<const ComplexMatrix&, std::uint64_t>(&matrix_power),
          py::arg("matrix"), py::arg("n"));
    m.def("matrix_exponential", py::overload_cast<const ComplexMatrix&>(&matrix_exponential),
          py::arg("matrix"));
    m.def("exact_kernel", &exact_kernel, py::arg("slice"), py::arg("t"));
    m.def(
        "euler_kernel",
        [](const FourierSlice& slice, double t, double dt, double safety) {
            EulerScheme scheme{dt, num_steps(t, dt), safety};
            return euler_kernel(slice, t, scheme);
        },
        py::arg("slice"), py::arg("t"), py::arg("dt"), py::arg("safety") = 0.9);
    m.def(
        "joint_kernel",
        [](const SpatialGrid& grid, const CoefficientField& coeffs, double t,
           const FrequencyGrid& freqs, const std::string& method, double dt, double safety) {
            return joint_kernel(grid, coeffs, t, freqs, method_from(method, dt, safety));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("t"), py::arg("freqs"),
        py::arg("method") = "exact", py::arg("dt") = 0.0, py::arg("safety") = 0.9);
    m.def("dual_offsets", &dual_offsets, py::arg("freqs"));
    m.def("reconstruct_joint_density", &reconstruct_joint_density, py::arg("kernel"),
          py::arg("offsets"));

    py::class_<SupJointKernel>(m, "SupJointKernel")
        .def_readonly("t", &SupJointKernel::t)
        .def_readonly("x0", &SupJointKernel::x0)
        .def_readonly("u", &SupJointKernel::u)
        .def_readonly("marginal_defect", &SupJointKernel::marginal_defect);
    m.def("sup_joint_kernel", &sup_joint_kernel, py::arg("grid"), py::arg("coeffs"), py::arg("t"),
          py::arg("x0"));
    m.def(
        "sup_blocks",
        [](const SpatialGrid& grid, const CoefficientField& coeffs) {
            return sup_blocks(grid, coeffs).blocks;
        },
        py::arg("grid"), py::arg("coeffs"));
    m.def("lifted_sup_generator", &lifted_sup_generator, py::arg("grid"), py::arg("coeffs"));

    py::class_<DiscreteSumSpec>(m, "DiscreteSumSpec")
        .def_readonly("psi", &DiscreteSumSpec::psi)
        .def_readonly("period", &DiscreteSumSpec::period)
        .def_readonly("periods", &DiscreteSumSpec::periods)
        .def_static("from_matrix", &DiscreteSumSpec::from_matrix, py::arg("psi"),
                    py::arg("period"), py::arg("periods"))
        .def_static("separable", &DiscreteSumSpec::separable, py::arg("grid"), py::arg("g"),
                    py::arg("period"), py::arg("periods"))
        .def_static("of_arrival", &DiscreteSumSpec::of_arrival, py::arg("grid"), py::arg("g"),
                    py::arg("period"), py::arg("periods"));
    m.def(
        "dsum_slice",
        [](const SpatialGrid& grid, const CoefficientField& coeffs, const DiscreteSumSpec& spec,
           Complex p, const std::string& method, double dt, double safety) {
            return dsum_slice(grid, coeffs, spec, p, method_from(method, dt, safety));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("spec"), py::arg("p"),
        py::arg("method") = "exact", py::arg("dt") = 0.0, py::arg("safety") = 0.9);
    m.def(
        "dsum_kernel",
        [](const SpatialGrid& grid, const CoefficientField& coeffs, const DiscreteSumSpec& spec,
           const FrequencyGrid& freqs, const std::string& method, double dt, double safety) {
            return dsum_kernel(grid, coeffs, spec, freqs, method_from(method, dt, safety));
        },
        py::arg("grid"), py::arg("coeffs"), py::arg("spec"), py::arg("freqs"),
        py::arg("method") = "exact", py::arg("dt") = 0.0, py::arg("safety") = 0.9);

    py::class_<GraphNormReport>(m, "GraphNormReport")
        .def_readonly("uniform", &GraphNormReport::uniform)
        .def_readonly("gen_term", &GraphNormReport::gen_term)
        .def_readonly("adj_term", &GraphNormReport::adj_term)
        .def_readonly("total", &GraphNormReport::total);
    m.def("uniform_norm", py::overload_cast<const ComplexMatrix&>(&uniform_norm),
          py::arg("kernel"));
    m.def("graph_norm",
          py::overload_cast<const ComplexMatrix&, const GeneratorMatrix&>(&graph_norm),
          py::arg("kernel"), py::arg("generator"));
    m.def("restrict_to_coarse", &restrict_to_coarse, py::arg("fine_grid"), py::arg("values"),
          py::arg("coarse_grid"));
    m.def("analyticity_residual", &analyticity_residual, py::arg("sampler"), py::arg("center"),
          py::arg("radius"), py::arg("quadrature_points"));
    m.def("disc_samples", &disc_samples, py::arg("radius"));

    py::class_<ConvergenceReport>(m, "ConvergenceReport")
        .def_readonly("levels", &ConvergenceReport::levels)
        .def_readonly("coarse_steps", &ConvergenceReport::coarse_steps)
        .def_readonly("gaps", &ConvergenceReport::gaps)
        .def_readonly("fitted_rate", &ConvergenceReport::fitted_rate)
        .def_readonly("fit_residual", &ConvergenceReport::fit_residual);
    m.def(
        "convergence_experiment",
        [](const CoefficientRecipe& recipe, double half_width, const std::vector<int>& levels,
           double t, double disc_radius, const std::string& method, double dt, double safety) {
            return convergence_experiment(recipe, half_width, levels, t, disc_radius,
                                          method_from(method, dt, safety));
        },
        py::arg("recipe"), py::arg("half_width"), py::arg("levels"), py::arg("t"),
        py::arg("disc_radius"), py::arg("method") = "exact", py::arg("dt") = 0.0,
        py::arg("safety") = 0.9);
    m.def("euler_gap_experiment", &euler_gap_experiment, py::arg("recipe"), py::arg("half_width"),
          py::arg("levels"), py::arg("t"), py::arg("disc_radius"), py::arg("safety") = 0.9);

    py::class_<PathEnumeration>(m, "PathEnumeration")
        .def_readonly("dt", &PathEnumeration::dt)
        .def_readonly("steps", &PathEnumeration::steps)
        .def("total_mass", &PathEnumeration::total_mass);
    m.def("enumerate_euler_paths", &enumerate_euler_paths, py::arg("grid"), py::arg("coeffs"),
          py::arg("dt"), py::arg("steps"), py::arg("x0"));
    m.def("characteristic_sum", &characteristic_sum, py::arg("paths"), py::arg("z"));
    m.def("periodic_heat_kernel", &periodic_heat_kernel, py::arg("sigma"), py::arg("t"),
          py::arg("x"), py::arg("x_prime"), py::arg("half_width"), py::arg("images"));
    m.def("bm_sup_density", &bm_sup_density, py::arg("t"), py::arg("x"), py::arg("y"),
          py::arg("x0") = 0.0, py::arg("sigma") = 1.0);
    m.def("constant_coeff_char", &constant_coeff_char, py::arg("a"), py::arg("b"),
          py::arg("sigma2"), py::arg("mu"), py::arg("p"), py::arg("t"), py::arg("x"),
          py::arg("x_prime"));

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("pass_", &CheckResult::pass)
        .def_readonly("metric", &CheckResult::metric)
        .def_readonly("tolerance", &CheckResult::tolerance);
    m.def(
        "run_validation_suite",
        [](const std::map<std::string, double>& overrides) {
            return run_validation_suite(overrides);
        },
        py::arg("overrides") = std::map<std::string, double>{});
}
