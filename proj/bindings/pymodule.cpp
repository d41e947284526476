// Python bindings for the core operations (sampling, kernels, Kac-Rice,
// zero counting, nodal topology, ensembles).

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eqharm/ensemble.hpp"
#include "eqharm/kacrice.hpp"
#include "eqharm/kernels.hpp"
#include "eqharm/nodal.hpp"
#include "eqharm/reporting.hpp"

namespace py = pybind11;
using namespace eqharm;

PYBIND11_MODULE(_eqharm, mod) {
    mod.doc() = "Gaussian equivariant spherical harmonics on S3";
    mod.attr("__version__") = kVersionTag;

    // -- geometry ------------------------------------------------------------
    py::class_<CartesianPoint>(mod, "CartesianPoint")
        .def(py::init<Complex, Complex>(), py::arg("z1"), py::arg("z2"))
        .def_readwrite("z1", &CartesianPoint::z1)
        .def_readwrite("z2", &CartesianPoint::z2)
        .def("norm_sq", &CartesianPoint::norm_sq);
    py::class_<HopfPoint>(mod, "HopfPoint")
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("phi"),
             py::arg("theta"))
        .def_readwrite("alpha", &HopfPoint::alpha)
        .def_readwrite("phi", &HopfPoint::phi)
        .def_readwrite("theta", &HopfPoint::theta);
    mod.def("hopf_to_cartesian", &hopf_to_cartesian);
    mod.def("cartesian_to_hopf", [](const CartesianPoint& p) {
        const HopfChartResult r = cartesian_to_hopf(p);
        return py::make_tuple(r.point, r.degenerate);
    });
    mod.def("circle_action", &circle_action, py::arg("p"), py::arg("vartheta"));
    mod.def("hopf_projection", &hopf_projection);
    mod.def("base_point", &base_point, py::arg("alpha"), py::arg("phi"));
    mod.def("dot4", &dot4);

    // -- harmonic spaces -----------------------------------------------------
    mod.def("harmonic_space_dimension", &harmonic_space_dimension, py::arg("N"),
            py::arg("m"));
    py::class_<HarmonicSpaceBasis, std::shared_ptr<HarmonicSpaceBasis>>(
        mod, "HarmonicSpaceBasis")
        .def_property_readonly("dimension", &HarmonicSpaceBasis::dimension)
        .def_property_readonly("N",
                               [](const HarmonicSpaceBasis& b) { return b.bidegree.N(); })
        .def_property_readonly("m",
                               [](const HarmonicSpaceBasis& b) { return b.bidegree.m(); })
        .def_property_readonly("vectors",
                               [](const HarmonicSpaceBasis& b) { return b.vectors; });
    mod.def(
        "get_basis",
        [](int N, int m, const std::string& cache_dir) {
            return std::const_pointer_cast<HarmonicSpaceBasis>(
                get_basis(N, m, cache_dir));
        },
        py::arg("N"), py::arg("m"), py::arg("cache_dir") = "");
    py::class_<RandomHarmonic>(mod, "RandomHarmonic")
        .def_property_readonly("N", &RandomHarmonic::N)
        .def_property_readonly("m", &RandomHarmonic::m)
        .def_readonly("seed", &RandomHarmonic::seed)
        .def_readonly("coefficients", &RandomHarmonic::coefficients);
    mod.def(
        "sample_harmonic",
        [](std::shared_ptr<HarmonicSpaceBasis> basis, std::uint64_t seed) {
            return sample_harmonic(basis, seed);
        },
        py::arg("basis"), py::arg("seed"));
    mod.def(
        "harmonic_from_coefficients",
        [](std::shared_ptr<HarmonicSpaceBasis> basis, const Eigen::VectorXcd& c) {
            return harmonic_from_coefficients(basis, c);
        },
        py::arg("basis"), py::arg("coefficients"));
    mod.def("evaluate",
            py::overload_cast<const RandomHarmonic&, const CartesianPoint&>(&evaluate),
            py::arg("h"), py::arg("p"));
    mod.def("real_part_values", &real_part_values, py::arg("h"), py::arg("p"));

    // -- kernels and covariances ----------------------------------------------
    mod.def("covariance_scale", &covariance_scale, py::arg("N"), py::arg("m"));
    mod.def("chebyshev_u", &chebyshev_u, py::arg("N"), py::arg("t"));
    mod.def("pi_n", &pi_n);
    mod.def("pi_nm", &pi_nm);
    mod.def("rho_n", &rho_n);
    mod.def("chebyshev_moment0", &chebyshev_moment0);
    mod.def("chebyshev_moment1", &chebyshev_moment1);
    py::class_<CovarianceMatrices>(mod, "CovarianceMatrices")
        .def_readonly("A", &CovarianceMatrices::A)
        .def_readonly("B", &CovarianceMatrices::B)
        .def_readonly("C", &CovarianceMatrices::C)
        .def_readonly("Delta", &CovarianceMatrices::Delta)
        .def_readonly("Lambda", &CovarianceMatrices::Lambda)
        .def_readonly("eta", &CovarianceMatrices::eta)
        .def_readonly("mu", &CovarianceMatrices::mu)
        .def_readonly("nu", &CovarianceMatrices::nu);
    mod.def("covariance_closed_form", &covariance_closed_form);
    mod.def("covariance_kernel_form", &covariance_kernel_form);
    mod.def("covariance_numeric", &covariance_numeric, py::arg("N"), py::arg("m"),
            py::arg("point"), py::arg("step") = 1e-4);

    // -- Kac-Rice -------------------------------------------------------------
    py::class_<KacRicePrediction>(mod, "KacRicePrediction")
        .def_readonly("N", &KacRicePrediction::N)
        .def_readonly("m", &KacRicePrediction::m)
        .def_readonly("D", &KacRicePrediction::D)
        .def_readonly("eta", &KacRicePrediction::eta)
        .def_readonly("expected_zero_count", &KacRicePrediction::expected_zero_count)
        .def_readonly("expected_genus", &KacRicePrediction::expected_genus)
        .def_readonly("eta_kernel", &KacRicePrediction::eta_kernel)
        .def_readonly("expected_zero_count_kernel",
                      &KacRicePrediction::expected_zero_count_kernel)
        .def_readonly("expected_genus_kernel",
                      &KacRicePrediction::expected_genus_kernel);
    mod.def("predict", &predict, py::arg("N"), py::arg("m"));
    mod.def("scalar_integral", &scalar_integral);
    mod.def("scalar_integral_quadrature", &scalar_integral_quadrature);
    mod.def(
        "kacrice_integral_mc",
        [](const Eigen::Matrix2cd& Lambda, int dimension, std::int64_t samples,
           std::uint64_t seed) {
            const MonteCarloEstimate est =
                kacrice_integral_mc(Lambda, dimension, samples, seed);
            return py::make_tuple(est.mean, est.stderr_of_mean);
        },
        py::arg("Lambda"), py::arg("dimension"), py::arg("samples"), py::arg("seed"));
    mod.def("kacrice_integral_quadrature", &kacrice_integral_quadrature,
            py::arg("Lambda"), py::arg("dimension"));

    // -- nodal analysis ---------------------------------------------------------
    py::class_<ZeroRecord>(mod, "ZeroRecord")
        .def_readonly("position", &ZeroRecord::position)
        .def_readonly("alpha", &ZeroRecord::alpha)
        .def_readonly("phi", &ZeroRecord::phi)
        .def_readonly("index", &ZeroRecord::index)
        .def_readonly("newton_residual", &ZeroRecord::newton_residual)
        .def_readonly("certified", &ZeroRecord::certified)
        .def_readonly("at_pole", &ZeroRecord::at_pole);
    py::class_<ZeroSet>(mod, "ZeroSet")
        .def_readonly("zeros", &ZeroSet::zeros)
        .def_readonly("total_count", &ZeroSet::total_count)
        .def_readonly("index_sum", &ZeroSet::index_sum)
        .def_readonly("failure_count", &ZeroSet::failure_count)
        .def("all_certified", &ZeroSet::all_certified);
    mod.def(
        "count_zeros", [](const RandomHarmonic& h) { return count_zeros(h); },
        py::arg("h"));
    py::class_<NodalSurface::Component>(mod, "SurfaceComponent")
        .def_readonly("vertex_count", &NodalSurface::Component::vertex_count)
        .def_readonly("edge_count", &NodalSurface::Component::edge_count)
        .def_readonly("face_count", &NodalSurface::Component::face_count)
        .def_readonly("chi", &NodalSurface::Component::chi)
        .def_readonly("genus", &NodalSurface::Component::genus)
        .def_readonly("closed", &NodalSurface::Component::closed);
    py::class_<NodalSurface>(mod, "NodalSurface")
        .def_readonly("components", &NodalSurface::components)
        .def("total_chi", &NodalSurface::total_chi)
        .def("total_genus", &NodalSurface::total_genus)
        .def("closed", &NodalSurface::closed)
        .def_property_readonly("triangle_count",
                               [](const NodalSurface& s) { return s.triangles.size(); })
        .def_property_readonly("vertex_count",
                               [](const NodalSurface& s) { return s.vertices.size(); });
    mod.def(
        "extract_nodal_surface",
        [](const RandomHarmonic& h, int level) {
            return extract_nodal_surface(h, level);
        },
        py::arg("h"), py::arg("level"));
    mod.def("fiber_sheet_count", &fiber_sheet_count, py::arg("h"), py::arg("base"));
    mod.def("genus_from_zero_count", [](int m, int k) {
        const Rational r = genus_from_zero_count(m, k);
        return py::make_tuple(r.num, r.den);
    });

    // -- ensembles -----------------------------------------------------------
    py::class_<EnsembleReport>(mod, "EnsembleReport")
        .def_readonly("success_count", &EnsembleReport::success_count)
        .def_readonly("failure_count", &EnsembleReport::failure_count)
        .def_readonly("mean_zero_count", &EnsembleReport::mean_zero_count)
        .def_readonly("stderr_zero_count", &EnsembleReport::stderr_zero_count)
        .def_readonly("mean_genus", &EnsembleReport::mean_genus)
        .def_readonly("component_histogram", &EnsembleReport::component_histogram)
        .def_readonly("reference_expected_zero_count",
                      &EnsembleReport::reference_expected_zero_count)
        .def_readonly("kernel_expected_zero_count",
                      &EnsembleReport::kernel_expected_zero_count);
    mod.def(
        "run_ensemble",
        [](int N, int m, int n_samples, std::uint64_t seed, bool analyze_zeros,
           bool analyze_surface, int mesh_level, int threads) {
            EnsembleParams params;
            params.N = N;
            params.m = m;
            params.n_samples = n_samples;
            params.seed = seed;
            params.analyze_zeros = analyze_zeros;
            params.analyze_surface = analyze_surface;
            params.mesh_level = mesh_level;
            params.threads = threads;
            return run_ensemble(params);
        },
        py::arg("N"), py::arg("m"), py::arg("n_samples"), py::arg("seed") = 12345,
        py::arg("analyze_zeros") = true, py::arg("analyze_surface") = false,
        py::arg("mesh_level") = 5, py::arg("threads") = 1);
    mod.def("ks_two_sample", [](std::vector<double> a, std::vector<double> b) {
        const KsResult r = ks_two_sample(std::move(a), std::move(b));
        return py::make_tuple(r.statistic, r.p_value);
    });
    py::class_<EquivalenceReport>(mod, "EquivalenceReport")
        .def_readonly("mean_complex", &EquivalenceReport::mean_complex)
        .def_readonly("mean_real", &EquivalenceReport::mean_real)
        .def_readonly("mean_control", &EquivalenceReport::mean_control)
        .def_readonly("equivalence_passes", &EquivalenceReport::equivalence_passes)
        .def_readonly("control_rejected", &EquivalenceReport::control_rejected);
    mod.def("ensemble_equivalence_test", &ensemble_equivalence_test, py::arg("N"),
            py::arg("m"), py::arg("n_samples"), py::arg("seed"),
            py::arg("threads") = 1, py::arg("basis_cache_dir") = "");
}
