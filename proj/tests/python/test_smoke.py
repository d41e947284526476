"""Smoke tests for the _eqharm extension module.

The module location is passed by ctest through EQHARM_MODULE_DIR; when the
package is pip-installed the plain import works instead.
"""

import math
import os
import sys

import pytest

_module_dir = os.environ.get("EQHARM_MODULE_DIR")
if _module_dir:
    sys.path.insert(0, _module_dir)

eq = pytest.importorskip("_eqharm") if _module_dir else pytest.importorskip("eqharm")


def test_version_tag():
    assert eq.__version__.startswith("eqharm-")


def test_geometry_roundtrip():
    p = eq.hopf_to_cartesian(eq.HopfPoint(0.7, 1.1, -0.3))
    assert abs(p.norm_sq() - 1.0) < 1e-12
    q, degenerate = eq.cartesian_to_hopf(p)
    assert not degenerate
    assert abs(q.alpha - 0.7) < 1e-10
    n = eq.hopf_projection(p)
    assert abs(sum(x * x for x in n) - 1.0) < 1e-12


def test_dimension_and_sampling():
    assert eq.harmonic_space_dimension(4, 2) == 5
    assert eq.harmonic_space_dimension(3, 2) == 0
    basis = eq.get_basis(4, 2)
    assert basis.dimension == 5
    h = eq.sample_harmonic(basis, 42)
    h2 = eq.sample_harmonic(basis, 42)
    assert (h.coefficients == h2.coefficients).all()
    x = eq.hopf_to_cartesian(eq.HopfPoint(0.8, 0.5, 0.0))
    v = eq.evaluate(h, x)
    rot = eq.evaluate(h, eq.circle_action(x, 0.3))
    assert abs(rot - v * complex(math.cos(0.6), math.sin(0.6))) < 1e-10


def test_kernels_and_predictions():
    assert eq.covariance_scale(4, 2) == 10.0
    cov = eq.covariance_kernel_form(4, 2)
    assert abs(cov.eta - 0.2) < 1e-14
    pred = eq.predict(4, 2)
    assert abs(pred.expected_zero_count_kernel - 5.2) < 1e-12
    quad = eq.kacrice_integral_quadrature(cov.Lambda, 5)
    mean, stderr = eq.kacrice_integral_mc(cov.Lambda, 5, 50000, 7)
    assert abs(mean - quad) < 4 * stderr


def test_zero_counting_and_topology():
    basis = eq.get_basis(4, 2)
    h = eq.sample_harmonic(basis, 11)
    zs = eq.count_zeros(h)
    if zs.all_certified():
        assert zs.index_sum == 2
        assert zs.total_count >= 2
    surf = eq.extract_nodal_surface(h, 3)
    assert surf.closed()
    assert surf.total_chi() % 2 == 0
    assert eq.fiber_sheet_count(h, eq.base_point(0.7, 0.4)) == 4
    num, den = eq.genus_from_zero_count(1, 1)
    assert (num, den) == (1, 2)


def test_ensemble_and_ks():
    report = eq.run_ensemble(4, 2, 6, seed=99)
    assert report.success_count + report.failure_count == 6
    stat, p = eq.ks_two_sample([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert stat == 0.0 and p == 1.0
