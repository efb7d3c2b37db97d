import math
from fractions import Fraction

import pytest

from zhatwitt import falsetheta, plumbing, radial
from zhatwitt.errors import InsufficientSeries
from zhatwitt.qseries import QSeries

YS = (1e-4, 5e-5, 2e-5)


def psi_series(m, r, y_min=YS[-1], tail=40):
    return falsetheta.psi_qseries(m, r, math.ceil(tail / (2 * math.pi * y_min)))


@pytest.mark.parametrize("m,r,k", [(6, 1, 6), (12, 5, 4), (30, 7, 3)])
def test_psi_radial_limit_matches_exact(m, r, k):
    est = radial.radial_scan(psi_series(m, r), Fraction(1, k), YS)
    exact = complex(falsetheta.psi_at_root(m, r, k).value)
    # the error is O(y); the reported uncertainty must cover it
    assert abs(est.limit - exact) < est.uncertainty < 2e-2
    assert est.converged


def test_psi_radial_limit_helper():
    est = radial.psi_radial_limit(6, 1, 6, y_grid=(1e-5, 5e-6, 2e-6))
    assert abs(est.limit - complex(falsetheta.psi_at_root(6, 1, 6).value)) < est.uncertainty < 2e-3


def test_truncations_beyond_series():
    s = plumbing.corpus_series("s3_m1_2_fig8_prefix")
    with pytest.raises(InsufficientSeries):
        radial.radial_scan(s, Fraction(1, 6), truncations=[10, 200])
    est = radial.radial_scan(s, Fraction(1, 6), truncations=[10, 200, 300], allow_clip=True)
    assert not est.converged
    assert est.clipped == (200, 300)
    assert "exceed the stored series" in est.notes[0]


def test_y_grid_validation():
    s = QSeries(0, 1, {0: 1}, 10)
    for bad in ([], [0.1, 0.2], [0.1, -0.1], [0.1, 0.1]):
        with pytest.raises(ValueError):
            radial.radial_scan(s, Fraction(1, 6), bad)


def test_default_grid():
    assert radial.DEFAULT_Y_GRID == (0.002, 0.0018, 0.0016, 0.0014, 0.0012, 0.001)
    assert radial.MODULUS_TRUNCATIONS[0] == 200 and radial.MODULUS_TRUNCATIONS[-1] == 530


def test_csv_and_json():
    s = psi_series(6, 1, 1e-3)
    est = radial.radial_scan(s, Fraction(1, 6), (2e-3, 1e-3), truncations=[50, 100, 150])
    lines = est.to_csv().strip().splitlines()
    assert lines[0] == "N,y,re,im,modulus,arg_normalized"
    assert len(lines) == 1 + 3 * 2
    js = est.to_json()
    assert js["truncations"] == ["50", "100", "150"]
    assert -0.5 < js["limit_arg_normalized"] <= 0.5
    assert js["limit_modulus"] == pytest.approx(abs(est.limit))


@pytest.mark.parametrize("backend", ["numpy", "mpmath"])
def test_backends_agree(backend):
    s = psi_series(6, 1, 1e-2)
    a = radial.radial_scan(s, Fraction(1, 6), (2e-2, 1e-2), backend=backend)
    b = radial.radial_scan(s, Fraction(1, 6), (2e-2, 1e-2), backend="mpmath")
    assert abs(a.limit - b.limit) < 1e-10


def test_numeric_tau6_of_homology_sphere():
    form = falsetheta.surgery_family("T(2,3)").form(1)
    s = form.series(math.ceil(40 / (2 * math.pi * YS[-1])))
    res = radial.tau6_numeric(s, y_grid=YS)
    assert res.recognized is not None
    assert (res.recognized.a, res.recognized.b) == (0, 0)
    assert abs(res.value - 1) < res.uncertainty
    assert res.to_json()["recognized"]["a"] == 0


def test_numeric_tau6_reports_unresolved_value():
    s = plumbing.corpus_series("s3_m1_2_fig8_prefix")
    res = radial.tau6_numeric(s)
    assert res.recognized is None
    assert res.note
    assert not res.estimate.converged
    assert "too short" in res.estimate.notes[-1]
    with pytest.raises(ValueError):
        radial.tau6_numeric(s, h1_order=2)
