"""Periodic-grid solver and the torus deformation check."""
import numpy as np
import pytest

from caligeo.pdegrid import (
    PeriodicField,
    band_limited_field,
    classify_solution_planes,
    coassoc_deformation_linearization,
    graph_residual_grid,
    solve_graph,
    spectral_partial,
    stencil_partial,
)


def test_periodic_field_validation():
    f = PeriodicField(np.zeros((4, 8, 8, 8)))
    assert f.channels == 4 and f.base_dim == 3 and f.grid == 8
    with pytest.raises(ValueError):
        PeriodicField(np.zeros((4, 8, 6, 8)))
    with pytest.raises(ValueError):
        PeriodicField(np.zeros((4, 8, 8, 8, 8, 8)))


def test_band_limited_field_scale_and_band():
    f = band_limited_field(3, 16, channels=4, kmax=2, seed=1, scale=0.25)
    assert f.sup_norm() == pytest.approx(0.25)
    spec = np.fft.fftn(f.data, axes=(1, 2, 3))
    freqs = np.fft.fftfreq(16, d=1 / 16)
    big = np.abs(freqs) > 2
    assert np.abs(spec[:, big, :, :]).max() < 1e-10
    with pytest.raises(ValueError):
        band_limited_field(3, 8, kmax=4)  # kmax must stay under the Nyquist mode


def test_spectral_partial_is_exact_on_modes():
    n = 16
    x = np.arange(n) / n
    data = np.sin(2 * np.pi * 3 * x)[None, :]
    d = spectral_partial(data, axis=1)
    want = 2 * np.pi * 3 * np.cos(2 * np.pi * 3 * x)
    assert np.abs(d[0] - want).max() < 1e-10


def test_stencil_partial_is_fourth_order():
    errs = []
    for n in (16, 32):
        x = np.arange(n) / n
        data = np.sin(2 * np.pi * x)[None, :]
        d = stencil_partial(data, axis=1, spacing=1 / n)
        errs.append(np.abs(d[0] - 2 * np.pi * np.cos(2 * np.pi * x)).max())
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.1)


def test_stencil_tracks_spectral_on_band_limited_data():
    f = band_limited_field(3, 16, kmax=2, seed=2)
    st = stencil_partial(f.data, axis=1, spacing=f.spacing)
    sp = spectral_partial(f.data, axis=1)
    rel = np.abs(st - sp).max() / np.abs(sp).max()
    assert rel < 0.02  # symbol error of the 4th-order stencil at k = 2, n = 16


def test_constant_field_solves_exactly():
    data = np.zeros((4, 8, 8, 8))
    data[1] = 0.37
    res = graph_residual_grid(PeriodicField(data), "assoc")
    assert np.abs(res).max() == 0.0


def test_solver_converges_to_the_constant_attractor():
    res = solve_graph(kind="assoc", grid=8, eps=1e-2, seed=0, tol=1e-8)
    assert res.converged
    assert res.iterations <= 5
    assert res.residual < 1e-8
    # band-limited small data contracts to a constant field
    mean = res.field.mean()
    spread = np.abs(res.field.data - mean[:, None, None, None]).max()
    assert spread < 1e-6


def test_solver_starts_at_zero_residual():
    initial = PeriodicField(np.zeros((4, 8, 8, 8)))
    res = solve_graph(kind="assoc", grid=8, initial=initial)
    assert res.converged and res.iterations == 0


def test_solver_reports_divergence_cleanly():
    res = solve_graph(kind="assoc", grid=8, eps=10.0, seed=0, max_iter=4)
    assert not res.converged
    assert res.message != ""
    assert res.iterations <= 4


def test_cayley_solver_converges():
    res = solve_graph(kind="cayley", grid=6, eps=1e-2, seed=1)
    assert res.converged
    assert res.residual < 1e-8


def test_trace_csv_format():
    res = solve_graph(kind="assoc", grid=8, eps=1e-2, seed=0)
    lines = res.trace_csv().strip().splitlines()
    assert lines[0] == "iteration,residual,step"
    assert len(lines) == res.iterations + 2  # header + initial row + one per step


def test_solution_planes_classify():
    res = solve_graph(kind="assoc", grid=8, eps=1e-2, seed=0)
    out = classify_solution_planes(res.field, "assoc")
    assert out["counts"] == {"associative": 8**3}
    assert out["worst_value_deviation"] <= 1e-7


def test_unsolved_field_planes_do_not_classify():
    f = band_limited_field(3, 8, kmax=2, seed=3, scale=0.5)
    out = classify_solution_planes(f, "assoc", tol=1e-7)
    assert out["counts"].get("associative", 0) < 8**3


def test_deformation_linearization_report():
    rep = coassoc_deformation_linearization(grid=8, eps_sequence=(1e-2, 1e-3), samples=2, seed=0)
    assert rep.passed, rep.message
    assert np.allclose(rep.iso_matrix, np.diag([1.0, 1.0, -1.0]))
    for slope in rep.slopes:
        assert slope == pytest.approx(2.0, abs=0.05)
    for errs in rep.rel_errors:
        assert errs[-1] < 1e-3
        assert errs[0] > errs[-1]  # the sweep actually shrinks the error
    assert rep.constant_zero_sup == 0.0
    assert rep.additivity_rel < 1e-4
    d = rep.to_dict()
    assert d["grid"] == 8 and d["passed"] is True
