import math

import numpy as np
import pytest

import ltrace


def test_version():
    assert ltrace.__version__ == "0.3.0"


def test_symbol_eval():
    g = ltrace.catalog("gradient", 2)
    assert np.allclose(g.eval_real([1.0, 0.0]), [[1.0], [0.0]])
    lap = ltrace.catalog("laplacian", 2)
    assert lap.eval_real([0.6, 0.8])[0, 0] == pytest.approx(-1.0)
    w = ltrace.catalog("wirtinger", 2)
    m = w.eval_complex([1.0, 1j])
    assert np.linalg.norm(m @ np.array([1.0, -1j])) < 1e-15


def test_pseudo_inverse():
    p = ltrace.pseudo_inverse_eval(ltrace.catalog("gradient", 2), [1.0, 0.0])
    assert np.allclose(p["projector"], np.diag([1.0, 0.0]))
    with pytest.raises(ltrace.SingularError):
        ltrace.pseudo_inverse_eval(ltrace.make_partial(2, 1), [1.0, 0.0])


def test_classify_and_certificate():
    r = ltrace.classify_full(ltrace.catalog("sym_gradient", 2))
    assert [r[k]["verdict"] for k in ("elliptic", "cancelling", "strongly_cancelling", "c_elliptic")] == ["yes"] * 4
    a = ltrace.catalog("sym_gradient", 3)
    cert = ltrace.search_certificate(a, 4)
    assert cert["d"] == 2
    check = ltrace.verify_certificate(a, cert)
    assert check["exact"] and check["max_defect"] == "0"
    assert ltrace.search_certificate(ltrace.catalog("wirtinger", 2), 6) is None
    assert ltrace.nullspace_dimension(ltrace.catalog("sym_gradient", 2), 1) == [2, 3]


def test_errors_are_typed():
    with pytest.raises(ltrace.DomainError):
        ltrace.catalog("nope", 2)
    with pytest.raises(ltrace.ParseError):
        ltrace.parse_symbol("{")
    assert issubclass(ltrace.DomainError, RuntimeError)


def test_measures():
    mu = ltrace.build_cantor_product(math.log(2) / math.log(3), 1, 5)
    assert len(mu) == 32
    assert np.allclose(mu.weights, 1 / 32)
    prof = ltrace.ahlfors_profile(mu, mu.dimension_alpha, [0.0], [3.0**-i for i in range(1, 4)])
    assert all(abs(ratio - 1.0) < 1e-9 for _, _, ratio in prof["rows"])
    back = ltrace.measure_from_binary(mu.to_binary())
    assert np.array_equal(back.points, mu.points)
    cone = ltrace.Cone([0.0, 0.0], [0.0, 1.0], 0.5)
    cm = ltrace.build_cone_cantor(1.5, 2, 5, cone, 0.5)
    assert cm.total_mass() == pytest.approx(1.0)


def test_fields():
    grid = ltrace.Grid.cube(2, 64, 1.0)
    x = grid.coordinates()
    u = ltrace.Field(grid, np.sin(2 * np.pi * x[:, 0]).reshape(64, 64))
    du = ltrace.apply_symbol(ltrace.catalog("gradient", 2), u)
    expect = 2 * np.pi * np.cos(2 * np.pi * x[:, 0]).reshape(64, 64)
    assert du.values.shape == (2, 64, 64)
    assert np.max(np.abs(du.values[0] - expect)) < 1e-11
    assert ltrace.lebesgue_norm(u, 2.0) == pytest.approx(1 / math.sqrt(2), abs=1e-10)
    f = ltrace.random_band_limited(grid, 1, 4, 3)
    err = ltrace.riesz_potential(ltrace.riesz_potential(f, 0.5), -0.5) - f
    assert err.max_abs() < 1e-10


def test_harness():
    assert ltrace.exponent_q(2, "1/2") == "3/2"
    grid = ltrace.Grid.centered(2, 32, 4.0)
    mu = ltrace.build_cantor_product(1.05, 2, 5)
    u = ltrace.random_band_limited(grid, 1, 3, 1)
    with pytest.raises(ltrace.DomainError, match=r"s\(n-1\)/\(n-s\)"):
        ltrace.multiplicative_ratio(ltrace.catalog("gradient", 2), u, mu, 0.95, 0.9, 1.0)
    r = ltrace.blowup_nonelliptic(ltrace.make_partial(2, 0), [0.0, 1.0], [1.0], 0.5)
    assert r["verdict"] == "diverging"
    assert len(r["growth"]) == 5


def test_demo():
    d = ltrace.strict_discontinuity_demo(4)
    assert d["limit_trace"] == 0.5
    row = d["rows"][3]
    assert row["total_variation"] == pytest.approx(2 * math.pi * (1 + 1 / 8), abs=1e-6)
