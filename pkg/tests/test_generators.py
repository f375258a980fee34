import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernstein_siss import (
    GeneratorSpec,
    InputError,
    SpectralEnvelope,
    bspline,
    check_orthonormal,
    dilate,
    gaussian,
    make_generator,
    orthonormalize,
    shannon,
    tabulated,
    tensorize,
)
from bernstein_siss.errors import DegenerateGeneratorError

PI = math.pi


def test_shannon_center():
    assert shannon()(0.0) == 1.0


def test_shannon_band():
    g = shannon()
    assert g(3.0) == 1.0
    assert g(3.2) == 0.0
    assert g(-PI) == 0.5


def test_bspline2_at_pi():
    assert bspline(2)(PI) == pytest.approx((2 / PI) ** 4, rel=1e-14)
    assert (2 / PI) ** 4 == pytest.approx(0.164255, abs=1e-6)


def test_bspline_value_at_zero():
    for m in (1, 2, 5):
        assert bspline(m)(0.0) == 1.0


def test_gaussian_at_zero():
    assert gaussian(1.0)(0.0) == pytest.approx(2 * PI, rel=1e-15)
    assert gaussian(0.5)(0.0) == pytest.approx(2 * PI * 0.25, rel=1e-15)


def test_dilate_identity():
    g = shannon()
    assert dilate(g, 1.0) is g


def test_dilate_shannon_examples():
    d = dilate(shannon(), 2.0)
    assert d(PI / 3) == pytest.approx(4.0)
    assert d(2 * PI / 3) == 0.0


def test_dilate_rejects_nonpositive():
    with pytest.raises(InputError):
        dilate(shannon(), 0.0)
    with pytest.raises(InputError):
        dilate(shannon(), -1.0)


@settings(max_examples=40, deadline=None)
@given(a=st.floats(0.2, 5.0), b=st.floats(0.2, 5.0))
def test_dilation_composition(a, b):
    g = bspline(3)
    w = np.linspace(-40, 40, 401)
    lhs = dilate(dilate(g, a), b)(w)
    rhs = dilate(g, a * b)(w)
    # absolute slack only matters next to the zeros of the sinc factor
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14 * np.max(rhs))


@pytest.mark.parametrize("gen", [shannon(), bspline(1), bspline(2), bspline(4), gaussian(1.0), gaussian(0.3)],
                         ids=["shannon", "b1", "b2", "b4", "gauss1", "gauss03"])
def test_envelope_domination(gen, rng):
    w = rng.uniform(-1e3, 1e3, 10_000)
    w = np.concatenate([w, np.linspace(-20, 20, 4001)])
    assert np.all(gen(w) <= gen.envelope.bound_sq(w) * (1 + 1e-12))


def test_envelope_domination_orthonormalized(onspline2, ongauss, rng):
    w = rng.uniform(-200, 200, 2000)
    for gen in (onspline2, ongauss):
        assert np.all(gen(w) <= gen.envelope.bound_sq(w) * (1 + 1e-12))


def test_envelope_domination_dilated(rng):
    w = rng.uniform(-1e3, 1e3, 10_000)
    for a in (0.5, 2.0, 3.7):
        gen = dilate(bspline(2), a)
        assert np.all(gen(w) <= gen.envelope.bound_sq(w) * (1 + 1e-12))


def test_orthonormalize_shannon_unchanged():
    g = shannon()
    assert orthonormalize(g) is g


def test_orthonormalize_bspline2_gram_is_one(onspline2):
    from bernstein_siss import bracket

    assert bracket(onspline2, 0, PI).value == pytest.approx(1.0, abs=1e-12)


def test_orthonormalize_bspline2_closed_form(onspline2):
    w = np.linspace(-7, 7, 57)
    s2 = np.sin(w / 2) ** 2
    expected = bspline(2)(w) / (1 - 2 / 3 * s2)
    np.testing.assert_allclose(onspline2(w), expected, rtol=1e-12)


def test_orthonormalize_gaussian_at_zero(ongauss):
    assert ongauss(0.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("name", ["onspline2", "onspline4", "ongauss"])
def test_orthonormalized_pass_check(name, request):
    rep = check_orthonormal(request.getfixturevalue(name), 1024, 1e-8)
    assert rep.passed


def test_orthonormalize_degenerate():
    # a band that misses part of every period has a vanishing Gram function
    with pytest.raises(DegenerateGeneratorError):
        orthonormalize(dilate(shannon(), 2.0))


def test_tensorize_singleton():
    g = shannon()
    assert tensorize([g]) is g


def test_tensorize_examples():
    t = tensorize([shannon(), shannon()])
    assert t.dim == 2
    assert t(np.array([0.0, 1.5 * PI])) == 0.0
    t2 = tensorize([shannon(), bspline(2)])
    assert t2(np.array([PI / 2, 0.0])) == pytest.approx(1.0)


def test_tensor_is_product(rng):
    a, b = bspline(2), gaussian(0.7)
    t = tensorize([a, b])
    pts = rng.uniform(-10, 10, (500, 2))
    np.testing.assert_allclose(t(pts), a(pts[:, 0]) * b(pts[:, 1]), rtol=1e-14)


def test_tensorize_empty():
    with pytest.raises(InputError):
        tensorize([])


@pytest.mark.parametrize("bad", [
    {"kind": "bspline", "order": 0},
    {"kind": "bspline", "order": 1.5},
    {"kind": "gaussian", "sigma": 0},
    {"kind": "gaussian", "sigma": -1},
    {"kind": "dilated", "a": 0, "inner": {"kind": "shannon"}},
    {"kind": "dilated", "a": 2},
    {"kind": "orthonormalized"},
    {"kind": "tensor", "axes": []},
    {"kind": "tabulated", "file": "x.csv"},
    {"kind": "nope"},
    {"order": 2},
])
def test_spec_errors(bad):
    with pytest.raises(InputError):
        make_generator(bad)


def test_spec_roundtrip():
    obj = {"kind": "tensor", "axes": [
        {"kind": "dilated", "a": 2.0, "inner": {"kind": "shannon"}},
        {"kind": "orthonormalized", "inner": {"kind": "bspline", "order": 2}},
        {"kind": "gaussian", "sigma": 0.5},
    ]}
    spec = GeneratorSpec.from_dict(obj)
    assert spec.to_dict() == obj
    assert GeneratorSpec.from_dict(json.loads(json.dumps(spec.to_dict()))) == spec
    assert make_generator(spec).dim == 3


def _write_table(path, w, v):
    with open(path, "w") as fh:
        fh.write("omega,phihat_sq\n")
        for a, b in zip(w, v):
            fh.write(f"{float(a)!r},{float(b)!r}\n")


def test_tabulated_interpolates(tmp_path):
    w = np.linspace(-30, 30, 6001)
    v = bspline(2)(w)
    p = tmp_path / "b2.csv"
    _write_table(p, w, v)
    env = SpectralEnvelope("polynomial", 9.0, 2.0)
    g = tabulated(p, env)
    assert g.sampled
    assert g(PI) == pytest.approx((2 / PI) ** 4, rel=1e-3)
    assert g(100.0) == pytest.approx(env.bound_sq(100.0))


def test_tabulated_via_spec(tmp_path):
    w = np.linspace(-10, 10, 101)
    _write_table(tmp_path / "t.csv", w, np.exp(-w ** 2))
    obj = {"kind": "tabulated", "file": "t.csv", "envelope": {"mode": "super_exponential", "c": 2.0, "p": 0.5}}
    g = make_generator(GeneratorSpec.from_dict(obj, base_dir=tmp_path))
    assert g(0.0) == pytest.approx(1.0)


def test_tabulated_envelope_violation(tmp_path):
    w = np.linspace(-10, 10, 101)
    _write_table(tmp_path / "t.csv", w, np.full_like(w, 5.0))
    with pytest.raises(InputError):
        tabulated(tmp_path / "t.csv", SpectralEnvelope("polynomial", 1.0, 2.0))


def test_tabulated_bad_files(tmp_path):
    env = SpectralEnvelope("polynomial", 1.0, 2.0)
    with pytest.raises(InputError):
        tabulated(tmp_path / "missing.csv", env)
    (tmp_path / "dec.csv").write_text("omega,phihat_sq\n1,0.1\n0,0.1\n")
    with pytest.raises(InputError):
        tabulated(tmp_path / "dec.csv", env)


def test_envelope_validation():
    with pytest.raises(InputError):
        SpectralEnvelope("polynomial", -1.0, 2.0)
    with pytest.raises(InputError):
        SpectralEnvelope("cubic", 1.0, 2.0)
