import math

import numpy as np
import pytest

import mfcz


def test_variation_examples():
    assert mfcz.tilde_variation(np.array([0, 1, 0, 1]), 2.0) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert mfcz.variation([0, 1, 0, 1], 2.0) == pytest.approx(1 + math.sqrt(3), rel=1e-15)
    assert mfcz.tilde_variation([0, 1, 0, 1], math.inf) == 1.0
    vec = np.array([[3, 0], [0, 4]], dtype=complex)
    assert mfcz.tilde_variation(vec, 1.0) == pytest.approx(5.0)


def test_jump_cover_and_blocks():
    assert mfcz.jump_cover([0, 0.5, 1.2, 1.3], 1.0) == [1, 3]
    assert mfcz.jump_cover([0, 0.5, 1.2, 1.3], 1.0, keys=[10, 20, 30, 40]) == [10, 30]
    assert mfcz.rm_block(5, 0) == (4, 5)
    assert mfcz.rm_block(5, 2) == (0, 4)


def test_gram_and_kernel_ratio():
    B = mfcz.gram(0.0, 3.0, [0.0, 1.0 / 3.0])
    assert np.allclose(B, 3 * np.eye(2), atol=1e-14)
    assert mfcz.be_ratio([17.25], 0.0, 1.0, 256) == pytest.approx(1 / math.sqrt(3), rel=1e-12)


def test_constants():
    assert mfcz.D(1) == pytest.approx(4.2356404221348882186, rel=1e-12)
    assert mfcz.D(0) == pytest.approx(1.0)
    assert mfcz.symbol_variation(0.0, -6, 0, 2.5) == 0.0


def test_decomposition_and_operator():
    n = 1024
    x = np.arange(n) / n
    f = np.exp(-((x - 0.5) / 0.02) ** 2) * np.exp(2j * np.pi * 5 * x)
    out = mfcz.cz_decompose(f, 0.0, 1.0 / n, [0.0, 2.0, 5.0], 0.05)
    assert out["N"] == 3
    assert out["intervals"]
    assert out["diagnostics"]["violations"] == []
    g, g0 = mfcz.cz_good_part(f, 0.0, 1.0 / n, [0.0, 2.0, 5.0], 0.05)
    assert g.shape == (17 * n,)
    assert g0 == pytest.approx(-8.0)

    V = mfcz.calV(f, 0.0, 1.0 / n, [5.0, 40.0], 3, 9, 4.0)
    assert V.shape == (n,)
    assert np.all(V >= 0)
    assert np.all(mfcz.calV(np.zeros(n), 0.0, 1.0 / n, [5.0], 3, 9) == 0)


def test_errors():
    with pytest.raises(ValueError):
        mfcz.gram(0.0, 1.0, [1.0, 0.5])
    with pytest.raises(ValueError):
        mfcz.be_ratio([1.0], 0.0, 1.0, 10)


def test_property_suite():
    results = mfcz.check(seed=3, grid_log2=10)
    failed = [r for r in results if not r[1]]
    assert len(results) == 24
    assert not failed, failed


def test_read_signal(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("x,re,im\n0,1,0\n0.5,2,-1\n")
    samples, x0, dx = mfcz.read_signal(str(path))
    assert x0 == 0.0 and dx == 0.5
    assert samples[1] == 2 - 1j
    path.write_text("x,re,im\n0,1,0\n0.5,oops,0\n")
    with pytest.raises(mfcz.ParseError):
        mfcz.read_signal(str(path))
