import math

import numpy as np
import pytest

import promips


def test_chi_square():
    assert promips.chi2_cdf(2, 2 * math.log(2)) == pytest.approx(0.5, abs=1e-12)
    assert promips.chi2_inv_cdf(6, 0.7) > 0
    with pytest.raises(ValueError):
        promips.chi2_inv_cdf(2, 1.0)


def test_optimized_dimension():
    assert promips.optimized_dimension(17770) == 6
    assert promips.optimized_dimension(11164866) == 10


def test_build_query_and_reload(tmp_path):
    data = promips.gaussian_mixture(n=2000, d=32, seed=3)
    assert data.shape == (2000, 32)
    config = promips.IndexConfig()
    config.m = 6
    index = promips.build_index(data[:-5], config)
    assert (index.n, index.d, index.m) == (1995, 32, 6)

    q = data[-1]
    exact = promips.brute_force(data[:-5], q, k=5)
    assert exact["ips"][0] == pytest.approx(float(np.max(data[:-5] @ q)))
    for variant in ("i", "ii"):
        got = index.query(q, k=5, c=0.9, p=0.5, variant=variant)
        assert len(got["ids"]) == 5
        assert got["ips"][0] >= 0.9 * exact["ips"][0]
        assert got["pages"] > 0

    path = str(tmp_path / "idx.pmip")
    index.save(path)
    loaded = promips.load_index(path)
    assert loaded.query(q, k=5) == index.query(q, k=5)


def test_errors(tmp_path):
    bad = tmp_path / "bad.pmip"
    bad.write_bytes(b"nope")
    with pytest.raises(promips.FormatError):
        promips.load_index(str(bad))
    index = promips.build_index(promips.gaussian_mixture(n=200, d=8))
    with pytest.raises(ValueError):
        index.query(np.zeros(3))
    with pytest.raises(ValueError):
        index.query(np.ones(8), c=1.5)
