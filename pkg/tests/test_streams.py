"""Counter-based substreams: reproducibility and distributional sanity."""

import numpy as np
from scipy.stats import chi2

from selrtest import streams


def test_substream_reproducible_and_independent():
    a = streams.substream(7, 3).random(10)
    b = streams.substream(7, 3).random(10)
    np.testing.assert_array_equal(a, b)
    c = streams.substream(7, 4).random(10)
    d = streams.substream(8, 3).random(10)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_standard_normal_moments():
    z = streams.standard_normal(streams.substream(1, 0), 200_000)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1.0) < 0.01
    assert abs(np.mean(z**3)) < 0.03  # symmetric


def test_rademacher_values():
    s = streams.rademacher(streams.substream(2, 0), 10_000)
    assert set(np.unique(s)) == {-1.0, 1.0}
    assert abs(s.mean()) < 0.05
