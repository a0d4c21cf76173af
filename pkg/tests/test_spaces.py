import itertools
import math

import numpy as np
import pytest

from greedylab.core import indicator
from greedylab.errors import ConfigError, LayoutError, PrecisionError
from greedylab.spaces import (DirectSumSpace, DyadicLayout, L1SumSpace, example_layout, make_direct_sum,
                              make_james, make_mixed_dyadic, make_summing, make_trig, space_from_config)

INF = math.inf


def test_summing_norm_examples():
    s = make_summing(5)
    assert s.norm(indicator({1, 2, 3}, None, 5)) == 3
    assert s.norm(np.array([-1.0, 1, -1, 1, 0])) == 1
    assert s.norm(np.array([-1.0, 2, -2, 2, -2])) == 1
    assert (s.meta.K, s.meta.K_star) == (2.0, 2.0)


def test_summing_norm_is_sup_of_prefix_sums():
    """Exhaustive over sign vectors of length <= 6 against an independent loop."""
    for d in range(1, 7):
        s = make_summing(d)
        X = np.array(list(itertools.product([-1.0, 0.0, 1.0], repeat=d)))
        ref = [max(abs(sum(row[:m])) for m in range(1, d + 1)) for row in X]
        assert np.allclose(s.norms(X), ref)


def test_direct_sum_examples():
    s = make_direct_sum({"p": 1, "dim": 4}, {"c0": True, "dim": 4})
    assert s.norm(indicator({1, 2, 3}, None, 8)) == 3
    assert s.norm(indicator({5, 6, 7}, None, 8)) == 1
    t = DirectSumSpace(1, 4, 2, 4)
    v = indicator({1, 2, 3}, None, 8)
    v[4] = 1
    assert t.norm(v) == 4
    assert (t.meta.K, t.meta.K_star) == (1.0, 1.0)


def brute_james(a, q):
    d = len(a)
    best = 0.0
    for r in range(1, d + 1):
        for cuts in itertools.combinations(range(1, d + 1), r):
            chain = (0,) + cuts
            s = sum(abs(sum(a[chain[k]: chain[k + 1]])) ** q for k in range(len(chain) - 1))
            best = max(best, s ** (1 / q))
    return best


def test_james_examples():
    assert make_james(2, 5).norm(indicator({1, 3, 5}, None, 5)) == pytest.approx(3)
    assert make_james(2, 3).norm(np.array([1.0, -1, 1])) == pytest.approx(math.sqrt(3))
    for q in (1, 2, 3.5):
        assert make_james(q, 2).norm(np.array([1.0, 1])) == pytest.approx(2)


@pytest.mark.parametrize("q", [1.0, 1.5, 2.0, 4.0])
def test_james_dp_matches_partition_enumeration(q):
    rng = np.random.default_rng(int(q * 10))
    for d in (3, 6, 10):
        J = make_james(q, d)
        X = rng.standard_normal((6, d))
        for x, v in zip(X, J.norms(X)):
            assert v == pytest.approx(brute_james(x, q), rel=1e-10)


def test_f_norm_of_level_averages():
    sp = make_mixed_dyadic(2, DyadicLayout((0, 1)), "f")
    a = np.concatenate([[1.0], [0.5, 0.5]])
    assert sp.norm(a) == pytest.approx(math.sqrt(2))


def test_f_norm_matches_monte_carlo():
    rng = np.random.default_rng(3)
    layout = DyadicLayout((0, 2, 1, 3))
    sp = make_mixed_dyadic(2, layout, "f")
    a = rng.standard_normal(layout.dim)
    t = rng.random(200_000)
    acc = np.zeros_like(t)
    for k, blk in zip(layout.levels, layout.blocks):
        cell = np.floor(t * 2**k).astype(int)
        acc += (np.abs(a[blk.start + cell]) * 2**k) ** 2
    vals = np.sqrt(acc)
    est, se = vals.mean(), vals.std() / math.sqrt(t.size)
    assert abs(sp.norm(a) - est) <= 3 * se


def test_mixed_dyadic_alternating_vector():
    n = 3
    layout = example_layout(n)
    sp = make_mixed_dyadic(2, layout)
    x = np.zeros(layout.dim)
    for j, (k, blk) in enumerate(zip(layout.levels, layout.blocks), start=1):
        x[blk.start: blk.stop] = (-1) ** (j + 1) * 2.0**-k
    assert sp.norm(x) == pytest.approx(math.sqrt(2 * n), rel=1e-12)
    assert sp.f_norms(x[None])[0] == pytest.approx(math.sqrt(2 * n), rel=1e-12)


def test_triple_norm_of_signed_indicators_at_most_size():
    rng = np.random.default_rng(5)
    sp = make_mixed_dyadic(2, example_layout(2))
    ratios = []
    for _ in range(500):
        k = int(rng.integers(1, 6))
        A = rng.choice(sp.dim, size=k, replace=False)
        v = np.zeros(sp.dim)
        v[A] = rng.choice([-1.0, 1.0], size=k)
        n = sp.norm(v)
        assert n <= k + 1e-12
        ratios.append(n / k)
    assert min(ratios) > 0


def test_layout_errors():
    with pytest.raises(LayoutError):
        DyadicLayout((0, 0))
    with pytest.raises(LayoutError):
        DyadicLayout(())


def test_trig_examples():
    sp = make_trig(1, 8, 512)
    for p in (1, 1.5, 3):
        s = make_trig(p, 4, 256)
        assert s.norm(s.unit_vector(3)) == pytest.approx(1, abs=1e-12)
    D = np.ones(sp.dim, dtype=complex)
    assert make_trig(2, 8, 512).norm(D) == pytest.approx(math.sqrt(17), abs=1e-8)
    coarse, fine = make_trig(1, 8, 8192).norm(D), make_trig(1, 8, 32768).norm(D)
    assert coarse == pytest.approx(fine, rel=1e-6)
    with pytest.raises(PrecisionError):
        make_trig(1, 8, 64)


@pytest.mark.parametrize("space", [make_summing(6), DirectSumSpace(1, 3, INF, 3), DirectSumSpace(1, 3, 2, 3),
                                   DirectSumSpace(3, 3, 1.5, 3), make_james(2, 6),
                                   make_mixed_dyadic(2, example_layout(2)), make_trig(1.5, 3, 128),
                                   L1SumSpace([make_summing(3), make_james(2, 3)])])
def test_norm_axioms(space):
    rng = np.random.default_rng(11)
    n = 10_000
    d = space.dim
    X = rng.standard_normal((n, d))
    Y = rng.standard_normal((n, d))
    if space.field == "complex":
        X = X + 1j * rng.standard_normal((n, d))
        Y = Y + 1j * rng.standard_normal((n, d))
    lam = rng.standard_normal(n)
    tol = 1e-8 if space.field == "complex" else 1e-10
    nx, ny, nxy = space.norms(X), space.norms(Y), space.norms(X + Y)
    assert np.all(nxy <= (nx + ny) * (1 + tol))
    assert np.allclose(space.norms(lam[:, None] * X), np.abs(lam) * nx, rtol=tol)
    for i in range(1, d + 1):
        assert space.meta.kappa1 - tol <= space.norm(space.unit_vector(i)) <= space.meta.kappa2 + tol


def test_config_parsing():
    assert space_from_config('{"space":"summing","dim":14}').dim == 14
    s = space_from_config({"space": "direct_sum", "left": {"p": 1, "dim": 8}, "right": {"c0": True, "dim": 8}})
    assert s.dim == 16 and s.polyhedral_blocks() is not None
    assert space_from_config({"space": "james", "q": 2, "dim": 10}).dim == 10
    assert space_from_config({"space": "mixed_dyadic", "q": 2, "levels": [0, 2, 1, 3]}).dim == 15
    assert space_from_config({"space": "trig", "p": 1, "n_max": 32, "M": 4096}).dim == 65
    for bad in ('{"space":"nope"}', "not json", '{"space":"summing"}', "[1]"):
        with pytest.raises(ConfigError):
            space_from_config(bad)
