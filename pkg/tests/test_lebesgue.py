import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab import witnesses as wit
from greedylab.constants import ConstantEstimate, ConstantTable, SearchStrategy, compute_all
from greedylab.core import truncate
from greedylab.errors import DependencyError
from greedylab.lebesgue import (BoundCertificate, Candidate, lebesgue_lower, lemma_suite,
                                construction_certificates, sandwich_certificates, sigma, sigma_tilde,
                                theorem_upper_bounds)
from greedylab.spaces import DirectSumSpace, make_james, make_summing, make_trig

INF = math.inf
QUICK = SearchStrategy.quick(0)


@pytest.fixture(scope="module")
def l1c0():
    space = DirectSumSpace(1, 4, INF, 4)
    return space, compute_all(space, [1, 2, 3], QUICK)


@pytest.fixture(scope="module")
def summing():
    space = make_summing(14)
    return space, compute_all(space, [1, 2], QUICK)


def test_sigma_tilde_examples():
    space = DirectSumSpace(1, 4, INF, 4)
    x = np.array([1.0, 1, 1, 0, 0, 0, 0, 0])
    r = sigma_tilde(space, x, 1)
    assert r.value == 2 and r.exact and len(r.support) <= 1
    r = sigma_tilde(space, x, 8)
    assert r.value == 0
    assert np.array_equal(r.minimizer, x)


def test_sigma_tilde_summing_construction():
    space = make_summing(13)
    x = np.array([0.5, 1, 0.5, 0.5, 1, 0.5, 0.5, -1, 1, -1, 1, 0, 0])
    full = sigma_tilde(space, x, 2)
    restricted = min(space.norm(np.where(np.isin(np.arange(13), A), 0, x))
                     for k in range(3) for A in itertools.combinations(range(7, 11), k))
    assert full.value <= restricted + 1e-12
    brute = min(space.norm(np.where(np.isin(np.arange(13), A), 0, x))
                for k in range(3) for A in itertools.combinations(range(13), k))
    assert full.value == pytest.approx(brute, abs=1e-15)
    assert full.value_full_size >= full.value


def test_sigma_examples():
    w = next(w for w in wit.summing_witnesses(2, 14) if w.role == "L")
    space = make_summing(14)
    r = sigma(space, w.x, 2, mode="witness_only", z0=w.feasible_z)
    assert r.value == pytest.approx(0.5)
    assert sigma(space, w.x, 2).value <= 0.5 + 1e-12
    l1 = make_james(1, 3)
    r = sigma(l1, np.array([3.0, 2, 1]), 1)
    assert r.exact and r.value == pytest.approx(3)
    assert sigma(space, space.unit_vector(3) * 2, 1).value == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        sigma(space, w.x, 1, mode="witness_only", z0=w.feasible_z)


def test_sigma_subgradient_on_hilbert_space():
    """In L2 the best N-term error is the l2 tail, so sigma = sigma_tilde exactly."""
    space = make_trig(2, 2, 128)
    rng = np.random.default_rng(2)
    x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    r = sigma(space, x, 2, iters=400)
    assert not r.exact
    assert r.value == pytest.approx(sigma_tilde(space, x, 2).value, rel=1e-4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3).map(float), min_size=5, max_size=5))
def test_sigma_orderings(vals):
    x = np.array(vals)
    space = make_summing(5)
    prev = INF
    for N in range(0, 6):
        s = sigma(space, x, N).value
        assert s <= sigma_tilde(space, x, N).value + 1e-9
        assert s <= prev + 1e-9
        prev = s
    assert prev == pytest.approx(0, abs=1e-9)


def test_certificate_status():
    assert BoundCertificate("a", 1.0, 1.0 - 5e-10).holds
    assert not BoundCertificate("a", 1.0, 1.0 - 5e-9).status == "holds"
    assert BoundCertificate("a", 1e9, INF).holds
    c = BoundCertificate("a", 2.0, 3.0)
    assert c.slack == 1.0 and c.to_dict()["status"] == "holds"


def test_lebesgue_lower_examples(summing, l1c0):
    space, table = summing
    cL, cLt, _ = lebesgue_lower(space, 2, table)
    assert cL.lhs >= 13 - 1e-9 and cLt.lhs >= 9 - 1e-9
    space, table = l1c0
    _, cLt, _ = lebesgue_lower(space, 3, table)
    assert cLt.lhs >= 4 - 1e-9
    cL, cLt, recs = lebesgue_lower(space, 1, None, [Candidate(space.unit_vector(1), "e1")])
    assert cL.lhs == 0 and recs[0]["numerator"] == 0


def test_theorem_bounds_examples(summing, l1c0):
    space, table = l1c0
    cL, cLt, _ = lebesgue_lower(space, 3, table)
    ups = theorem_upper_bounds(space, table, 3, cL.lhs, cLt.lhs)
    cor = [c for c in ups if c.name.startswith("L = Lt")]
    assert len(cor) == 1 and cor[0].exact_value == pytest.approx(4) and cor[0].holds
    assert all(c.holds for c in ups)
    space, table = summing
    ups = theorem_upper_bounds(space, table, 2)
    assert next(c.rhs for c in ups if c.name == "L <= 1 + 3 K N") == pytest.approx(13)
    assert next(c.rhs for c in ups if c.name == "Lt <= 1 + 2 K N") == pytest.approx(9)
    names = {c.name for c in ups}
    assert "L <= min{k^c_2N, k^c_N g^c_N} nu_N" in names
    with pytest.raises(DependencyError):
        theorem_upper_bounds(space, ConstantTable(space), 1)


def test_theorem_two_closes_on_l1_l2():
    space = DirectSumSpace(1, 4, 2, 4)
    table = compute_all(space, [3], QUICK, kinds=("mu", "tmu", "tmu_d", "gamma", "k", "k_c", "g", "g_c",
                                                  "g_tilde", "g_hat", "nu"))
    ups = theorem_upper_bounds(space, table, 3)
    assert next(c.rhs for c in ups if c.name == "L <= k^c_2N nu_N") == pytest.approx(2)


def test_lemma_suite_examples(summing, l1c0):
    space, table = summing
    x = np.array([2.0, -3, 0.5] + [0.0] * 11)
    t = truncate(x, 1.0)
    assert space.norm(t.vector) == pytest.approx(1)
    assert space.norm(t.vector) <= table.upper("g_c", 2) * space.norm(x)
    certs = lemma_suite(space, table, 2, samples=300, seed=1, extra=[x, np.ones(14)])
    assert all(c.holds for c in certs) and all(c.checks > 0 for c in certs)
    space, table = l1c0
    certs = lemma_suite(space, table, 3, samples=500, seed=2)
    talp = next(c for c in certs if c.name.startswith("||T_a (I-P_A) x|| <= k^c"))
    assert talp.holds and talp.lhs <= talp.rhs


def test_lemma_suite_flags_an_underestimated_upper(l1c0):
    space, table = l1c0
    bad = ConstantTable(space)
    for est in table.rows():
        bad.put(est)
    bad.put(ConstantEstimate("tmu", 2, 0.5, 0.5, {}, []))  # deliberately wrong
    certs = lemma_suite(space, bad, 2, samples=300, seed=0)
    assert any(not c.holds for c in certs)


def test_orderings_and_sandwich(summing):
    space, table = summing
    for N in (1, 2):
        cL, cLt, recs = lebesgue_lower(space, N, table)
        ups = theorem_upper_bounds(space, table, N, cL.lhs, cLt.lhs)
        prop = construction_certificates(space, N, table, cL.lhs, cLt.lhs, recs)
        assert len(prop) >= 3 and all(c.holds for c in prop)
        assert all(c.holds for c in sandwich_certificates(space, table, N, cL.lhs, cLt.lhs, ups))
