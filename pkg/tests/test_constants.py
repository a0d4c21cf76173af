import itertools
import math

import numpy as np
import pytest

from greedylab.constants import (KINDS, ConstantEstimate, ConstantTable, SearchStrategy, a_property_constant,
                                 compute_all, democracy_constant, operator_constant, replay)
from greedylab.errors import DependencyError, InternalConsistencyError, SizeGuardError
from greedylab.spaces import DirectSumSpace, make_james, make_summing, make_trig

INF = math.inf
QUICK = SearchStrategy.quick(0)


def brute_democracy(space, N, disjoint=False, signed=False):
    """Direct double loop over sets and signs, independent of the vectorised code."""
    d = space.dim
    best = 0.0
    for k in range(1, N + 1):
        for A in itertools.combinations(range(d), k):
            for B in itertools.combinations(range(d), k):
                if disjoint and set(A) & set(B):
                    continue
                signs = list(itertools.product([-1.0, 1.0], repeat=k)) if signed else [(1.0,) * k]
                num = max(space.norm(_ind(d, A, s)) for s in signs)
                den = min(space.norm(_ind(d, B, s)) for s in signs)
                best = max(best, num / den)
    return best


def _ind(d, A, s):
    v = np.zeros(d)
    v[list(A)] = s
    return v


def test_democracy_spec_examples():
    assert democracy_constant(make_summing(8), 3, "tmu").lower == pytest.approx(3)
    assert democracy_constant(DirectSumSpace(1, 4, INF, 4), 3, "mu").lower == pytest.approx(3)
    e = democracy_constant(DirectSumSpace(1, 4, 2, 4), 4, "tmu")
    assert e.exact and e.lower == pytest.approx(2)
    for space in (make_summing(5), make_james(2, 5), DirectSumSpace(1, 3, 2, 3)):
        assert democracy_constant(space, 1, "gamma").lower == pytest.approx(1)


@pytest.mark.parametrize("kind,disjoint,signed", [("mu", False, False), ("mu_d", True, False),
                                                   ("tmu", False, True), ("tmu_d", True, True)])
def test_democracy_matches_brute_force(kind, disjoint, signed):
    for space in (make_summing(6), make_james(2, 6), DirectSumSpace(1, 3, 2, 3)):
        e = democracy_constant(space, 2, kind)
        assert e.exact
        assert e.lower == pytest.approx(brute_democracy(space, 2, disjoint, signed), rel=1e-12)
        assert replay(space, e) == pytest.approx(e.lower, rel=1e-12)


def test_summing_gamma_matches_claim():
    space = make_summing(8)
    for N in (1, 2, 3, 4):
        assert democracy_constant(space, N, "gamma").lower == pytest.approx(math.ceil(N / 2))


def test_complex_democracy_is_bracketed():
    e = democracy_constant(make_trig(1, 2, 128), 2, "tmu")
    assert e.lower >= 1 and e.upper >= e.lower and not e.exact


def test_democracy_guard():
    with pytest.raises(SizeGuardError):
        democracy_constant(make_summing(40), 6, "tmu", guard=10**6)


def test_operator_constants_on_summing():
    space = make_summing(10)
    g = operator_constant(space, 2, "g", QUICK)
    assert g.exact and g.lower == pytest.approx(4)
    assert replay(space, g) == pytest.approx(4, rel=1e-12)
    gc = operator_constant(space, 2, "g_c", QUICK)
    assert gc.exact and gc.lower == pytest.approx(5)


@pytest.mark.parametrize("kind", ["k", "k_c", "g", "g_c", "g_tilde"])
def test_operator_constants_unconditional(kind):
    space = DirectSumSpace(1, 3, INF, 3)
    for N in (1, 2, 3):
        e = operator_constant(space, N, kind, QUICK)
        assert e.exact and e.lower == pytest.approx(1)


def test_k_at_full_order_is_at_least_one():
    e = operator_constant(make_james(2, 4), 4, "k", QUICK)
    assert e.lower >= 1 - 1e-12


def test_a_property_examples():
    e = a_property_constant(make_summing(9), 2, QUICK)
    assert e.exact and e.lower == pytest.approx(9)
    e = a_property_constant(DirectSumSpace(1, 4, INF, 4), 3, QUICK)
    assert e.exact and e.lower == pytest.approx(4)
    e = a_property_constant(DirectSumSpace(1, 4, 2, 4), 3, QUICK)
    assert e.exact and e.lower == pytest.approx(2)
    w = e.witness
    assert not (set(w["A"]) & set(w["B"]))


def test_estimate_invariants():
    with pytest.raises(InternalConsistencyError):
        ConstantEstimate("mu", 1, 2.0, 1.0, {}, [])
    e = ConstantEstimate("mu", 1, 1.0, INF, {}, [])
    assert not e.exact and e.to_dict()["upper"] is None
    assert ConstantEstimate("mu", 1, 1.0, 1.0 + 1e-12, {}, []).exact


def test_table_dependencies_and_envelope():
    space = make_summing(6)
    table = ConstantTable(space)
    with pytest.raises(DependencyError):
        table.get("nu", 1)
    table.put(ConstantEstimate("g", 3, 1.0, 2.5, {}, []))
    assert table.upper("g", 2) == 2.5
    assert table.upper("g", 4) == pytest.approx(min(8, 2 * 4))


def test_compute_all_properties():
    space = make_summing(8)
    table = compute_all(space, [1, 2], QUICK)
    assert {e.kind for e in table.rows()} == set(KINDS)
    for kind in KINDS:
        assert table.get(kind, 1).lower <= table.get(kind, 2).lower + 1e-12
        for N in (1, 2):
            e = table.get(kind, N)
            assert e.lower <= e.upper
            if e.witness:
                assert replay(space, e) == pytest.approx(e.lower, abs=1e-12 * max(1, e.lower))
    d = table.get("nu", 2).to_dict()
    assert set(d) >= {"kind", "N", "lower", "upper", "exact", "witness", "citations"}
    with pytest.raises(ValueError):
        compute_all(space, [9], QUICK)
