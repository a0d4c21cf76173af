import math

import numpy as np
import pytest

from greedylab import witnesses as wit
from greedylab.errors import SizeGuardError
from greedylab.spaces import DirectSumSpace, make_summing


@pytest.mark.parametrize("spec", wit.registry(), ids=lambda s: s.name)
def test_registry_expected_values_reevaluate(spec):
    for w in spec.generate():
        space = None if w.role in ("kernel", "lacunary_nu") else wit.witness_space(w)
        tol = 1e-6 if space is None else 1e-9
        for key, (got, want, ok) in wit.check_expected(w, space, tol).items():
            assert ok, (w.name, key, got, want)


def test_summing_examples():
    by = {w.name: w for w in wit.summing_witnesses(2)}
    space = make_summing(by["summing_g"].x.size)
    m = wit.measure(by["summing_g"], space)
    assert m["numerator"] == pytest.approx(4) and m["denominator"] == pytest.approx(1)
    assert wit.measure(by["summing_nu"], space)["ratio"] == pytest.approx(9)
    w1 = next(w for w in wit.summing_witnesses(1) if w.role == "L")
    assert wit.measure(w1, make_summing(w1.x.size))["ratio"] == pytest.approx(7)


def test_summing_compact_L_witness():
    w = next(w for w in wit.summing_witnesses(3, 14) if w.role == "L")
    assert w.name == "summing_L_compact"
    m = wit.measure(w, make_summing(14))
    assert m["ratio"] == pytest.approx(19) and np.count_nonzero(w.feasible_z) == 3


def test_nu_witnesses_are_disjoint():
    for w in wit.summing_witnesses(3) + wit.direct_sum_witnesses("l1_c0", 3, 4, 4):
        if w.role == "nu":
            A, B = set(w.sets["A"]), set(w.sets["B"])
            supp = set(np.flatnonzero(w.x) + 1)
            assert not (A & B) and not (A & supp) and not (B & supp)


@pytest.mark.parametrize("family,kw,want", [("l1_c0", {}, 4.0), ("l1_lq", {"q": 2.0}, 2.0),
                                             ("lp_c0", {"p": 2.0}, 3.0)])
def test_direct_sum_examples(family, kw, want):
    N = 4 if family == "lp_c0" else 3
    w = wit.direct_sum_witnesses(family, N, N + 1, N + 1, **kw)[0]
    assert wit.measure(w, wit.witness_space(w))["ratio"] == pytest.approx(want)


def test_trig_kernels():
    assert wit.measure(wit.trig_witnesses("dirichlet", 8))["l2_norm"] == pytest.approx(math.sqrt(17), abs=1e-9)
    rs = wit.trig_witnesses("rudin_shapiro", 4)
    assert wit.measure(rs)["sup_norm"] <= 4 * math.sqrt(2) + 1e-9
    assert wit.measure(wit.trig_witnesses("vallee_poussin", 8))["l1_norm"] <= 3


def test_rudin_shapiro_identity():
    t = 2 * np.pi * np.arange(512) / 512
    for k in range(1, 6):
        P, Q = wit.rudin_shapiro(k)
        assert set(np.unique(P)) <= {-1, 1} and set(np.unique(Q)) <= {-1, 1}
        E = np.exp(1j * np.outer(t, np.arange(P.size)))
        assert np.allclose(np.abs(E @ P) ** 2 + np.abs(E @ Q) ** 2, 2 ** (k + 1), atol=1e-8)


def test_vallee_poussin_coefficients():
    V = wit.vallee_poussin(5)
    assert all(V[k] == pytest.approx(1) for k in range(-5, 6))
    assert max(abs(k) for k in V if abs(V[k]) > 1e-15) < 10


def test_lacunary_witness_is_deterministic():
    a = wit.trig_witnesses("lacunary_nu", 4, samples=20_000, seed=3)
    b = wit.trig_witnesses("lacunary_nu", 4, samples=20_000, seed=3)
    assert a.params["ratio"] == b.params["ratio"]
    assert min(a.sets["A"]) >= 4 * 4 and len(a.sets["A"]) == len(a.sets["B"])


def test_mixed_dyadic_examples():
    w = wit.mixed_dyadic_witnesses(2, 3)[0]
    m = wit.measure(w, wit.witness_space(w))
    assert m["denominator"] == pytest.approx(math.sqrt(6)) and m["numerator"] == pytest.approx(3)
    w1 = wit.mixed_dyadic_witnesses(1, 3, "f")[0]
    assert wit.measure(w1, wit.witness_space(w1))["ratio"] == pytest.approx(0.5)
    with pytest.raises(SizeGuardError):
        wit.mixed_dyadic_witnesses(2, 6)


def test_seed_helpers():
    space = make_summing(9)
    seeds = wit.operator_seeds(space, 2)
    assert seeds and all(v.size == 9 for v in seeds)
    nus = wit.nu_seeds(DirectSumSpace(1, 3, math.inf, 4), 3)
    A, B, eps, eta, x = nus[0]
    assert A == [1, 2, 3] and B == [4, 5, 6] and x[6] == 1
    assert wit.nu_seeds(make_summing(5), 2) == []
