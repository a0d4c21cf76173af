"""Greedy, democracy and A-property constants of a finite-dimensional basis.

Democracy-type constants (mu, mu_d, tmu, tmu_d, gamma) are suprema over finite
families and are computed exactly by enumeration (for complex scalars the
sign patterns are discretised to roots of unity and a perturbation bound
supplies a sound upper value).  The operator constants and nu involve a
supremum over vectors; they come back as a certified lower bound (with a
witness that reproduces it) and an upper bound taken from closed forms or
from the elementary inequalities relating the constants.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import witnesses as wit
from .core import (
    _greedy_sets0,
    is_greedy_set0,
    sign_patterns,
    subset_masks,
    subsets_upto,
    zero_based,
)
from .errors import DependencyError, InternalConsistencyError, SizeGuardError
from .spaces import SpaceOracle

KINDS = ("k", "k_c", "g", "g_c", "g_hat", "g_tilde", "mu", "mu_d", "tmu", "tmu_d", "nu", "gamma")
OPERATOR_KINDS = ("k", "k_c", "g", "g_c", "g_hat", "g_tilde")
DEMOCRACY_KINDS = ("mu", "mu_d", "tmu", "tmu_d", "gamma")
ENUM_GUARD = 10**8
EXACT_RTOL = 1e-9


def is_exact(lower: float, upper: float) -> bool:
    if not math.isfinite(upper):
        return False
    return upper - lower <= EXACT_RTOL * max(1.0, abs(upper))


@dataclass
class ConstantEstimate:
    """Certified bracket ``lower <= constant <= upper`` for one (kind, N)."""

    kind: str
    N: int
    lower: float
    upper: float
    witness: dict
    citations: list = field(default_factory=list)

    def __post_init__(self):
        if self.lower > self.upper + EXACT_RTOL * max(1.0, abs(self.upper)):
            raise InternalConsistencyError(
                f"{self.kind}_{self.N}: lower {self.lower} exceeds upper {self.upper}")

    @property
    def exact(self) -> bool:
        return is_exact(self.lower, self.upper)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "N": self.N,
            "lower": self.lower,
            "upper": self.upper if math.isfinite(self.upper) else None,
            "exact": self.exact,
            "witness": self.witness,
            "citations": list(self.citations),
        }


@dataclass
class SearchStrategy:
    """Budget for the vector searches behind the operator constants and nu.

    ``grid`` are the magnitudes used for the exhaustive sign/level grid,
    which is enumerated completely while it has at most ``exhaustive_limit``
    points and sampled ``random_grid`` times otherwise.  Coordinate ascent
    maximises one coordinate at a time over ``ascent_points`` values.
    """

    grid: tuple = (0.5, 1.0, 2.0)
    exhaustive_limit: int = 20000
    random_grid: int = 400
    ascent_points: int = 41
    sweeps: int = 5
    restarts: int = 20
    nu_exhaustive_rows: int = 2_000_000
    nu_samples: int = 1500
    nu_refine: int = 8
    roots: int = 8
    seed: int = 0
    known_witnesses: bool = True

    @classmethod
    def quick(cls, seed: int = 0) -> "SearchStrategy":
        return cls(random_grid=150, sweeps=2, restarts=4, nu_samples=300, nu_refine=3,
                   exhaustive_limit=3000, nu_exhaustive_rows=300_000, seed=seed)


# ---------------------------------------------------------------------------
# JSON helpers


def vec_to_json(x) -> list:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return [[float(v.real), float(v.imag)] for v in x]
    return [float(v) for v in x]


def vec_from_json(v) -> np.ndarray:
    if len(v) and isinstance(v[0], (list, tuple)):
        return np.array([complex(a, b) for a, b in v])
    return np.asarray(v, dtype=float)


def set_json(s0: Iterable[int]) -> list:
    return [int(i) + 1 for i in sorted(s0)]


# ---------------------------------------------------------------------------
# democracy family


def _discretisation_slack(space: SpaceOracle, roots: int) -> float:
    """Per-coordinate norm error from rounding a unimodular sign to a root of unity."""
    if space.field == "real":
        return 0.0
    beta = max(space.meta.basis_norms) if space.meta.basis_norms else space.meta.kappa2
    return 2.0 * math.sin(math.pi / (2 * roots)) * beta


def _signed_vectors(d: int, sets: Sequence[tuple], pats: np.ndarray, dtype) -> np.ndarray:
    k = pats.shape[1]
    X = np.zeros((len(sets) * pats.shape[0], d), dtype=dtype)
    if k == 0:
        return X
    idx = np.asarray(sets, dtype=int)
    rows = np.arange(X.shape[0]).reshape(len(sets), pats.shape[0])
    X[rows[:, :, None], idx[:, None, :]] = pats[None, :, :]
    return X


def _level_extremes(space: SpaceOracle, k: int, roots: int):
    """Per k-subset: extreme signed-indicator norms and the signs achieving them."""
    d = space.dim
    sets = list(itertools.combinations(range(d), k))
    pats = sign_patterns(k, space.field, roots, fix_first=True)
    norms = np.empty((len(sets), pats.shape[0]))
    chunk = max(1, 400_000 // max(1, pats.shape[0]))
    for lo in range(0, len(sets), chunk):
        X = _signed_vectors(d, sets[lo: lo + chunk], pats, space.dtype)
        norms[lo: lo + chunk] = space.norms(X).reshape(-1, pats.shape[0])
    return {
        "sets": sets,
        "pats": pats,
        "plain": norms[:, 0],
        "max": norms.max(axis=1),
        "argmax": norms.argmax(axis=1),
        "min": norms.min(axis=1),
        "argmin": norms.argmin(axis=1),
    }


def _disjoint_matrix(sets: Sequence[tuple], d: int) -> np.ndarray:
    M = subset_masks(sets, d).astype(np.int32)
    return (M @ M.T) == 0


def _pattern_json(p) -> list:
    return vec_to_json(np.asarray(p))


def democracy_constant(space: SpaceOracle, N: int, kind: str, roots: int = 8,
                       guard: int = ENUM_GUARD, _cache: dict | None = None) -> ConstantEstimate:
    """Exact mu, mu_d, tmu, tmu_d or gamma by enumeration over sets and signs.

    Disjoint kinds only range over sizes k with 2k <= dim; larger equal-size
    disjoint pairs do not exist.
    """
    if kind not in DEMOCRACY_KINDS:
        raise ValueError(f"not a democracy kind: {kind}")
    d = space.dim
    N_eff = min(N, d)
    if kind in ("mu_d", "tmu_d"):
        N_eff = min(N_eff, d // 2)
    if N_eff < 1:
        return ConstantEstimate(kind, N, 1.0, 1.0, {}, ["no admissible sets; constant is 1"])
    n_pat = 2**N_eff if space.field == "real" else roots**N_eff
    if math.comb(d, N_eff) ** 2 * n_pat > guard:
        raise SizeGuardError(f"{kind}_{N} enumeration on dim {d} exceeds guard {guard}")
    cache = _cache if _cache is not None else {}
    slack = _discretisation_slack(space, roots)
    signed = kind in ("tmu", "tmu_d")

    if kind == "gamma":
        return _gamma(space, N, N_eff, roots, slack)

    best = (-1.0, None)
    best_up = 0.0
    for k in range(1, N_eff + 1):
        key = ("lvl", k, roots)
        if key not in cache:
            cache[key] = _level_extremes(space, k, roots)
        L = cache[key]
        sets = L["sets"]
        num = L["max"] if signed else L["plain"]
        den = L["min"] if signed else L["plain"]
        if kind in ("mu", "tmu"):
            a, b = int(np.argmax(num)), int(np.argmin(den))
            val = num[a] / den[b]
            up_num, up_den = num[a], den[b]
        else:
            dkey = ("disj", k)
            if dkey not in cache:
                cache[dkey] = _disjoint_matrix(sets, d)
            D = cache[dkey]
            R = np.where(D, num[:, None] / den[None, :], -np.inf)
            flat = int(np.argmax(R))
            a, b = divmod(flat, len(sets))
            val = R[a, b]
            up_num, up_den = num[a], den[b]
            if slack:
                Ru = np.where(D, (num[:, None] + k * slack) / (den[None, :] - k * slack), -np.inf)
                Ru[~D] = -np.inf
                up_num, up_den = float(np.max(Ru)), 1.0
                if np.any(D & (den[None, :] - k * slack <= 0)):
                    up_num = math.inf
        if slack and kind in ("mu", "tmu"):
            up = (up_num + k * slack) / (up_den - k * slack) if up_den > k * slack else math.inf
        elif slack:
            up = up_num / up_den
        else:
            up = val
        best_up = max(best_up, up)
        if val > best[0]:
            witness = {"A": set_json(sets[a]), "B": set_json(sets[b])}
            if signed:
                witness["eps"] = _pattern_json(L["pats"][L["argmax"][a]])
                witness["eta"] = _pattern_json(L["pats"][L["argmin"][b]])
            elif space.field == "complex":
                witness["eps"] = _pattern_json(np.ones(k, dtype=complex))
                witness["eta"] = _pattern_json(np.ones(k, dtype=complex))
            best = (float(val), witness)
    cites = ["lower: exhaustive enumeration of sets and signs"]
    if space.field == "complex":
        cites.append(f"upper: {roots}-th roots of unity plus rounding error bound")
        upper = max(best_up, best[0])
    else:
        cites.append("upper: enumeration is exhaustive")
        upper = best[0]
    return ConstantEstimate(kind, N, best[0], float(upper), best[1], cites)


def _gamma(space: SpaceOracle, N: int, N_eff: int, roots: int, slack: float) -> ConstantEstimate:
    d = space.dim
    best_val, best_w, best_up = -1.0, None, 0.0
    for k in range(1, N_eff + 1):
        sets = list(itertools.combinations(range(d), k))
        pats = sign_patterns(k, space.field, roots, fix_first=True)
        subs = [s for r in range(1, k + 1) for s in itertools.combinations(range(k), r)]
        sub_sizes = np.array([len(s) for s in subs])
        chunk = max(1, 200_000 // (pats.shape[0] * (len(subs) + 1)))
        for lo in range(0, len(sets), chunk):
            block = sets[lo: lo + chunk]
            nb, npat, nsub = len(block), pats.shape[0], len(subs)
            X = np.zeros((nb, npat, nsub + 1, d), dtype=space.dtype)
            idx = np.asarray(block, dtype=int)
            for j, s in enumerate(((tuple(range(k)),) + tuple(subs))):
                cols = idx[:, list(s)]
                vals = pats[:, list(s)]
                X[np.arange(nb)[:, None, None], np.arange(npat)[None, :, None], j,
                  cols[:, None, :]] = vals[None, :, :]
            nrm = space.norms(X.reshape(-1, d)).reshape(nb, npat, nsub + 1)
            ratio = nrm[:, :, 1:] / nrm[:, :, :1]
            flat = int(np.argmax(ratio))
            ia, ip, isb = np.unravel_index(flat, ratio.shape)
            if ratio[ia, ip, isb] > best_val:
                A = block[ia]
                B = [A[t] for t in subs[isb]]
                best_val = float(ratio[ia, ip, isb])
                best_w = {"A": set_json(A), "B": set_json(B),
                          "eps": _pattern_json(pats[ip])}
            if slack:
                den = nrm[:, :, :1] - k * slack
                up = np.where(den > 0, (nrm[:, :, 1:] + sub_sizes * slack) / np.where(den > 0, den, 1), np.inf)
                best_up = max(best_up, float(up.max()))
    cites = ["lower: exhaustive enumeration over nested sets and common signs"]
    upper = best_val
    if slack:
        upper = max(best_up, best_val)
        cites.append(f"upper: {roots}-th roots of unity plus rounding error bound")
    return ConstantEstimate("gamma", N, best_val, upper, best_w, cites)


# ---------------------------------------------------------------------------
# operator family


class _OperatorProbe:
    """Evaluates ||P_A x||, ||x - P_A x|| and greedy-operator ratios for batches."""

    def __init__(self, space: SpaceOracle, N: int, guard_pairs: int = 20000):
        self.space = space
        self.N = N
        self.guard_pairs = guard_pairs
        self._sets = None

    @property
    def sets(self) -> list[tuple]:
        if self._sets is None:
            d = self.space.dim
            total = sum(math.comb(d, k) for k in range(self.N + 1))
            if total > 10**7:
                raise SizeGuardError(f"{total} projection sets exceed the guard")
            self._sets = subsets_upto(d, self.N, include_empty=True)
            self.masks = subset_masks(self._sets, d)
        return self._sets

    def ratios(self, X: np.ndarray, kind: str):
        """Best ratio for ``kind`` per row of X, with the index data achieving it."""
        if kind in ("k", "k_c"):
            return self._projection_ratios(X, kind)
        return self._greedy_ratios(X, kind)

    def _projection_ratios(self, X, kind):
        space = self.space
        m, d = X.shape
        S = len(self.sets)
        nx = space.norms(X)
        best = np.full(m, -np.inf)
        arg = np.zeros(m, dtype=int)
        step = max(1, 300_000 // S)
        for lo in range(0, m, step):
            Xb = X[lo: lo + step]
            P = Xb[:, None, :] * self.masks[None, :, :]
            V = P if kind == "k" else Xb[:, None, :] - P
            nv = space.norms(V.reshape(-1, d)).reshape(Xb.shape[0], S)
            with np.errstate(divide="ignore", invalid="ignore"):
                R = nv / nx[lo: lo + step, None]
            R[~np.isfinite(R)] = -np.inf
            best[lo: lo + step] = R.max(axis=1)
            arg[lo: lo + step] = R.argmax(axis=1)
        info = [{"A": set_json(self.sets[a])} for a in arg]
        return best, info

    def _greedy_pairs(self, absx):
        """(set to project onto, data) pairs for every greedy configuration."""
        fams = [[()]]
        for k in range(1, min(self.N, absx.shape[0]) + 1):
            fams.append(_greedy_sets0(absx, k, guard=self.guard_pairs))
        return fams

    def _greedy_ratios(self, X, kind):
        space = self.space
        m, d = X.shape
        nx = space.norms(X)
        vecs, owner, data = [], [], []
        for r in range(m):
            x = X[r]
            if nx[r] == 0:
                continue
            fams = self._greedy_pairs(np.abs(x))
            if kind in ("g", "g_c"):
                for k in range(1, len(fams)):
                    for G in fams[k]:
                        mask = np.zeros(d, dtype=bool)
                        mask[list(G)] = True
                        v = np.where(mask, x, 0) if kind == "g" else np.where(mask, 0, x)
                        vecs.append(v)
                        owner.append(r)
                        data.append({"Gamma": set_json(G)})
            else:
                n_pairs = 0
                for k in range(1, len(fams)):
                    for G in fams[k]:
                        Gs = set(G)
                        for j in range(0, k):
                            for Gp in fams[j]:
                                if not Gs.issuperset(Gp):
                                    continue
                                n_pairs += 1
                                if n_pairs > self.guard_pairs:
                                    raise SizeGuardError("too many nested greedy pairs")
                                mask = np.zeros(d, dtype=bool)
                                mask[list(Gs.difference(Gp))] = True
                                vecs.append(np.where(mask, x, 0))
                                owner.append(r)
                                data.append({"Gamma": set_json(G), "Gamma_prime": set_json(Gp)})
        best = np.full(m, -np.inf)
        info: list = [None] * m
        if vecs:
            nv = space.norms(np.asarray(vecs))
            for v, r, dat in zip(nv, owner, data):
                ratio = v / nx[r]
                if ratio > best[r]:
                    best[r] = ratio
                    info[r] = dat
        return best, info


def _grid_family(space: SpaceOracle, strategy: SearchStrategy, rng) -> np.ndarray:
    d = space.dim
    if space.field == "real":
        vals = np.array([0.0] + [s * g for g in strategy.grid for s in (1, -1)])
    else:
        w = np.exp(2j * np.pi * np.arange(4) / 4)
        vals = np.concatenate([[0], np.outer(strategy.grid, w).ravel()])
    total = len(vals) ** d
    if total <= strategy.exhaustive_limit:
        codes = np.array(list(itertools.product(range(len(vals)), repeat=d)))
        X = vals[codes]
    else:
        X = vals[rng.integers(0, len(vals), size=(strategy.random_grid, d))]
    keep = np.any(X != 0, axis=1)
    return X[keep].astype(space.dtype)


def _ascent_values(space: SpaceOracle, scale: float, points: int) -> np.ndarray:
    if space.field == "real":
        return np.linspace(-2.0, 2.0, points) * scale
    radii = np.linspace(0.0, 2.0, max(2, points // 8 + 1))[1:] * scale
    w = np.exp(2j * np.pi * np.arange(8) / 8)
    return np.concatenate([[0], np.outer(radii, w).ravel()])


def coordinate_ascent(objective, x0: np.ndarray, values_for, sweeps: int):
    """Greedy one-coordinate-at-a-time maximisation of ``objective``.

    ``objective`` maps a batch of vectors to (scores, info); ``values_for(x)``
    gives the candidate values for a coordinate.
    """
    x = x0.copy()
    score, info = objective(x[None, :])
    score, info = float(score[0]), info[0]
    d = x.shape[0]
    for _ in range(sweeps):
        improved = False
        for i in range(d):
            vals = values_for(x)
            C = np.repeat(x[None, :], len(vals), axis=0)
            C[:, i] = vals
            s, inf = objective(C)
            j = int(np.argmax(s))
            if s[j] > score * (1 + 1e-12):
                score, info, x = float(s[j]), inf[j], C[j].copy()
                improved = True
        if not improved:
            break
    return score, x, info


def operator_constant(space: SpaceOracle, N: int, kind: str,
                      strategy: SearchStrategy | None = None, seeds: Sequence = (),
                      table: "ConstantTable | None" = None) -> ConstantEstimate:
    """Certified lower bound (with witness) and upper bound for k, k_c, g, g_c, g_tilde or g_hat."""
    if kind not in OPERATOR_KINDS:
        raise ValueError(f"not an operator kind: {kind}")
    strategy = strategy or SearchStrategy()
    if kind == "g_hat":
        if table is None:
            g = operator_constant(space, N, "g", strategy, seeds)
            gc = operator_constant(space, N, "g_c", strategy, seeds)
        else:
            g, gc = table.get("g", N), table.get("g_c", N)
        return combine_g_hat(g, gc)
    rng = np.random.default_rng([strategy.seed, N, OPERATOR_KINDS.index(kind)])
    probe = _OperatorProbe(space, N)
    d = space.dim

    candidates = []
    if strategy.known_witnesses:
        candidates.extend(wit.operator_seeds(space, N))
    candidates.extend(np.asarray(s, dtype=space.dtype) for s in seeds)
    candidates.append(space.unit_vector(1))
    grid = _grid_family(space, strategy, rng)
    X = np.vstack([np.asarray(candidates, dtype=space.dtype).reshape(-1, d), grid])
    scores, info = probe.ratios(X, kind)
    order = np.argsort(-scores, kind="stable")
    best_i = int(order[0])
    best = (float(scores[best_i]), X[best_i], info[best_i])

    def objective(C):
        return probe.ratios(C, kind)

    starts = [X[i] for i in order[: max(1, strategy.restarts // 4)]]
    while len(starts) < strategy.restarts:
        z = rng.standard_normal(d)
        if space.field == "complex":
            z = z + 1j * rng.standard_normal(d)
        starts.append(z.astype(space.dtype))
    for x0 in starts:
        if not np.any(x0 != 0):
            continue

        def values_for(x):
            return _ascent_values(space, float(np.max(np.abs(x))) or 1.0, strategy.ascent_points)

        s, x, inf = coordinate_ascent(objective, np.asarray(x0, dtype=space.dtype),
                                      values_for, strategy.sweeps)
        if s > best[0]:
            best = (s, x, inf)

    score, x, inf = best
    witness = {"x": vec_to_json(x), **inf}
    lower = replay(space, kind=kind, witness=witness)
    upper, ucite = _operator_upper(space, N, kind, table)
    return ConstantEstimate(kind, N, lower, upper, witness, ["lower: witness search (grid, known witnesses, coordinate ascent)", ucite])


def combine_g_hat(g: ConstantEstimate, gc: ConstantEstimate) -> ConstantEstimate:
    """min{g, g_c}: lower = min of lowers, upper = min of uppers."""
    lower = min(g.lower, gc.lower)
    upper = min(g.upper, gc.upper)
    return ConstantEstimate("g_hat", g.N, lower, upper, {"g": g.witness, "g_c": gc.witness},
                            ["lower: min of the g and g_c witnesses", "upper: min of the g and g_c uppers"])


def _operator_upper(space: SpaceOracle, N: int, kind: str, table: "ConstantTable | None"):
    Ks = space.meta.K_star
    generic = {
        "k": (Ks * N, "upper: k_N <= K* N"),
        "k_c": (1 + Ks * N, "upper: k^c_N <= 1 + K* N"),
    }
    cands = []
    reg = space.registered_value(kind, N)
    if reg is not None:
        cands.append((reg[0], "upper: " + reg[1]))
    if kind in generic:
        cands.append(generic[kind])
    up = table.upper if table is not None else (lambda kd, n: _fallback_upper(space, kd, n))
    if kind == "g":
        cands.append((up("k", N), "upper: g_N <= k_N"))
    if kind == "g_c":
        cands.append((up("k_c", N), "upper: g^c_N <= k^c_N"))
    if kind == "g_tilde":
        g, gc, k = up("g", N), up("g_c", N), up("k", N)
        cands.append((min(2 * min(g, gc), g * gc, k), "upper: g~ <= min{2 g^, g g^c, k}"))
    if not cands:
        return math.inf, "upper: none"
    return min(cands, key=lambda c: c[0])


def _fallback_upper(space: SpaceOracle, kind: str, n: int) -> float:
    """Bounds valid for every basis with the space's normalisation data."""
    if n <= 0:
        return {"k": 0.0, "g": 0.0, "g_tilde": 0.0, "g_hat": 0.0}.get(kind, 1.0)
    Ks, K = space.meta.K_star, space.meta.K
    reg = space.registered_value(kind, n)
    base = {
        "k": Ks * n, "g": Ks * n, "g_tilde": Ks * n, "g_hat": Ks * n,
        "k_c": 1 + Ks * n, "g_c": 1 + Ks * n,
        "mu": K * n, "mu_d": K * n, "tmu": K * n, "tmu_d": K * n,
        "gamma": Ks * n, "nu": 1 + 2 * K * n,
    }.get(kind, math.inf)
    if reg is not None:
        base = min(base, reg[0])
    return base


# ---------------------------------------------------------------------------
# A-property constant


def _nu_value(space, A, B, x, eps_pats, eta_pats):
    """max_eps ||1_{eps A} + x|| / min_eta ||1_{eta B} + x|| with arg data."""
    d = space.dim
    k = len(A)
    XA = np.repeat(x[None, :], eps_pats.shape[0], axis=0).astype(space.dtype)
    XA[:, list(A)] = eps_pats
    XB = np.repeat(x[None, :], eta_pats.shape[0], axis=0).astype(space.dtype)
    XB[:, list(B)] = eta_pats
    nrm = space.norms(np.vstack([XA, XB]))
    na, nb = nrm[: len(XA)], nrm[len(XA):]
    i, j = int(np.argmax(na)), int(np.argmin(nb))
    return na[i] / nb[j], eps_pats[i], eta_pats[j]


def _nu_batch(space, configs, k, pats):
    """Vectorised nu ratios for many (A, B, x) with |A| = |B| = k."""
    d = space.dim
    P = pats.shape[0]
    m = len(configs)
    X = np.zeros((m, 2, P, d), dtype=space.dtype)
    for r, (A, B, x) in enumerate(configs):
        X[r] = x
        X[r, 0][:, list(A)] = pats
        X[r, 1][:, list(B)] = pats
    nrm = space.norms(X.reshape(-1, d)).reshape(m, 2, P)
    ia = nrm[:, 0].argmax(axis=1)
    ib = nrm[:, 1].argmin(axis=1)
    vals = nrm[np.arange(m), 0, ia] / nrm[np.arange(m), 1, ib]
    return vals, ia, ib


def a_property_constant(space: SpaceOracle, N: int, strategy: SearchStrategy | None = None,
                        seeds: Sequence = (), table: "ConstantTable | None" = None) -> ConstantEstimate:
    """Certified bracket for nu_N.

    The search ranges over disjoint equal-size pairs (A, B), every sign pattern
    on them, and vectors x off A and B with coefficients in {0, +-1/2, +-1}
    (complex: radii {1/2, 1} times fourth roots of unity).  The family is
    enumerated when small and sampled, then refined coordinatewise, otherwise.
    """
    strategy = strategy or SearchStrategy()
    d = space.dim
    rng = np.random.default_rng([strategy.seed, N, 99])
    if space.field == "real":
        xvals = np.array([0.0, 0.5, -0.5, 1.0, -1.0])
    else:
        w = np.exp(2j * np.pi * np.arange(4) / 4)
        xvals = np.concatenate([[0], 0.5 * w, w])
    best = (1.0 if d < 2 else -1.0, {})
    kmax = min(N, d // 2)
    seed_cfgs = list(seeds)
    if strategy.known_witnesses:
        seed_cfgs.extend(wit.nu_seeds(space, N))
    for A, B, eps, eta, x in seed_cfgs:
        A0, B0 = zero_based(A, d), zero_based(B, d)
        x = np.asarray(x, dtype=space.dtype)
        XA = x.copy()
        XA[A0] = np.asarray(eps)
        XB = x.copy()
        XB[B0] = np.asarray(eta)
        val = space.norm(XA) / space.norm(XB)
        if val > best[0]:
            best = (val, {"A": set_json(A0), "B": set_json(B0), "eps": vec_to_json(np.asarray(eps, dtype=space.dtype)),
                          "eta": vec_to_json(np.asarray(eta, dtype=space.dtype)), "x": vec_to_json(x)})

    for k in range(1, kmax + 1):
        pats = sign_patterns(k, space.field, strategy.roots)
        P = pats.shape[0]
        rest = d - 2 * k
        n_pairs = math.comb(d, k) * math.comb(d - k, k)
        total_rows = n_pairs * len(xvals) ** rest * 2 * P
        configs = []
        if total_rows <= strategy.nu_exhaustive_rows:
            for A in itertools.combinations(range(d), k):
                others = [i for i in range(d) if i not in A]
                for B in itertools.combinations(others, k):
                    free = [i for i in others if i not in B]
                    for code in itertools.product(range(len(xvals)), repeat=len(free)):
                        x = np.zeros(d, dtype=space.dtype)
                        x[free] = xvals[list(code)]
                        configs.append((A, B, x))
        else:
            for _ in range(strategy.nu_samples):
                perm = rng.permutation(d)
                A, B = tuple(sorted(perm[:k])), tuple(sorted(perm[k: 2 * k]))
                x = np.zeros(d, dtype=space.dtype)
                free = perm[2 * k:]
                x[free] = xvals[rng.integers(0, len(xvals), size=free.size)]
                configs.append((A, B, x))
            configs.append((tuple(range(k)), tuple(range(k, 2 * k)), np.zeros(d, dtype=space.dtype)))
        vals = np.empty(len(configs))
        ia = np.empty(len(configs), dtype=int)
        ib = np.empty(len(configs), dtype=int)
        step = max(1, 200_000 // (2 * P))
        for lo in range(0, len(configs), step):
            v, a, b = _nu_batch(space, configs[lo: lo + step], k, pats)
            vals[lo: lo + step], ia[lo: lo + step], ib[lo: lo + step] = v, a, b
        if total_rows > strategy.nu_exhaustive_rows:
            for r in np.argsort(-vals, kind="stable")[: strategy.nu_refine]:
                A, B, x = configs[r]
                x = x.copy()
                free = [i for i in range(d) if i not in A and i not in B]
                cur = vals[r]
                for _ in range(3):
                    changed = False
                    for i in free:
                        trial = []
                        for v in xvals:
                            y = x.copy()
                            y[i] = v
                            trial.append((A, B, y))
                        tv, _, _ = _nu_batch(space, trial, k, pats)
                        j = int(np.argmax(tv))
                        if tv[j] > cur * (1 + 1e-12):
                            cur, x, changed = tv[j], trial[j][2], True
                    if not changed:
                        break
                configs.append((A, B, x))
                v, a, b = _nu_batch(space, [(A, B, x)], k, pats)
                vals = np.append(vals, v)
                ia = np.append(ia, a)
                ib = np.append(ib, b)
        r = int(np.argmax(vals))
        if vals[r] > best[0]:
            A, B, x = configs[r]
            best = (float(vals[r]), {"A": set_json(A), "B": set_json(B),
                                     "eps": vec_to_json(pats[ia[r]]), "eta": vec_to_json(pats[ib[r]]),
                                     "x": vec_to_json(x)})
    witness = best[1]
    lower = replay_nu(space, witness) if witness else best[0]
    upper, ucite = _nu_upper(space, N, table)
    return ConstantEstimate("nu", N, lower, upper, witness,
                            ["lower: disjoint sets, signs and bounded x (enumeration/sampling)", ucite])


def _nu_upper(space: SpaceOracle, N: int, table: "ConstantTable | None"):
    cands = [(1 + 2 * space.meta.K * N, "upper: nu_N <= L~_N <= 1 + 2 K N")]
    reg = space.registered_value("nu", N)
    if reg is not None:
        cands.append((reg[0], "upper: " + reg[1]))
    if table is not None and table.has("tmu_d", N):
        r2 = table.upper("g_c", N) + table.upper("g", N) * table.upper("tmu_d", N)
        cands.append((r2, "upper: nu_N <= g^c_N + g_N tmu^d_N"))
    return min(cands, key=lambda c: c[0])


# ---------------------------------------------------------------------------
# witness replay


def replay_nu(space: SpaceOracle, w: dict) -> float:
    d = space.dim
    x = vec_from_json(w["x"]).astype(space.dtype)
    XA, XB = x.copy(), x.copy()
    XA[zero_based(w["A"], d)] = vec_from_json(w["eps"])
    XB[zero_based(w["B"], d)] = vec_from_json(w["eta"])
    return float(space.norm(XA) / space.norm(XB))


def replay(space: SpaceOracle, est: ConstantEstimate | None = None, *, kind: str | None = None,
           witness: dict | None = None) -> float:
    """Recompute the ratio certified by a stored witness.

    Raises InternalConsistencyError when the witness is not admissible (for
    instance a claimed greedy set that is not greedy).
    """
    kind = kind or est.kind
    w = witness if witness is not None else est.witness
    d = space.dim
    if kind == "g_hat":
        return min(replay(space, kind="g", witness=w["g"]), replay(space, kind="g_c", witness=w["g_c"]))
    if kind == "nu":
        return replay_nu(space, w) if w else 1.0
    if kind in ("mu", "mu_d", "tmu", "tmu_d"):
        if not w:
            return 1.0
        A, B = zero_based(w["A"], d), zero_based(w["B"], d)
        if kind.endswith("_d") and set(A) & set(B):
            raise InternalConsistencyError("disjoint witness with overlapping sets")
        a = np.zeros(d, dtype=space.dtype)
        b = np.zeros(d, dtype=space.dtype)
        a[A] = vec_from_json(w["eps"]) if "eps" in w else 1
        b[B] = vec_from_json(w["eta"]) if "eta" in w else 1
        return float(space.norm(a) / space.norm(b))
    if kind == "gamma":
        A, B = zero_based(w["A"], d), zero_based(w["B"], d)
        if not set(B) <= set(A):
            raise InternalConsistencyError("gamma witness with B not inside A")
        eps = dict(zip(A.tolist(), vec_from_json(w["eps"])))
        a = np.zeros(d, dtype=space.dtype)
        b = np.zeros(d, dtype=space.dtype)
        for i in A:
            a[i] = eps[int(i)]
        for i in B:
            b[i] = eps[int(i)]
        return float(space.norm(b) / space.norm(a))
    x = vec_from_json(w["x"]).astype(space.dtype)
    nx = space.norm(x)
    if kind in ("k", "k_c"):
        A = zero_based(w["A"], d)
        p = np.zeros_like(x)
        p[A] = x[A]
        return float(space.norm(p if kind == "k" else x - p) / nx)
    G = zero_based(w["Gamma"], d)
    absx = np.abs(x)
    if not is_greedy_set0(absx, G.tolist()):
        raise InternalConsistencyError(f"{w['Gamma']} is not a greedy set")
    if kind in ("g", "g_c"):
        p = np.zeros_like(x)
        p[G] = x[G]
        return float(space.norm(p if kind == "g" else x - p) / nx)
    if kind == "g_tilde":
        Gp = zero_based(w["Gamma_prime"], d)
        if not (set(Gp) < set(G) and is_greedy_set0(absx, Gp.tolist())):
            raise InternalConsistencyError("g_tilde witness is not a nested greedy pair")
        keep = sorted(set(G) - set(Gp))
        p = np.zeros_like(x)
        p[keep] = x[keep]
        return float(space.norm(p) / nx)
    raise ValueError(f"unknown kind {kind}")


# ---------------------------------------------------------------------------
# tables


class ConstantTable:
    """All estimates for one space over a range of orders."""

    def __init__(self, space: SpaceOracle):
        self.space = space
        self.estimates: dict[tuple, ConstantEstimate] = {}

    def has(self, kind: str, N: int) -> bool:
        return (kind, N) in self.estimates

    def get(self, kind: str, N: int) -> ConstantEstimate:
        try:
            return self.estimates[(kind, N)]
        except KeyError:
            raise DependencyError(kind, N) from None

    def put(self, est: ConstantEstimate):
        self.estimates[(est.kind, est.N)] = est

    @property
    def orders(self) -> list[int]:
        return sorted({N for _, N in self.estimates})

    def upper(self, kind: str, n: int) -> float:
        """Smallest sound upper bound known for the constant at order ``n``.

        Constants are nondecreasing in the order, so an upper bound at any
        m >= n also bounds the value at n.
        """
        vals = [_fallback_upper(self.space, kind, n)]
        for (kd, m), est in self.estimates.items():
            if kd == kind and m >= n:
                vals.append(est.upper)
        return min(vals)

    def lower(self, kind: str, n: int) -> float:
        vals = [est.lower for (kd, m), est in self.estimates.items() if kd == kind and m <= n]
        return max(vals) if vals else 0.0

    def rows(self) -> list[ConstantEstimate]:
        return [self.estimates[k] for k in sorted(self.estimates, key=lambda t: (t[1], KINDS.index(t[0])))]


def _monotone(prev: ConstantEstimate | None, cur: ConstantEstimate) -> ConstantEstimate:
    if prev is not None and prev.lower > cur.lower:
        cites = [c for c in cur.citations if not c.startswith("lower")]
        cites.insert(0, f"lower: witness carried from N={prev.N}")
        return ConstantEstimate(cur.kind, cur.N, prev.lower, max(cur.upper, prev.lower),
                                prev.witness, cites)
    return cur


def compute_all(space: SpaceOracle, orders: Sequence[int], strategy: SearchStrategy | None = None,
                kinds: Sequence[str] = KINDS) -> ConstantTable:
    """Compute every requested constant for each order in ``orders``."""
    strategy = strategy or SearchStrategy()
    table = ConstantTable(space)
    cache: dict = {}
    prev: dict[str, ConstantEstimate] = {}
    for N in sorted(set(orders)):
        if not 1 <= N <= space.dim:
            raise ValueError(f"order {N} outside 1..{space.dim}")
        for kind in DEMOCRACY_KINDS:
            if kind in kinds:
                est = _monotone(prev.get(kind), democracy_constant(space, N, kind, strategy.roots, _cache=cache))
                table.put(est)
                prev[kind] = est
        for kind in ("k", "k_c", "g", "g_c", "g_tilde"):
            if kind in kinds or (kind in ("g", "g_c") and "g_hat" in kinds):
                seeds = [vec_from_json(prev[kind].witness["x"])] if kind in prev else []
                est = _monotone(prev.get(kind), operator_constant(space, N, kind, strategy, seeds, table))
                table.put(est)
                prev[kind] = est
        if "g_hat" in kinds:
            est = combine_g_hat(table.get("g", N), table.get("g_c", N))
            table.put(est)
            prev["g_hat"] = est
        if "nu" in kinds:
            seeds = _nu_seeds_from_table(table, N)
            if "nu" in prev and prev["nu"].witness:
                w = prev["nu"].witness
                seeds.append((w["A"], w["B"], vec_from_json(w["eps"]), vec_from_json(w["eta"]),
                              vec_from_json(w["x"])))
            est = _monotone(prev.get("nu"), a_property_constant(space, N, strategy, seeds, table))
            table.put(est)
            prev["nu"] = est
    return table


def _nu_seeds_from_table(table: ConstantTable, N: int) -> list:
    """x = 0 with the tmu_d witness, and x = 1_{A cap B} with the mu witness."""
    space = table.space
    d = space.dim
    out = []
    if table.has("tmu_d", N) and table.get("tmu_d", N).witness:
        w = table.get("tmu_d", N).witness
        out.append((w["A"], w["B"], vec_from_json(w["eps"]), vec_from_json(w["eta"]),
                    np.zeros(d, dtype=space.dtype)))
    if table.has("mu", N) and table.get("mu", N).witness:
        w = table.get("mu", N).witness
        A, B = set(w["A"]), set(w["B"])
        both = A & B
        Ad, Bd = sorted(A - both), sorted(B - both)
        if Ad:
            x = np.zeros(d, dtype=space.dtype)
            x[[i - 1 for i in both]] = 1
            out.append((Ad, Bd, np.ones(len(Ad)), np.ones(len(Bd)), x))
    return out
