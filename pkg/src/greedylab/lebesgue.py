"""Best N-term errors, Lebesgue-constant bounds and the inequality suite.

``L`` is the Lebesgue constant against sigma_N (free coefficients) and
``Lt`` the one against sigma~_N (coordinate projections of x).  Lower bounds
come from explicit vectors evaluated by definition; upper bounds come from
the upper-bound chains, fed with the upper fields of the constant estimates.  Every
right-hand side uses an upper bound and every left-hand side a directly
evaluated norm, so a "holds" verdict never depends on search completeness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from . import witnesses as wit
from .constants import ConstantTable, replay, set_json, vec_from_json, vec_to_json
from .core import _greedy_sets0, phase, subset_masks, subsets_upto, zero_based
from .errors import DependencyError, PrecisionError, SizeGuardError
from .spaces import SpaceOracle

SIGMA_GUARD = 10**7
LP_SUPPORT_LIMIT = 5000


@dataclass
class ApproxResult:
    """A best N-term approximation: ``value = ||x - minimizer||``."""

    value: float
    minimizer: np.ndarray
    support: tuple
    exact: bool
    value_full_size: float | None = None

    def to_dict(self) -> dict:
        return {"value": self.value, "minimizer": vec_to_json(self.minimizer),
                "support": list(self.support), "exact": self.exact,
                "value_full_size": self.value_full_size}


@dataclass
class BoundCertificate:
    """The inequality ``lhs <= rhs`` with its provenance.

    ``checks`` counts how many instances were tested when the certificate
    aggregates a sampled family; lhs/rhs/witness then describe the instance
    with the least relative slack.
    """

    name: str
    lhs: float
    rhs: float
    witness: dict = field(default_factory=dict)
    citation: str = ""
    category: str = "bound"
    checks: int = 1
    tol: float = 1e-9
    exact_value: float | None = None

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        if math.isinf(self.rhs) and self.rhs > 0:
            return True
        return self.slack >= -self.tol * max(1.0, abs(self.rhs))

    @property
    def status(self) -> str:
        return "holds" if self.holds else "violated"

    def to_dict(self) -> dict:
        def num(v):
            return v if v is None or math.isfinite(v) else None

        return {"name": self.name, "category": self.category, "lhs": num(self.lhs),
                "rhs": num(self.rhs), "slack": num(self.slack), "status": self.status,
                "checks": self.checks, "citation": self.citation, "witness": self.witness,
                "exact_value": self.exact_value}


def _rel_slack(lhs: float, rhs: float) -> float:
    if math.isinf(rhs):
        return math.inf
    return (rhs - lhs) / max(1.0, abs(rhs))


class _Worst:
    """Keeps the instance with the least relative slack for one inequality."""

    def __init__(self, name: str, citation: str, tol: float, category: str = "lemma"):
        self.name, self.citation, self.tol, self.category = name, citation, tol, category
        self.best = None
        self.count = 0

    def add(self, lhs: float, rhs: float, witness_fn):
        self.count += 1
        s = _rel_slack(lhs, rhs)
        if self.best is None or s < self.best[0]:
            self.best = (s, float(lhs), float(rhs), witness_fn)

    def certificate(self) -> BoundCertificate:
        if self.best is None:
            return BoundCertificate(self.name, 0.0, 0.0, {}, self.citation, self.category, 0, self.tol)
        _, lhs, rhs, wf = self.best
        return BoundCertificate(self.name, lhs, rhs, wf(), self.citation, self.category,
                                self.count, self.tol)


# ---------------------------------------------------------------------------
# best N-term errors


def _check_order(space: SpaceOracle, N: int):
    if not 0 <= N <= space.dim:
        raise ValueError(f"order {N} outside 0..{space.dim}")


def sigma_tilde(space: SpaceOracle, x, N: int, guard: int = SIGMA_GUARD) -> ApproxResult:
    """min over |A| <= N of ||x - P_A x||, ties broken by (size, lexicographic).

    ``value_full_size`` is the minimum restricted to |A| = N.
    """
    d = space.dim
    _check_order(space, N)
    x = np.asarray(x, dtype=space.dtype)
    total = sum(math.comb(d, k) for k in range(N + 1))
    if total > guard:
        raise SizeGuardError(f"{total} supports exceed the guard {guard}")
    sets = subsets_upto(d, N, include_empty=True)
    best_v, best_i = math.inf, 0
    full_v = math.inf
    step = max(1, 200_000 // max(1, d))
    for lo in range(0, len(sets), step):
        chunk = sets[lo: lo + step]
        M = subset_masks(chunk, d)
        R = x[None, :] * (~M)
        v = space.norms(R)
        i = int(np.argmin(v))
        if v[i] < best_v:
            best_v, best_i = float(v[i]), lo + i
        sizes = np.array([len(s) for s in chunk])
        if np.any(sizes == N):
            full_v = min(full_v, float(v[sizes == N].min()))
    A = sets[best_i]
    z = np.zeros_like(x)
    z[list(A)] = x[list(A)]
    return ApproxResult(best_v, z, tuple(set_json(A)), True, full_v)


def _lp_on_support(space: SpaceOracle, blocks, x: np.ndarray, A: tuple):
    """min ||x - z|| over z supported on A for a polyhedral norm (sum of block maxima)."""
    m = len(A)
    nb = len(blocks)
    rows, rhs = [], []
    for b, F in enumerate(blocks):
        FA = F[:, list(A)]
        Fx = F @ x
        for sgn in (1.0, -1.0):
            row = np.zeros((F.shape[0], m + nb))
            row[:, :m] = -sgn * FA
            row[:, m + b] = -1.0
            rows.append(row)
            rhs.append(-sgn * Fx)
    A_ub = np.vstack(rows)
    b_ub = np.concatenate(rhs)
    c = np.concatenate([np.zeros(m), np.ones(nb)])
    bounds = [(None, None)] * m + [(0, None)] * nb
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise PrecisionError(f"linear program failed on support {A}: {res.message}")
    z = np.zeros_like(x)
    z[list(A)] = res.x[:m]
    return z


def _subgradient_all(space: SpaceOracle, x: np.ndarray, supports: list[tuple], iters: int,
                     restarts: int, seed: int):
    """Finite-difference subgradient descent on every support at once."""
    rng = np.random.default_rng(seed)
    d = space.dim
    m = len(supports[0])
    cplx = space.field == "complex"
    S = len(supports)
    idx = np.asarray(supports, dtype=int)
    scale = float(np.max(np.abs(x))) or 1.0
    npar = 2 * m if cplx else m

    def build(P):
        # P: (S, R, npar) -> residual vectors (S*R, d)
        Z = P[..., :m] + (1j * P[..., m:] if cplx else 0)
        Rv = np.repeat(np.repeat(x[None, None, :], S, 0), P.shape[1], 1).astype(space.dtype)
        si = np.arange(S)[:, None, None]
        ri = np.arange(P.shape[1])[None, :, None]
        Rv[si, ri, idx[:, None, :]] -= Z
        return Rv.reshape(-1, d)

    base = x[idx]
    P0 = np.concatenate([base.real, base.imag], axis=1) if cplx else base.real.copy()
    P = np.repeat(P0[:, None, :], restarts, axis=1)
    P[:, 1:, :] += rng.standard_normal((S, restarts - 1, npar)) * 0.5 * scale
    vals = space.norms(build(P)).reshape(S, restarts)
    best_vals, best_P = vals.copy(), P.copy()
    h = 1e-7 * scale
    E = np.eye(npar) * h
    for t in range(1, iters + 1):
        Pp = P[:, :, None, :] + E[None, None]
        Pm = P[:, :, None, :] - E[None, None]
        both = np.concatenate([Pp, Pm], axis=2).reshape(S, restarts * 2 * npar, npar)
        nv = space.norms(build(both)).reshape(S, restarts, 2, npar)
        g = (nv[:, :, 0] - nv[:, :, 1]) / (2 * h)
        gn = np.linalg.norm(g, axis=2, keepdims=True)
        gn[gn == 0] = 1.0
        P = P - (0.5 * scale / math.sqrt(t)) * g / gn
        vals = space.norms(build(P)).reshape(S, restarts)
        better = vals < best_vals
        best_vals = np.where(better, vals, best_vals)
        best_P = np.where(better[..., None], P, best_P)
    s, r = np.unravel_index(int(np.argmin(best_vals)), best_vals.shape)
    p = best_P[s, r]
    z = np.zeros(d, dtype=space.dtype)
    z[idx[s]] = p[:m] + (1j * p[m:] if cplx else 0)
    return z, supports[s], float(best_vals[s, r])


def sigma(space: SpaceOracle, x, N: int, mode: str = "exhaustive", z0=None,
          iters: int = 2000, restarts: int = 10, seed: int = 0,
          guard: int = SIGMA_GUARD) -> ApproxResult:
    """sigma_N(x) = min ||x - z|| over z with at most N nonzero coefficients.

    ``exhaustive`` minimises over every support of size min(N, dim): exactly by
    linear programming for polyhedral norms, otherwise by finite-difference
    subgradient descent (inexact, never above sigma~_N).  ``witness_only``
    returns ||x - z0||, a valid upper bound on sigma_N.
    """
    d = space.dim
    _check_order(space, N)
    x = np.asarray(x, dtype=space.dtype)
    if mode == "witness_only":
        if z0 is None:
            raise ValueError("witness_only mode needs z0")
        z0 = np.asarray(z0, dtype=space.dtype)
        supp = np.flatnonzero(z0)
        if supp.size > N:
            raise ValueError(f"z0 has {supp.size} nonzero coefficients, more than N={N}")
        return ApproxResult(space.norm(x - z0), z0, tuple(int(i) + 1 for i in supp), False)
    if mode != "exhaustive":
        raise ValueError(f"unknown sigma mode {mode!r}")
    if N == 0:
        return ApproxResult(space.norm(x), np.zeros_like(x), (), True)
    k = min(N, d)
    n_sup = math.comb(d, k)
    if n_sup > guard:
        raise SizeGuardError(f"{n_sup} supports exceed the guard {guard}")
    supports = list(itertools.combinations(range(d), k))
    blocks = space.polyhedral_blocks() if space.field == "real" else None
    if blocks is not None:
        best = (math.inf, None, None)
        xr = x.real.astype(float)
        for A in supports:
            z = _lp_on_support(space, blocks, xr, A)
            v = space.norm(xr - z)
            if v < best[0] - 1e-15:
                best = (v, z, A)
        return ApproxResult(best[0], best[1], tuple(set_json(best[2])), True)
    z, A, v = _subgradient_all(space, x, supports, iters, restarts, seed)
    if not math.isfinite(v):
        raise PrecisionError("subgradient descent produced a non-finite value", best=v)
    return ApproxResult(space.norm(x - z), z, tuple(set_json(A)), False)


# ---------------------------------------------------------------------------
# Lebesgue lower bounds


@dataclass
class Candidate:
    """A test vector for the Lebesgue ratios, with an optional feasible z."""

    x: np.ndarray
    source: str
    z: np.ndarray | None = None
    claim: tuple | None = None  # (constant name, value the construction certifies)


def _greedy_numerator(space: SpaceOracle, x: np.ndarray, N: int, guard: int = 20000):
    fam = _greedy_sets0(np.abs(x), N, guard=guard)
    d = space.dim
    R = np.repeat(x[None, :], len(fam), axis=0)
    for r, G in enumerate(fam):
        R[r, list(G)] = 0
    v = space.norms(R)
    i = int(np.argmax(v))
    return float(v[i]), fam[i]


def _zeros_outside(x: np.ndarray, exclude, count: int):
    ex = set(int(i) for i in exclude)
    free = [i for i in range(x.size) if x[i] == 0 and i not in ex]
    if len(free) < count:
        return None
    return free[:count]


def construction_candidates(space: SpaceOracle, N: int, table: ConstantTable | None) -> list[Candidate]:
    """Finite-dimensional versions of the lower-bound constructions.

    The auxiliary sets C are taken among coordinates where the relevant
    vector vanishes, so the limiting argument becomes an identity.  A
    construction is skipped when there are not enough such coordinates.
    """
    d = space.dim
    dt = space.dtype
    out: list[Candidate] = []
    if table is None:
        return out

    def est(kind):
        return table.get(kind, N) if table.has(kind, N) else None

    e = est("k_c")
    if e and e.witness.get("x") is not None:
        x = vec_from_json(e.witness["x"]).astype(dt)
        A = zero_based(e.witness["A"], d).tolist()
        Cp = _zeros_outside(x, A, N - len(A))
        if Cp is not None:
            t = 2 * float(np.max(np.abs(x))) + 1
            y = x.copy()
            y[A] = 0
            C = A + Cp
            y[C] = t
            z = np.zeros(d, dtype=dt)
            z[C] = t
            z[A] -= x[A]
            out.append(Candidate(y, "construction from the k^c witness", z, ("k_c", replay(space, e))))
    e = est("g_c")
    if e and e.witness.get("x") is not None:
        x = vec_from_json(e.witness["x"]).astype(dt)
        G = zero_based(e.witness["Gamma"], d).tolist()
        C = _zeros_outside(x, G, N - len(G))
        if C is not None:
            alpha = float(np.min(np.abs(x[G]))) if G else 1.0
            y = x.copy()
            y[C] = alpha
            out.append(Candidate(y, "construction from the g^c witness", None, ("g_c", replay(space, e))))
    e = est("mu")
    if e and e.witness:
        # witness ratio ||1_A||/||1_B||; the construction bounds ||1_{B'}||/||1_{A'}|| with B' = A, A' = B
        Bn = zero_based(e.witness["A"], d).tolist()
        An = zero_based(e.witness["B"], d).tolist()
        need = N - len(set(An) - set(Bn))
        free = [i for i in range(d) if i not in set(An) | set(Bn)]
        if len(free) >= need:
            y = np.zeros(d, dtype=dt)
            y[list(set(An) | set(Bn))] = 1
            y[free[:need]] = 1
            out.append(Candidate(y, "construction from the mu witness", None, ("mu", replay(space, e))))
    e = est("tmu")
    if e and e.witness:
        Bn = zero_based(e.witness["A"], d).tolist()
        eta = vec_from_json(e.witness["eta"])
        An = zero_based(e.witness["B"], d).tolist()
        eps = dict(zip(An, eta))
        ok = True
        first = True
        for r in range(1, len(Bn) + 1):
            for Bp in itertools.combinations(Bn, r):
                need = N - len(set(An) - set(Bp))
                free = [i for i in range(d) if i not in set(An) | set(Bn)]
                if len(free) < need:
                    ok = False
                    continue
                y = np.zeros(d, dtype=dt)
                for i in An:
                    y[i] = eps[i]
                for i in set(Bp) - set(An):
                    y[i] = 1
                y[free[:need]] = 1
                claim = ("tmu/2kappa", replay(space, e) / (2 * space.kappa)) if first else None
                first = False
                out.append(Candidate(y, "construction from the tmu witness", None, claim))
        if not ok:
            out = [c for c in out if c.source != "construction from the tmu witness"]
    e = est("nu")
    if e and e.witness:
        w = e.witness
        x = vec_from_json(w["x"]).astype(dt)
        A = zero_based(w["A"], d).tolist()
        B = zero_based(w["B"], d).tolist()
        C = _zeros_outside(x, A + B, N - len(A))
        if C is not None:
            y = x.copy()
            y[A] = vec_from_json(w["eps"])
            y[B] = vec_from_json(w["eta"])
            y[C] = 1
            out.append(Candidate(y, "construction from the nu witness", None, ("nu", replay(space, e))))
    return out


def default_candidates(space: SpaceOracle, N: int, table: ConstantTable | None) -> list[Candidate]:
    d = space.dim
    out = [Candidate(space.unit_vector(1), "unit vector")]
    if isinstance(space, wit.SummingSpace):
        for w in wit.summing_witnesses(N, d) if 4 * N + 1 <= d else []:
            if w.role == "L":
                out.append(Candidate(w.x, w.name, w.feasible_z))
    for x in wit.operator_seeds(space, N):
        out.append(Candidate(np.asarray(x, dtype=space.dtype), "operator seed"))
    out.extend(construction_candidates(space, N, table))
    return out


def _use_lp(space: SpaceOracle, N: int) -> bool:
    return (space.field == "real" and space.polyhedral_blocks() is not None
            and math.comb(space.dim, min(N, space.dim)) <= LP_SUPPORT_LIMIT)


def lebesgue_lower(space: SpaceOracle, N: int, table: ConstantTable | None = None,
                   candidates: list[Candidate] | None = None, L_upper: float = math.inf,
                   Lt_upper: float = math.inf):
    """Certified lower bounds for L and Lt from explicit vectors.

    Returns (L certificate, Lt certificate, per-candidate records).  Each
    certificate states ``witness ratio <= upper``; with infinite uppers it
    simply records the lower bound.
    """
    d = space.dim
    if candidates is None:
        candidates = default_candidates(space, N, table)
    lp = _use_lp(space, N)
    best_L = (0.0, {})
    best_Lt = (0.0, {})
    records = []
    for c in candidates:
        x = np.asarray(c.x, dtype=space.dtype)
        if not np.any(x != 0):
            continue
        num, G = _greedy_numerator(space, x, N)
        st = sigma_tilde(space, x, N)
        den = st.value
        z_used = st.minimizer
        if c.z is not None:
            zv = space.norm(x - c.z)
            if np.count_nonzero(c.z) <= N and zv < den:
                den, z_used = zv, np.asarray(c.z, dtype=space.dtype)
        if lp:
            s = sigma(space, x, N)
            if s.value < den:
                den, z_used = s.value, s.minimizer
        rec = {"source": c.source, "numerator": num, "sigma_tilde": st.value, "sigma_upper": den}
        base = {"x": vec_to_json(x), "Gamma": set_json(G), "source": c.source}
        if st.value > 0:
            r = num / st.value
            rec["Lt_ratio"] = r
            if r > best_Lt[0]:
                best_Lt = (r, {**base, "A": list(st.support)})
        if den > 0:
            r = num / den
            rec["L_ratio"] = r
            if r > best_L[0]:
                best_L = (r, {**base, "z": vec_to_json(z_used)})
        if c.claim is not None:
            rec["claim"] = c.claim
        records.append(rec)
    # L >= Lt, so the Lt witness also bounds L from below
    if best_Lt[0] > best_L[0]:
        best_L = (best_Lt[0], {**best_Lt[1], "via": "L >= Lt"})
    tol = space.tol
    cL = BoundCertificate("L >= witness ratio", best_L[0], L_upper, best_L[1],
                          "ratio ||x - G x|| / sigma_N(x) for an explicit x", "lower", tol=tol)
    cLt = BoundCertificate("Lt >= witness ratio", best_Lt[0], Lt_upper, best_Lt[1],
                           "ratio ||x - G x|| / sigma~_N(x) for an explicit x", "lower", tol=tol)
    return cL, cLt, records


def construction_certificates(space: SpaceOracle, N: int, table: ConstantTable,
                              L_lower: float, Lt_lower: float, records: list) -> list[BoundCertificate]:
    """Computed Lebesgue lowers dominate the constants they are known to exceed.

    Only constants whose construction fitted in the available dimension are
    compared (see :func:`construction_candidates`).
    """
    tol = space.tol
    out = [BoundCertificate("Lt_lower <= L_lower", Lt_lower, L_lower, {}, "L >= Lt", "invariant", tol=tol)]
    claims = {}
    for r in records:
        if "claim" in r:
            k, v = r["claim"]
            claims[k] = max(claims.get(k, 0.0), v)
    for k, v in sorted(claims.items()):
        target = L_lower if k == "k_c" else Lt_lower
        who = "L" if k == "k_c" else "Lt"
        out.append(BoundCertificate(f"{k}_N lower <= {who}_lower", v, target, {},
                                    f"{who} >= {k} via explicit construction", "invariant", tol=tol))
    return out


# ---------------------------------------------------------------------------
# theorem upper bounds


def theorem_upper_bounds(space: SpaceOracle, table: ConstantTable, N: int,
                         L_lower: float = 0.0, Lt_lower: float = 0.0) -> list[BoundCertificate]:
    """Every chained upper bound for L and Lt, built from estimate uppers."""
    for kind in ("nu", "g_c", "g_tilde", "tmu", "mu", "gamma", "g_hat", "k_c"):
        if not table.has(kind, N):
            raise DependencyError(kind, N)
    U = table.upper
    kc2, kc = U("k_c", 2 * N), U("k_c", N)
    gc, gt, nu = U("g_c", N), U("g_tilde", N), U("nu", N)
    tmu, mu, gam, gh = U("tmu", N), U("mu", N), U("gamma", N), U("g_hat", N)
    K = space.meta.K
    k2 = space.kappa**2
    tol = space.tol
    rows = [
        ("L", "L <= k^c_2N nu_N", kc2 * nu, "multiplicative A-property bound"),
        ("L", "L <= min{k^c_2N, k^c_N g^c_N} nu_N", min(kc2, kc * gc) * nu,
         "multiplicative A-property bound, truncation refinement"),
        ("Lt", "Lt <= g^c_N nu_N", gc * nu, "multiplicative A-property bound"),
        ("L", "L <= k^c_2N + g~_N tmu_N", kc2 + gt * tmu, "additive superdemocracy bound"),
        ("L", "L <= k^c_N g^c_N + g~_N tmu_N", kc * gc + gt * tmu, "additive superdemocracy bound, variant"),
        ("Lt", "Lt <= g^c_N + g~_N tmu_N", gc + gt * tmu, "additive superdemocracy bound"),
        ("L", "L <= k^c_2N + K N", kc2 + K * N, "coefficient-sum bound"),
        ("Lt", "Lt <= g^c_N + K N", gc + K * N, "coefficient-sum bound"),
        ("L", "L <= 1 + 3 K N", 1 + 3 * K * N, "trivial bound"),
        ("Lt", "Lt <= 1 + 2 K N", 1 + 2 * K * N, "trivial bound"),
        ("L", "L <= k^c_2N + 8 kappa^2 gamma_N g^_N mu_N", kc2 + 8 * k2 * gam * gh * mu,
         "democracy bound through gamma"),
        ("Lt", "Lt <= g^c_N + 8 kappa^2 gamma_N g^_N mu_N", gc + 8 * k2 * gam * gh * mu,
         "democracy bound through gamma"),
        ("L", "L <= k^c_2N + 8 kappa^2 g^_N^2 mu_N", kc2 + 8 * k2 * gh * gh * mu,
         "quasi-greedy democracy bound with g^_N in place of sup_N g^_N"),
        ("Lt", "Lt <= g^c_N + 8 kappa^2 g^_N^2 mu_N", gc + 8 * k2 * gh * gh * mu,
         "quasi-greedy democracy bound with g^_N in place of sup_N g^_N"),
    ]
    out = []
    for which, name, rhs, cite in rows:
        lhs = L_lower if which == "L" else Lt_lower
        out.append(BoundCertificate(name, lhs, rhs, {}, cite, "upper", tol=tol))
    if kc <= 1 + tol:
        nu_est = table.get("nu", N)
        exact = nu_est.lower if nu_est.exact else None
        out.append(BoundCertificate("L = Lt = nu_N (k^c_N = 1)", L_lower, nu, {"nu_lower": nu_est.lower},
                                    "Lt <= L <= k^c_N Lt, Lt <= g^c_N nu_N and nu_N <= Lt", "upper",
                                    tol=tol, exact_value=exact))
    return out


def best_upper(certs: list[BoundCertificate], which: str) -> float:
    pref = which + " "
    vals = [c.rhs for c in certs if c.category == "upper" and (c.name.startswith(pref) or c.name.startswith("L = Lt"))]
    return min(vals) if vals else math.inf


# ---------------------------------------------------------------------------
# inequality suite


def _random_sample(rng, space: SpaceOracle, kind: int) -> np.ndarray:
    d = space.dim
    cplx = space.field == "complex"
    if kind == 0:
        x = rng.standard_normal(d)
        if cplx:
            x = x + 1j * rng.standard_normal(d)
    elif kind == 1:
        x = rng.integers(-2, 3, size=d).astype(float)
        if cplx:
            x = x * np.exp(2j * np.pi * rng.integers(0, 4, size=d) / 4)
    elif kind == 2:
        x = np.zeros(d, dtype=space.dtype)
        k = int(rng.integers(1, d + 1))
        idx = rng.choice(d, size=k, replace=False)
        v = rng.standard_normal(k)
        if cplx:
            v = v + 1j * rng.standard_normal(k)
        x[idx] = v
    else:
        x = rng.choice([-1.0, -0.5, 0.5, 1.0, 2.0], size=d)
        if cplx:
            x = x * np.exp(2j * np.pi * rng.random(d))
    if not np.any(x != 0):
        x = space.unit_vector(1)
    return np.asarray(x, dtype=space.dtype)


def _signs(rng, k: int, field: str) -> np.ndarray:
    if field == "real":
        return rng.choice([-1.0, 1.0], size=k)
    return np.exp(2j * np.pi * rng.random(k))


def lemma_suite(space: SpaceOracle, table: ConstantTable, N: int, samples: int = 10_000,
                seed: int = 0, extra: list | None = None) -> list[BoundCertificate]:
    """Check the pointwise lemmas on seeded random vectors (plus ``extra`` ones)."""
    rng = np.random.default_rng([seed, N])
    d = space.dim
    tol = space.tol
    U = table.upper
    kap = space.kappa
    W = {k: _Worst(k, c, tol) for k, c in [
        ("greedy indicator <= g~_N ||x||", "alpha ||1_{eps Lambda}|| <= g~_N ||x||"),
        ("greedy indicator <= 2 g^_N ||x||", "alpha ||1_{eps Lambda}|| <= 2 min{g_N, g^c_N} ||x||"),
        ("||T_a x|| <= g^c ||x||", "truncation against the complement of greedy sets"),
        ("||x - T_a x|| <= g ||x||", "truncation against greedy sets"),
        ("||T_a (I-P_A) x|| <= k^c ||x||", "truncated complement, union bound"),
        ("||T_a (I-P_A) x|| <= g^c k^c ||x||", "truncated complement, product bound"),
        ("||x + z|| <= nu ||x + a 1_B||", "A-property extended to bounded z"),
        ("||z|| <= tmu max|z| ||1_B||", "superdemocracy extended to bounded z"),
        ("||1_{eps B}|| <= 2 kappa gamma ||1_{eta A}||", "nested indicators, B inside A"),
    ]}
    xs = [np.asarray(v, dtype=space.dtype) for v in (extra or [])]
    for s in range(samples):
        xs.append(_random_sample(rng, space, s % 4))

    # the pointwise checks below batch their norms per sample
    for x in xs:
        absx = np.abs(x)
        nx = space.norm(x)
        if nx == 0:
            continue
        n = int(rng.integers(1, N + 1))
        order = np.argsort(-absx, kind="stable")
        Lam = order[:n]
        alpha = float(absx[Lam].min())
        ind = np.zeros(d, dtype=space.dtype)
        ind[Lam] = phase(x[Lam])
        a_ = np.array([-1.0])
        cands = np.concatenate([absx[absx > 0], [rng.random() * absx.max()]])
        a = float(rng.choice(cands))
        Lam_a = np.flatnonzero(absx > a)
        T = np.where(absx > a, a * phase(x), x)
        Asz = int(rng.integers(0, N + 1))
        A = rng.choice(d, size=Asz, replace=False) if Asz else np.array([], dtype=int)
        y = x.copy()
        y[A] = 0
        absy = np.abs(y)
        Ty = np.where(absy > a, a * phase(y), y)
        lam_y = int(np.count_nonzero(absy > a))
        union = len(set(A.tolist()) | set(Lam_a.tolist()))

        b = int(rng.integers(1, max(1, min(N, d // 2)) + 1))
        perm = rng.permutation(d)
        B = perm[:b]
        rest = perm[b:]
        nz = int(rng.integers(0, b + 1))
        zs = rest[:nz]
        xs_ = rest[nz:][: int(rng.integers(0, max(1, rest.size - nz) + 1))]
        xp = np.zeros(d, dtype=space.dtype)
        if xs_.size:
            xp[xs_] = x[xs_]
        amax = float(np.max(np.abs(xp))) if xs_.size else 0.0
        alph = max(amax, 1e-3) * (1 + rng.random())
        zz = np.zeros(d, dtype=space.dtype)
        if nz:
            zz[zs] = _signs(rng, nz, space.field) * alph * rng.random(nz)
        eta = _signs(rng, b, space.field)
        xb = xp.copy()
        xb[B] = alph * eta
        z6 = np.zeros(d, dtype=space.dtype)
        if nz:
            z6[zs] = x[zs]
        ind_B = np.zeros(d, dtype=space.dtype)
        ind_B[B] = eta

        asz = int(rng.integers(1, N + 1))
        AA = rng.choice(d, size=asz, replace=False)
        BB = AA[rng.random(asz) < 0.5]
        if BB.size == 0:
            BB = AA[:1]
        e1 = np.zeros(d, dtype=space.dtype)
        e1[BB] = _signs(rng, BB.size, space.field)
        e2 = np.zeros(d, dtype=space.dtype)
        e2[AA] = _signs(rng, asz, space.field)

        V = np.vstack([ind, T, x - T, Ty, xp + zz, xb, z6, ind_B, e1, e2])
        nv = space.norms(V)
        xj = vec_to_json(x)

        def wx(**kw):
            return lambda: {"x": xj, **kw}

        W["greedy indicator <= g~_N ||x||"].add(alpha * nv[0], U("g_tilde", n) * nx, wx(Lambda=set_json(Lam)))
        W["greedy indicator <= 2 g^_N ||x||"].add(alpha * nv[0], 2 * U("g_hat", n) * nx, wx(Lambda=set_json(Lam)))
        m = Lam_a.size
        W["||T_a x|| <= g^c ||x||"].add(nv[1], U("g_c", m) * nx, wx(alpha=a))
        W["||x - T_a x|| <= g ||x||"].add(nv[2], U("g", m) * nx, wx(alpha=a))
        W["||T_a (I-P_A) x|| <= k^c ||x||"].add(nv[3], U("k_c", union) * nx, wx(alpha=a, A=set_json(A)))
        W["||T_a (I-P_A) x|| <= g^c k^c ||x||"].add(nv[3], U("g_c", lam_y) * U("k_c", Asz) * nx,
                                                     wx(alpha=a, A=set_json(A)))
        W["||x + z|| <= nu ||x + a 1_B||"].add(nv[4], U("nu", b) * nv[5],
                                                lambda xp=xp, zz=zz, B=B, al=alph, et=eta: {
                                                    "x": vec_to_json(xp), "z": vec_to_json(zz), "B": set_json(B),
                                                    "alpha": al, "eta": vec_to_json(et)})
        if nz:
            W["||z|| <= tmu max|z| ||1_B||"].add(nv[6], U("tmu", b) * float(np.max(np.abs(z6))) * nv[7],
                                                  lambda z6=z6, B=B: {"z": vec_to_json(z6), "B": set_json(B)})
        W["||1_{eps B}|| <= 2 kappa gamma ||1_{eta A}||"].add(
            nv[8], 2 * kap * U("gamma", asz) * nv[9],
            lambda e1=e1, e2=e2: {"signed_B": vec_to_json(e1), "signed_A": vec_to_json(e2)})
    return [w.certificate() for w in W.values()]


def constant_invariants(space: SpaceOracle, table: ConstantTable, N: int) -> list[BoundCertificate]:
    """Relations between the constants themselves at order N."""
    tol = space.tol
    L = table.lower
    U = table.upper
    Ks = space.meta.K_star
    k2 = space.kappa**2
    out = []

    def add(name, lhs, rhs, cite):
        out.append(BoundCertificate(name, lhs, rhs, {}, cite, "invariant", tol=tol))

    add("g_N <= g~_N", L("g", N), U("g_tilde", N), "nested greedy differences contain G - 0")
    add("g~_N <= min{2 g^_N, g_N g^c_N, k_N}", L("g_tilde", N),
        min(2 * U("g_hat", N), U("g", N) * U("g_c", N), U("k", N)), "differences of nested greedy operators")
    add("tmu^d_N <= nu_N", L("tmu_d", N), U("nu", N), "x = 0 in the A-property")
    add("mu_N <= nu_N", L("mu", N), U("nu", N), "x = 1_{A cap B} in the A-property")
    add("nu_N <= g^c_N + g_N tmu^d_N", L("nu", N), U("g_c", N) + U("g", N) * U("tmu_d", N),
        "A-property through quasi-greedy and disjoint superdemocracy")
    add("gamma_N <= g^_N", L("gamma", N), U("g_hat", N), "nested indicators are greedy sets")
    add("tmu_N <= 4 kappa^2 gamma_N mu_N", L("tmu", N), 4 * k2 * U("gamma", N) * U("mu", N),
        "superdemocracy through democracy")
    add("k_N <= K* N", L("k", N), Ks * N, "coefficient-sum bound")
    add("k^c_N <= 1 + K* N", L("k_c", N), 1 + Ks * N, "coefficient-sum bound")
    add("g^c_N <= k^c_N", L("g_c", N), U("k_c", N), "greedy sets are sets")
    add("g_N <= k_N", L("g", N), U("k", N), "greedy sets are sets")
    for kind in ("k", "k_c", "g", "g_c", "g_tilde", "mu", "mu_d", "tmu", "tmu_d", "nu", "gamma"):
        if table.has(kind, N):
            e = table.get(kind, N)
            r = replay(space, e)
            out.append(BoundCertificate(f"{kind}_N witness replays", abs(r - e.lower),
                                        1e-12 * max(1.0, abs(e.lower)), {}, "stored witness re-evaluated",
                                        "invariant", tol=0.0))
            if table.has(kind, N - 1):
                add(f"{kind}_N-1 lower <= {kind}_N lower", table.get(kind, N - 1).lower, e.lower,
                    "suprema over growing families")
    return out


def sandwich_certificates(space: SpaceOracle, table: ConstantTable, N: int, L_lower: float,
                          Lt_lower: float, uppers: list[BoundCertificate]) -> list[BoundCertificate]:
    tol = space.tol
    Lu, Ltu = best_upper(uppers, "L"), best_upper(uppers, "Lt")
    return [
        BoundCertificate("L_lower <= best L upper", L_lower, Lu, {}, "sandwich", "invariant", tol=tol),
        BoundCertificate("Lt_lower <= best Lt upper", Lt_lower, Ltu, {}, "sandwich", "invariant", tol=tol),
        BoundCertificate("L_lower <= k^c_N Lt_upper", L_lower, table.upper("k_c", N) * Ltu, {},
                         "Lt <= L <= k^c_N Lt", "invariant", tol=tol),
    ]
