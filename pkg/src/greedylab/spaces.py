"""Norm oracles for the finite-dimensional example spaces.

Every oracle evaluates norms row-wise on 2-D arrays (``norms``) so callers can
batch thousands of candidate vectors into one numpy call.  Closed-form values
of the greedy constants are attached as data in ``registered``: a map from a
constant tag to ``(expression in N, citation)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, FieldError, LayoutError, PrecisionError

OPERATOR_KINDS = ("k", "k_c", "g", "g_c", "g_hat", "g_tilde")

_EXPR_NAMESPACE = {"sqrt": math.sqrt, "ceil": math.ceil, "floor": math.floor, "log": math.log,
                   "min": min, "max": max}


@dataclass(frozen=True)
class BasisMeta:
    """Normalisation data of the canonical basis.

    ``kappa1 <= ||e_n||, ||e*_n|| <= kappa2``; ``K = sup ||e_m|| ||e*_n||``
    and ``K_star = sup ||e_n|| ||e*_n||``.
    """

    kappa1: float
    kappa2: float
    K: float
    K_star: float
    field: str = "real"
    basis_norms: tuple = ()
    functional_norms: tuple = ()


class SpaceOracle:
    """A norm on K^dim together with its basis metadata."""

    polyhedral = False

    def __init__(self, name: str, dim: int, meta: BasisMeta, *, registered=None,
                 claims=None, config=None, tol: float = 1e-9):
        if dim < 1:
            raise ConfigError(f"dimension must be positive, got {dim}")
        self.name = name
        self.dim = int(dim)
        self.meta = meta
        self.registered: dict = dict(registered or {})
        self.claims: dict = dict(claims or {})
        self.config = dict(config or {})
        self.tol = tol

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} dim={self.dim}>"

    @property
    def field(self) -> str:
        return self.meta.field

    @property
    def kappa(self) -> int:
        return 1 if self.field == "real" else 2

    @property
    def dtype(self):
        return float if self.field == "real" else complex

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[-1] != self.dim:
            raise ValueError(f"{self.name}: expected {self.dim} coordinates, got {X.shape[-1]}")
        if self.field == "real" and np.iscomplexobj(X):
            if np.any(X.imag != 0):
                raise FieldError(f"{self.name} is a real space; complex coefficients given")
            X = X.real
        return X

    def norms(self, X) -> np.ndarray:
        X = self._check(X)
        if X.shape[0] == 0:
            return np.zeros(0)
        return self._norms(X)

    def norm(self, x) -> float:
        return float(self.norms(np.asarray(x)[None, :])[0])

    def _norms(self, X: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def polyhedral_blocks(self) -> list[np.ndarray] | None:
        """Functional blocks F_b with ||v|| = sum_b max_rows |F_b v|, or None."""
        return None

    def registered_value(self, kind: str, N: int):
        """``(value, citation)`` for a closed-form constant, else ``None``."""
        entry = self.registered.get(kind)
        if entry is None:
            return None
        expr, cite = entry
        ns = dict(_EXPR_NAMESPACE, N=N, **self._expr_params())
        return float(eval(expr, {"__builtins__": {}}, ns)), cite

    def claimed_value(self, kind: str, N: int):
        entry = self.claims.get(kind)
        if entry is None:
            return None
        expr, cite = entry
        ns = dict(_EXPR_NAMESPACE, N=N, **self._expr_params())
        return float(eval(expr, {"__builtins__": {}}, ns)), cite

    def _expr_params(self) -> dict:
        return {}

    def unit_vector(self, n: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=self.dtype)
        e[n - 1] = 1
        return e


def _lp_rows(X: np.ndarray, p: float) -> np.ndarray:
    A = np.abs(X)
    if A.shape[1] == 0:
        return np.zeros(A.shape[0])
    if math.isinf(p):
        return A.max(axis=1)
    if p == 1:
        return A.sum(axis=1)
    if p == 2:
        return np.sqrt((A * A).sum(axis=1))
    return (A**p).sum(axis=1) ** (1.0 / p)


# ---------------------------------------------------------------------------
# summing basis


class SummingSpace(SpaceOracle):
    """Sequences normed by the largest modulus of a partial sum."""

    polyhedral = True

    def __init__(self, d: int):
        meta = BasisMeta(kappa1=1.0, kappa2=2.0, K=2.0, K_star=2.0, field="real",
                         basis_norms=(1.0,) * d,
                         functional_norms=(1.0,) + (2.0,) * (d - 1))
        cite = "summing basis, closed form"
        registered = {
            "mu": ("1", cite),
            "tmu": ("N", cite),
            "k": ("2*N", cite),
            "g": ("2*N", cite),
            "k_c": ("1+2*N", cite),
            "g_c": ("1+2*N", cite),
            "nu": ("1+4*N", cite),
            "L_tilde": ("1+4*N", cite),
            "L": ("1+6*N", cite),
        }
        claims = {"gamma": ("ceil(N/2)", "summing basis, stated without proof")}
        super().__init__(f"summing({d})", d, meta, registered=registered, claims=claims,
                         config={"space": "summing", "dim": d})

    def _norms(self, X):
        return np.abs(np.cumsum(X, axis=1)).max(axis=1)

    def prefix_sums(self, X) -> np.ndarray:
        """The isometry onto l-infinity: a -> (a_1 + ... + a_n)_n."""
        return np.cumsum(self._check(X), axis=1)

    def polyhedral_blocks(self):
        return [np.tril(np.ones((self.dim, self.dim)))]


# ---------------------------------------------------------------------------
# direct sums of sequence spaces


def _exp_label(p: float) -> str:
    if math.isinf(p):
        return "c0"
    return f"l{p:g}"


class DirectSumSpace(SpaceOracle):
    """l^p(d1) + l^q(d2) with ||(x, y)|| = ||x||_p + ||y||_q; q = inf is c0."""

    def __init__(self, p: float, d1: int, q: float, d2: int):
        if d1 < 1 or d2 < 1:
            raise ConfigError("both blocks of a direct sum need positive dimension")
        if p < 1 or q < 1:
            raise ConfigError("exponents must be >= 1")
        self.p, self.q, self.d1, self.d2 = float(p), float(q), int(d1), int(d2)
        d = d1 + d2
        meta = BasisMeta(1.0, 1.0, 1.0, 1.0, "real", (1.0,) * d, (1.0,) * d)
        registered = {kind: ("1", "canonical basis of a lattice direct sum is 1-unconditional")
                      for kind in OPERATOR_KINDS}
        if self.p == 1 and math.isinf(self.q):
            cite = "l1 + c0, closed form"
            registered.update(mu=("N", cite), tmu=("N", cite), nu=("1+N", cite),
                              L=("1+N", cite), L_tilde=("1+N", cite))
        elif self.p == 1:
            cite = "l1 + lq, closed form"
            registered.update(mu=("N**(1-1/q)", cite), tmu=("N**(1-1/q)", cite),
                              nu=("(N+1)**(1-1/q)", cite), L=("(N+1)**(1-1/q)", cite),
                              L_tilde=("(N+1)**(1-1/q)", cite))
        elif math.isinf(self.q) and not math.isinf(self.p):
            cite = "lp + c0, closed form"
            registered.update(mu=("1+(N-1)**(1/p)", cite), tmu=("1+(N-1)**(1/p)", cite),
                              nu=("1+N**(1/p)", cite), L=("1+N**(1/p)", cite),
                              L_tilde=("1+N**(1/p)", cite))
        if math.isinf(self.q):
            right = {"c0": True, "dim": d2}
        else:
            right = {"q": self.q, "dim": d2}
        config = {"space": "direct_sum", "left": {"p": self.p, "dim": d1}, "right": right}
        super().__init__(f"{_exp_label(p)}({d1})+{_exp_label(q)}({d2})", d, meta,
                         registered=registered, config=config)
        self.polyhedral = self.p in (1.0, math.inf) and self.q in (1.0, math.inf)

    def _expr_params(self):
        return {"p": self.p, "q": self.q}

    def _norms(self, X):
        return _lp_rows(X[:, : self.d1], self.p) + _lp_rows(X[:, self.d1:], self.q)

    def polyhedral_blocks(self):
        if not self.polyhedral:
            return None
        blocks = []
        eye = np.eye(self.dim)
        for lo, hi, r in ((0, self.d1, self.p), (self.d1, self.dim, self.q)):
            if r == 1:
                blocks.extend(eye[i: i + 1] for i in range(lo, hi))
            else:
                blocks.append(eye[lo:hi])
        return blocks


# ---------------------------------------------------------------------------
# James norm


def james_norms(X: np.ndarray, q: float) -> np.ndarray:
    """James J_q norm of each row by dynamic programming over block chains.

    best[i] is the largest sum of |block sum|^q over chains of consecutive
    blocks covering 1..i; chains may stop before the last coordinate.
    """
    m, d = X.shape
    S = np.zeros((m, d + 1), dtype=X.dtype)
    np.cumsum(X, axis=1, out=S[:, 1:])
    if math.isinf(q):
        best = 0.0
        for i in range(1, d + 1):
            best = np.maximum(best, np.abs(S[:, i: i + 1] - S[:, :i]).max(axis=1))
        return np.asarray(best, dtype=float) * np.ones(m)
    best = np.zeros((m, d + 1))
    for i in range(1, d + 1):
        best[:, i] = (best[:, :i] + np.abs(S[:, i: i + 1] - S[:, :i]) ** q).max(axis=1)
    return best.max(axis=1) ** (1.0 / q)


class JamesSpace(SpaceOracle):
    polyhedral = False

    def __init__(self, q: float, d: int):
        if q < 1:
            raise ConfigError("James exponent must be >= 1")
        self.q = float(q)
        meta = BasisMeta(1.0, 1.0, 1.0, 1.0, "real", (1.0,) * d, (1.0,) * d)
        super().__init__(f"james(q={q:g},{d})", d, meta,
                         registered={"mu": ("1", "James norm of an indicator is its size")},
                         config={"space": "james", "q": self.q, "dim": d})
        self.polyhedral = self.q == 1

    def _norms(self, X):
        return james_norms(X, self.q)

    def polyhedral_blocks(self):
        if self.q != 1:
            return None
        eye = np.eye(self.dim)
        return [eye[i: i + 1] for i in range(self.dim)]


# ---------------------------------------------------------------------------
# mixed dyadic norm


@dataclass(frozen=True)
class DyadicLayout:
    """Coordinates ordered as consecutive blocks, one per dyadic level.

    The block for level k holds the 2^k dyadic intervals of length 2^-k,
    left to right.
    """

    levels: tuple

    def __post_init__(self):
        levels = tuple(int(k) for k in self.levels)
        if not levels:
            raise LayoutError("a dyadic layout needs at least one level")
        if any(k < 0 for k in levels):
            raise LayoutError("dyadic levels must be non-negative")
        if len(set(levels)) != len(levels):
            raise LayoutError(f"repeated level in {levels}")
        object.__setattr__(self, "levels", levels)

    @property
    def blocks(self) -> list[range]:
        out, start = [], 0
        for k in self.levels:
            out.append(range(start, start + 2**k))
            start += 2**k
        return out

    @property
    def dim(self) -> int:
        return sum(2**k for k in self.levels)

    def block_of(self, level: int) -> range:
        return self.blocks[self.levels.index(level)]

    def level_indicator(self, level: int) -> np.ndarray:
        """1_{D_k}: ones on every coordinate of the level-k block (0-based mask)."""
        v = np.zeros(self.dim)
        v[self.block_of(level).start: self.block_of(level).stop] = 1.0
        return v


def f_norms(X: np.ndarray, layout: DyadicLayout, q: float) -> np.ndarray:
    """Integral over [0,1] of (sum_I |a_I|^q |I|^-q chi_I)^(1/q), exactly.

    The integrand is constant on cells of the finest level, so the integral is
    the average over those cells.
    """
    A = np.abs(X)
    K = max(layout.levels)
    acc = np.zeros((X.shape[0], 2**K))
    for k, blk in zip(layout.levels, layout.blocks):
        vals = A[:, blk.start: blk.stop] * float(2**k)
        rep = np.repeat(vals, 2 ** (K - k), axis=1)
        if math.isinf(q):
            np.maximum(acc, rep, out=acc)
        else:
            acc += rep**q
    if not math.isinf(q):
        acc = acc ** (1.0 / q)
    return acc.mean(axis=1)


class MixedDyadicSpace(SpaceOracle):
    """The dyadic mixed norm; ``norm="triple"`` takes max with the James norm."""

    def __init__(self, q: float, layout: DyadicLayout | Sequence[int], norm: str = "triple"):
        if not isinstance(layout, DyadicLayout):
            layout = DyadicLayout(tuple(layout))
        if norm not in ("triple", "f"):
            raise ConfigError(f"unknown mixed dyadic norm {norm!r}")
        if q < 1:
            raise ConfigError("exponent q must be >= 1")
        self.q = float(q)
        self.layout = layout
        self.kind = norm
        d = layout.dim
        meta = BasisMeta(1.0, 1.0, 1.0, 1.0, "real", (1.0,) * d, (1.0,) * d)
        super().__init__(f"mixed_dyadic(q={q:g},{list(layout.levels)},{norm})", d, meta,
                         config={"space": "mixed_dyadic", "q": self.q,
                                 "levels": list(layout.levels), "norm": norm})

    def f_norms(self, X):
        return f_norms(self._check(X), self.layout, self.q)

    def james_norms(self, X):
        return james_norms(self._check(X), self.q)

    def _norms(self, X):
        f = f_norms(X, self.layout, self.q)
        if self.kind == "f":
            return f
        return np.maximum(f, james_norms(X, self.q))


class L1SumSpace(SpaceOracle):
    """l1-direct sum of several oracles, coordinates concatenated."""

    def __init__(self, blocks: Sequence[SpaceOracle]):
        blocks = list(blocks)
        if not blocks:
            raise ConfigError("an l1 sum needs at least one block")
        fields = {b.field for b in blocks}
        if len(fields) != 1:
            raise FieldError("blocks of an l1 sum must share the scalar field")
        self.blocks = blocks
        self.offsets = np.cumsum([0] + [b.dim for b in blocks])
        d = int(self.offsets[-1])
        m = [b.meta for b in blocks]
        meta = BasisMeta(min(x.kappa1 for x in m), max(x.kappa2 for x in m),
                         max(x.K for x in m), max(x.K_star for x in m), fields.pop(),
                         sum((x.basis_norms for x in m), ()),
                         sum((x.functional_norms for x in m), ()))
        super().__init__("l1sum(" + ",".join(b.name for b in blocks) + ")", d, meta,
                         config={"space": "l1_sum", "blocks": [b.config for b in blocks]})
        self.polyhedral = all(b.polyhedral for b in blocks)

    def _norms(self, X):
        out = np.zeros(X.shape[0])
        for b, lo, hi in zip(self.blocks, self.offsets[:-1], self.offsets[1:]):
            out += b.norms(X[:, lo:hi])
        return out

    def polyhedral_blocks(self):
        if not self.polyhedral:
            return None
        out = []
        for b, lo in zip(self.blocks, self.offsets[:-1]):
            for F in b.polyhedral_blocks():
                G = np.zeros((F.shape[0], self.dim))
                G[:, lo: lo + b.dim] = F
                out.append(G)
        return out


# ---------------------------------------------------------------------------
# trigonometric system


class TrigSpace(SpaceOracle):
    """Trigonometric polynomials sum_k a_k e^{ikt}, |k| <= n_max, in L^p.

    Coordinate j (1-based) carries frequency j - 1 - n_max.  The L^p norm is
    the M-point Riemann sum, which is exact for p = 2 and spectrally accurate
    otherwise once M is a generous multiple of the bandwidth.
    """

    MIN_OVERSAMPLING = 16

    def __init__(self, p: float, n_max: int, M: int):
        if p < 1 or math.isinf(p):
            raise ConfigError("trigonometric oracle needs 1 <= p < inf")
        d = 2 * n_max + 1
        if M < self.MIN_OVERSAMPLING * d:
            raise PrecisionError(
                f"M={M} undersamples frequencies up to {n_max}; need M >= {self.MIN_OVERSAMPLING * d}")
        self.p, self.n_max, self.M = float(p), int(n_max), int(M)
        self.frequencies = np.arange(-n_max, n_max + 1)
        t = 2 * np.pi * np.arange(M) / M
        self._E = np.exp(1j * np.outer(self.frequencies, t))
        meta = BasisMeta(1.0, 1.0, 1.0, 1.0, "complex", (1.0,) * d, (1.0,) * d)
        super().__init__(f"trig(p={p:g},n={n_max},M={M})", d, meta,
                         config={"space": "trig", "p": self.p, "n_max": n_max, "M": M},
                         tol=1e-6)

    def coord(self, k: int) -> int:
        """1-based coordinate of frequency ``k``."""
        if abs(k) > self.n_max:
            raise IndexError(f"frequency {k} outside +-{self.n_max}")
        return k + self.n_max + 1

    def values(self, X) -> np.ndarray:
        return self._check(X).astype(complex) @ self._E

    def _norms(self, X):
        out = np.empty(X.shape[0])
        step = max(1, 2**22 // self.M)
        for lo in range(0, X.shape[0], step):
            V = np.abs(X[lo: lo + step].astype(complex) @ self._E)
            if self.p == 1:
                out[lo: lo + step] = V.mean(axis=1)
            elif self.p == 2:
                out[lo: lo + step] = np.sqrt((V * V).mean(axis=1))
            else:
                out[lo: lo + step] = (V**self.p).mean(axis=1) ** (1 / self.p)
        return out


# ---------------------------------------------------------------------------
# factories and config


def make_summing(d: int) -> SummingSpace:
    return SummingSpace(d)


def make_direct_sum(left: dict, right: dict) -> DirectSumSpace:
    p = float(left.get("p", 1))
    q = math.inf if right.get("c0") else float(right.get("q", math.inf))
    return DirectSumSpace(p, int(left["dim"]), q, int(right["dim"]))


def make_james(q: float, d: int) -> JamesSpace:
    return JamesSpace(q, d)


def make_mixed_dyadic(q: float, layout, norm: str = "triple") -> MixedDyadicSpace:
    return MixedDyadicSpace(q, layout, norm)


def make_trig(p: float, n_max: int, M: int) -> TrigSpace:
    return TrigSpace(p, n_max, M)


def example_layout(n: int) -> DyadicLayout:
    """Levels 0, n, 1, n+1, ..., n-1, 2n-1 interleaving a low and a high range."""
    levels = []
    for j in range(n):
        levels += [j, n + j]
    return DyadicLayout(tuple(levels))


def space_from_config(cfg) -> SpaceOracle:
    """Build an oracle from a JSON object (dict) or a JSON string."""
    if isinstance(cfg, str):
        try:
            cfg = json.loads(cfg)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"space config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict) or "space" not in cfg:
        raise ConfigError("space config must be an object with a 'space' key")
    kind = cfg["space"]
    try:
        if kind == "summing":
            return make_summing(int(cfg["dim"]))
        if kind == "direct_sum":
            return make_direct_sum(cfg["left"], cfg["right"])
        if kind == "james":
            return make_james(float(cfg["q"]), int(cfg["dim"]))
        if kind == "mixed_dyadic":
            q = float(cfg["q"])
            norm = cfg.get("norm", "triple")
            if "blocks" in cfg:
                return L1SumSpace([make_mixed_dyadic(q, lv, norm) for lv in cfg["blocks"]])
            return make_mixed_dyadic(q, cfg["levels"], norm)
        if kind == "l1_sum":
            return L1SumSpace([space_from_config(b) for b in cfg["blocks"]])
        if kind == "trig":
            return make_trig(float(cfg["p"]), int(cfg["n_max"]), int(cfg["M"]))
    except KeyError as exc:
        raise ConfigError(f"space config for {kind!r} lacks field {exc}") from exc
    raise ConfigError(f"unknown space {kind!r}")
