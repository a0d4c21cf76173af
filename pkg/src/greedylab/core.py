"""Coefficient-vector algebra for the thresholding greedy algorithm.

Vectors are 1-D numpy arrays: ``x[n-1]`` is the n-th coefficient.  Index sets
exposed by the public functions are sorted tuples of 1-based coordinates;
helpers whose names start with an underscore work with 0-based tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import (
    DomainError,
    FieldError,
    IncompletePatternError,
    IndexRangeError,
    InvalidOrderError,
    NotInHullError,
    SizeGuardError,
)

FAMILY_GUARD = 10**6
HULL_GUARD = 20
DEFAULT_ROOTS = 8

IndexSet = tuple  # sorted tuple of 1-based coordinates


def field_of(x) -> str:
    return "complex" if np.iscomplexobj(x) else "real"


def as_vector(x, field: str | None = None) -> np.ndarray:
    """Return ``x`` as a 1-D float or complex array, checking the field tag."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-D coefficient vector, got shape {arr.shape}")
    if field is None:
        field = field_of(arr)
    if field == "real":
        if np.iscomplexobj(arr):
            if np.any(arr.imag != 0):
                raise FieldError("complex coefficients in a real computation")
            arr = arr.real
        return arr.astype(float)
    if field == "complex":
        return arr.astype(complex)
    raise FieldError(f"unknown field tag {field!r}")


def phase(x: np.ndarray) -> np.ndarray:
    """Coordinatewise sgn(x_n) = x_n/|x_n|, with sgn(0) = 1."""
    x = np.asarray(x)
    mod = np.abs(x)
    out = np.ones_like(x)
    nz = mod > 0
    out[nz] = x[nz] / mod[nz]
    return out


def support(x) -> IndexSet:
    return tuple(int(i) + 1 for i in np.flatnonzero(np.asarray(x)))


def sup_norm(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def zero_based(A: Iterable[int], dim: int) -> np.ndarray:
    idx = np.asarray(sorted(set(int(a) for a in A)), dtype=int)
    if idx.size and (idx[0] < 1 or idx[-1] > dim):
        raise IndexRangeError(f"index set {tuple(idx)} not inside 1..{dim}")
    return idx - 1


def one_based(idx: Iterable[int]) -> IndexSet:
    return tuple(sorted(int(i) + 1 for i in idx))


# ---------------------------------------------------------------------------
# greedy sets


@dataclass(frozen=True)
class GreedyFamily:
    base: np.ndarray
    order: int
    sets: tuple

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def family_size(absx: np.ndarray, N: int) -> int:
    """Number of greedy sets of order N for a vector with moduli ``absx``."""
    if N == 0:
        return 1
    t = np.sort(absx)[::-1][N - 1]
    forced = int(np.count_nonzero(absx > t))
    ties = int(np.count_nonzero(absx == t))
    return math.comb(ties, N - forced)


def _greedy_sets0(absx: np.ndarray, N: int, guard: int = FAMILY_GUARD) -> list[tuple]:
    """All greedy sets of order N (0-based, lexicographic)."""
    d = absx.shape[0]
    if N == 0:
        return [()]
    order = np.sort(absx)[::-1]
    t = order[N - 1]
    forced = np.flatnonzero(absx > t)
    ties = np.flatnonzero(absx == t)
    need = N - forced.size
    n_sets = math.comb(ties.size, need)
    if n_sets > guard:
        raise SizeGuardError(f"{n_sets} greedy sets of order {N} exceed the guard {guard}")
    if n_sets == 1 and need in (0, ties.size):
        return [tuple(sorted(forced.tolist() + ties[:need].tolist()))]
    forced_l = forced.tolist()
    out = [tuple(sorted(forced_l + list(c))) for c in itertools.combinations(ties.tolist(), need)]
    out.sort()
    assert len(out[0]) == N <= d
    return out


def greedy_sets(x, N: int, guard: int = FAMILY_GUARD) -> GreedyFamily:
    """Every greedy set of order ``N`` for ``x``, ties included.

    A set G with |G| = N is greedy when min over G of |x_n| dominates every
    |x_n| outside G.  Sets are 1-based and sorted lexicographically.
    """
    x = np.asarray(x)
    d = x.shape[0]
    if not 1 <= N <= d:
        raise InvalidOrderError(f"order N={N} must lie in 1..{d}")
    sets = _greedy_sets0(np.abs(x), N, guard)
    return GreedyFamily(base=x, order=N, sets=tuple(one_based(s) for s in sets))


def is_greedy_set0(absx: np.ndarray, G: Sequence[int]) -> bool:
    if len(G) == 0:
        return True
    inside = np.zeros(absx.shape[0], dtype=bool)
    inside[list(G)] = True
    if inside.all():
        return True
    return absx[inside].min() >= absx[~inside].max()


# ---------------------------------------------------------------------------
# projections, truncation, indicators


def project(x, A: Iterable[int]) -> np.ndarray:
    """P_A x: keep the coordinates in ``A`` (1-based), zero elsewhere."""
    x = np.asarray(x)
    idx = zero_based(A, x.shape[0])
    out = np.zeros_like(x)
    out[idx] = x[idx]
    return out


def complement_project(x, A: Iterable[int]) -> np.ndarray:
    x = np.asarray(x)
    return x - project(x, A)


class Truncation(NamedTuple):
    vector: np.ndarray
    active: IndexSet  # coordinates with |x_n| > alpha


def truncate(x, alpha: float) -> Truncation:
    """Clip every coefficient to modulus ``alpha`` keeping its sign or phase."""
    if not alpha > 0:
        raise DomainError(f"truncation level must be positive, got {alpha}")
    x = np.asarray(x)
    mod = np.abs(x)
    big = mod > alpha
    out = x.copy()
    out[big] = alpha * x[big] / mod[big]
    return Truncation(out, tuple(int(i) + 1 for i in np.flatnonzero(big)))


def _truncate_rows(X: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Row-wise truncation; ``alpha`` has one level per row."""
    mod = np.abs(X)
    a = np.asarray(alpha, dtype=float)[:, None]
    scale = np.where(mod > a, a / np.where(mod > 0, mod, 1.0), 1.0)
    return X * scale


def indicator(A: Iterable[int], eps=None, dim: int | None = None) -> np.ndarray:
    """The signed indicator 1_{eps A} = sum over n in A of eps_n e_n.

    ``eps`` is either a mapping coordinate -> unimodular scalar or a sequence
    aligned with ``sorted(A)``; ``None`` means all signs +1.
    """
    members = sorted(set(int(a) for a in A))
    if dim is None:
        dim = members[-1] if members else 0
    idx = zero_based(members, dim)
    if eps is None:
        vals = np.ones(len(members))
    elif isinstance(eps, Mapping):
        missing = [n for n in members if n not in eps]
        if missing:
            raise IncompletePatternError(f"no sign given for coordinates {missing}")
        vals = np.array([eps[n] for n in members])
    else:
        vals = np.asarray(list(eps))
        if vals.shape[0] != len(members):
            raise IncompletePatternError(
                f"{vals.shape[0]} signs supplied for a set of size {len(members)}"
            )
    if len(members) and np.any(np.abs(np.abs(vals) - 1) > 1e-12):
        raise DomainError("sign entries must be unimodular")
    out = np.zeros(dim, dtype=complex if np.iscomplexobj(vals) else float)
    out[idx] = vals
    return out


def sign_patterns(k: int, field: str = "real", roots: int = DEFAULT_ROOTS,
                  fix_first: bool = False) -> np.ndarray:
    """All sign patterns of length ``k`` as rows.

    Real field: {-1, +1}^k.  Complex field: ``roots``-th roots of unity.
    ``fix_first`` pins the first entry to 1, which is enough whenever the
    quantity being maximised is invariant under a global unimodular factor.
    """
    if field == "real":
        alphabet = np.array([1.0, -1.0])
    elif field == "complex":
        alphabet = np.exp(2j * np.pi * np.arange(roots) / roots)
        alphabet[0] = 1.0
    else:
        raise FieldError(f"unknown field tag {field!r}")
    if k == 0:
        return np.ones((1, 0), dtype=alphabet.dtype)
    if fix_first:
        rest = sign_patterns(k - 1, field, roots)
        return np.hstack([np.ones((rest.shape[0], 1), dtype=alphabet.dtype), rest])
    grids = np.meshgrid(*([np.arange(alphabet.size)] * k), indexing="ij")
    codes = np.stack([g.ravel() for g in grids], axis=1)
    return alphabet[codes]


def subsets_upto(d: int, N: int, include_empty: bool = False) -> list[tuple]:
    """0-based subsets of {0..d-1} with size <= N, by size then lexicographic."""
    out = [()] if include_empty else []
    for k in range(1, min(N, d) + 1):
        out.extend(itertools.combinations(range(d), k))
    return out


def subset_masks(sets: Sequence[tuple], d: int) -> np.ndarray:
    M = np.zeros((len(sets), d), dtype=bool)
    for r, s in enumerate(sets):
        M[r, list(s)] = True
    return M


# ---------------------------------------------------------------------------
# convex hull of signed indicators


def hull_decompose(z, A: Iterable[int], field: str | None = None):
    """Write ``z`` as a convex combination of signed indicators on ``A``.

    Follows the coordinate-by-coordinate halving: a coefficient r e^{i theta}
    splits every existing term into weights (1 + r)/2 and (1 - r)/2 carrying
    the signs +e^{i theta} and -e^{i theta}.  Returns ``[(weight, signs)]``
    where ``signs`` maps each coordinate of A to its unimodular value.
    """
    z = np.asarray(z)
    if field is None:
        field = field_of(z)
    members = sorted(set(int(a) for a in A))
    idx = zero_based(members, z.shape[0])
    if len(members) > HULL_GUARD:
        raise SizeGuardError(f"|A|={len(members)} exceeds hull guard {HULL_GUARD}")
    outside = np.ones(z.shape[0], dtype=bool)
    outside[idx] = False
    if np.any(z[outside] != 0):
        raise NotInHullError("z has coefficients outside A")
    if np.any(np.abs(z) > 1 + 1e-12):
        raise NotInHullError("|z|_inf exceeds 1")

    terms: list[tuple[float, dict]] = [(1.0, {})]
    for n, i in zip(members, idx):
        r = min(abs(z[i]), 1.0)
        # phase via angle: z / |z| is NaN for subnormal complex z
        if field == "real":
            s = float(np.sign(np.real(z[i]))) if r > 0 else 1.0
        else:
            s = complex(np.exp(1j * np.angle(z[i]))) if r > 0 else 1.0 + 0j
        new_terms = []
        for w, signs in terms:
            for wf, sv in (((1 + r) / 2, s), ((1 - r) / 2, -s)):
                if wf > 0:
                    new_terms.append((w * wf, {**signs, n: sv}))
        terms = new_terms
    return terms


# ---------------------------------------------------------------------------
# estimator front-end


class ThresholdingGreedy(TransformerMixin, BaseEstimator):
    """Thresholding greedy approximation of coefficient vectors.

    ``transform`` keeps the ``n_terms`` largest-modulus coefficients of each
    row and zeroes the rest.  Ties are resolved by ``tie_break``: ``"first"``
    takes the lexicographically smallest greedy set, ``"last"`` the largest.

    Parameters
    ----------
    n_terms : int
        Order N of the greedy operator.
    tie_break : {"first", "last"}
    """

    def __init__(self, n_terms: int = 1, tie_break: str = "first"):
        self.n_terms = n_terms
        self.tie_break = tie_break

    def fit(self, X, y=None):
        X = check_array(X, dtype=None)
        if self.tie_break not in ("first", "last"):
            raise ValueError(f"tie_break must be 'first' or 'last', got {self.tie_break!r}")
        if not 1 <= self.n_terms <= X.shape[1]:
            raise InvalidOrderError(f"n_terms={self.n_terms} must lie in 1..{X.shape[1]}")
        self.n_features_in_ = X.shape[1]
        return self

    def greedy_set(self, x) -> IndexSet:
        fam = _greedy_sets0(np.abs(np.asarray(x)), self.n_terms)
        pick = fam[0] if self.tie_break == "first" else fam[-1]
        return one_based(pick)

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=None)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        out = np.zeros_like(X)
        for r, row in enumerate(X):
            idx = np.asarray(self.greedy_set(row)) - 1
            out[r, idx] = row[idx]
        return out

    def residual(self, X):
        """x - G_N x for every row."""
        X = check_array(X, dtype=None)
        return X - self.transform(X)
