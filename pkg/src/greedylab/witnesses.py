"""Explicit extremal vectors for the example spaces, plus trigonometric kernels.

Each generator returns :class:`Witness` objects: the vector, the named index
sets and signs it uses, an optional feasible approximant ``z``, and the
closed-form values the construction is known to produce.  :func:`measure`
recomputes those quantities from the generated objects so every stored
value can be replayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import zero_based
from .errors import IndexRangeError, SizeGuardError
from .spaces import (
    DirectSumSpace,
    MixedDyadicSpace,
    SpaceOracle,
    SummingSpace,
    TrigSpace,
    example_layout,
)

MIXED_DYADIC_MAX_N = 5


@dataclass
class Witness:
    """One concrete construction.

    ``sets`` and ``signs`` are keyed by role (``A``, ``B``, ``Gamma``; ``eps``,
    ``eta``).  Sets are 1-based coordinates, except for trigonometric
    witnesses where they are frequencies.  ``expected`` maps a quantity name
    to ``(value, reason)``.
    """

    name: str
    role: str
    params: dict
    x: np.ndarray | None = None
    sets: dict = field(default_factory=dict)
    signs: dict = field(default_factory=dict)
    feasible_z: np.ndarray | None = None
    expected: dict = field(default_factory=dict)
    notes: str = ""

    def to_dict(self) -> dict:
        def vec(v):
            if v is None:
                return None
            v = np.asarray(v)
            if np.iscomplexobj(v):
                return [[float(a.real), float(a.imag)] for a in v]
            return [float(a) for a in v]

        return {
            "name": self.name,
            "role": self.role,
            "params": dict(self.params),
            "x": vec(self.x),
            "sets": {k: [int(i) for i in v] for k, v in self.sets.items()},
            "signs": {k: vec(v) for k, v in self.signs.items()},
            "feasible_z": vec(self.feasible_z),
            "expected": {k: {"value": float(v), "reason": r} for k, (v, r) in self.expected.items()},
            "notes": self.notes,
        }


@dataclass(frozen=True)
class WitnessSpec:
    """A named, parameterised generator of witnesses."""

    name: str
    space_family: str
    params: dict
    builder: Callable[..., list]

    def generate(self) -> list[Witness]:
        return self.builder(**self.params)


def _pad(v, d: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.size > d:
        raise IndexRangeError(f"witness needs {v.size} coordinates, space has {d}")
    out = np.zeros(d)
    out[: v.size] = v
    return out


# ---------------------------------------------------------------------------
# summing basis


def summing_g_vector(N: int) -> np.ndarray:
    """(-1, 2, -2, ..., 2, -2): norm 1, with N entries 2 and N entries -2."""
    return np.array([-1.0] + [2.0, -2.0] * N)


def summing_witnesses(N: int, dim: int | None = None) -> list[Witness]:
    """g, g^c, nu and L witnesses for the summing basis.

    The L witness uses 5N+1 coordinates.  When ``dim`` is smaller a compact
    variant with 4N+1 coordinates and the same ratio is returned instead.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a = summing_g_vector(N)
    d = dim if dim is not None else max(5 * N + 1, a.size)
    out = []
    plus = tuple(range(2, 2 * N + 1, 2))
    minus = tuple(range(3, 2 * N + 2, 2))
    out.append(Witness("summing_g", "g", {"N": N}, _pad(a, d), {"Gamma": plus},
                       expected={"ratio": (2 * N, "2N"), "denominator": (1.0, "||a|| = 1")}))
    # removing the +2 entries leaves prefix sums -1, -1, -3, ..., -(1+2N)
    out.append(Witness("summing_g_c", "g_c", {"N": N}, _pad(a, d), {"Gamma": plus},
                       expected={"ratio": (1 + 2 * N, "1+2N")}))
    out.append(Witness("summing_g_minus", "g", {"N": N}, _pad(a, d), {"Gamma": minus},
                       expected={"ratio": (2 * N, "2N")}))

    x = np.array([0.5, 0.0, 0.5] * N + [0.5] + [0.0] * N)
    B = tuple(3 * j + 2 for j in range(N))
    A = tuple(range(3 * N + 2, 4 * N + 2))
    out.append(Witness("summing_nu", "nu", {"N": N}, _pad(x, d), {"A": A, "B": B},
                       {"eps": np.ones(N), "eta": -np.ones(N)},
                       expected={"numerator": (0.5 + 2 * N, "1/2 + 2N"),
                                 "denominator": (0.5, "1/2"), "ratio": (1 + 4 * N, "1+4N")}))

    if d >= 5 * N + 1:
        x = np.array([0.5, 1.0, 0.5] * N + [0.5] + [-1.0, 1.0] * N)
        G = tuple(3 * N + 2 + 2 * j for j in range(N))
        z = np.array([0.0, 2.0, 0.0] * N + [0.0] * (2 * N + 1))
        name, notes = "summing_L", ""
    else:
        x = np.array([0.5] + [1.0, 1.0] * N + [-1.0, 1.0] * N)
        G = tuple(2 * N + 2 + 2 * j for j in range(N))
        z = np.zeros(4 * N + 1)
        z[1: 2 * N: 2] = 2.0
        name = "summing_L_compact"
        notes = "4N+1 coordinates; same ratio as the 5N+1 construction"
    out.append(Witness(name, "L", {"N": N}, _pad(x, d), {"Gamma": G}, feasible_z=_pad(z, d),
                       expected={"numerator": (3 * N + 0.5, "3N + 1/2"),
                                 "denominator": (0.5, "sigma_N(x) <= 1/2"),
                                 "ratio": (6 * N + 1, "6N+1")}, notes=notes))
    return out


# ---------------------------------------------------------------------------
# direct sums


def direct_sum_witnesses(family: str, N: int, d1: int | None = None, d2: int | None = None,
                         p: float = 1.0, q: float = 2.0) -> list[Witness]:
    """nu witness 1_A = first N left units, 1_B = first N right units, x = f_{N+1}.

    ``family`` is ``l1_c0``, ``l1_lq`` or ``lp_c0``.
    """
    d1 = N if d1 is None else d1
    d2 = N + 1 if d2 is None else d2
    if d1 < N or d2 < N + 1:
        raise IndexRangeError("direct sum witness needs d1 >= N and d2 >= N+1")
    if family == "l1_c0":
        p, q = 1.0, math.inf
        expected = N + 1.0
        reason = "N+1"
    elif family == "l1_lq":
        p = 1.0
        expected = (N + 1) ** (1 - 1 / q)
        reason = "(N+1)^(1/q')"
    elif family == "lp_c0":
        q = math.inf
        expected = 1 + N ** (1 / p)
        reason = "1 + N^(1/p)"
    else:
        raise ValueError(f"unknown direct sum family {family!r}")
    x = np.zeros(d1 + d2)
    x[d1 + N] = 1.0
    A = tuple(range(1, N + 1))
    B = tuple(range(d1 + 1, d1 + N + 1))
    return [Witness(f"{family}_nu", "nu", {"N": N, "d1": d1, "d2": d2, "p": p, "q": q}, x,
                    {"A": A, "B": B}, {"eps": np.ones(N), "eta": np.ones(N)},
                    expected={"ratio": (expected, reason)})]


# ---------------------------------------------------------------------------
# trigonometric kernels


def trig_lp_norm(coeffs: dict, p: float, M: int) -> float:
    """L^p norm of sum_k c_k e^{ikt} by the M-point rule (FFT)."""
    if not coeffs:
        return 0.0
    kmax = max(abs(k) for k in coeffs)
    if 2 * kmax >= M:
        raise IndexRangeError(f"frequency {kmax} aliases on {M} points")
    arr = np.zeros(M, dtype=complex)
    for k, c in coeffs.items():
        arr[k % M] += c
    vals = np.abs(np.fft.ifft(arr) * M)
    if math.isinf(p):
        return float(vals.max())
    return float(np.mean(vals**p) ** (1 / p))


def dirichlet(n: int) -> dict:
    return {k: 1.0 for k in range(-n, n + 1)}


def fejer(n: int) -> dict:
    """K_n with coefficients (1 - |k|/(n+1))_+."""
    return {k: 1 - abs(k) / (n + 1) for k in range(-n, n + 1)}


def vallee_poussin(N: int) -> dict:
    """V_N = 2 K_{2N-1} - K_{N-1}: coefficient 1 for |k| <= N, (2N-|k|)/N for N < |k| < 2N."""
    out = {k: 2 * c for k, c in fejer(2 * N - 1).items()}
    for k, c in fejer(N - 1).items():
        out[k] -= c
    return {k: v for k, v in out.items() if abs(v) > 1e-15}


def rudin_shapiro(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient signs of the pair (P_k, Q_k), each of length 2^k."""
    P = np.array([1.0])
    Q = np.array([1.0])
    for _ in range(k):
        P, Q = np.concatenate([P, Q]), np.concatenate([P, -Q])
    return P, Q


def _coeffs_on(space: TrigSpace, coeffs: dict) -> np.ndarray:
    x = np.zeros(space.dim, dtype=complex)
    for k, c in coeffs.items():
        x[space.coord(k) - 1] = c
    return x


def _binary_fraction_weights() -> np.ndarray:
    return 2.0 ** -np.arange(1, 54)


def lacunary_l1_norm(A_exp: list[int], low: dict, samples: int, seed: int,
                     chunk: int = 20000) -> tuple[float, float]:
    """E|sum_{j} e^{i 2^j t} + sum_k c_k e^{ikt}| over uniform t, by Monte Carlo.

    t = 2 pi s with s drawn as independent binary digits; frac(2^j s) is read
    off a 53-digit window, so every phase is exact in distribution no matter
    how large 2^j is.  Returns (mean, standard error).
    """
    rng = np.random.default_rng(seed)
    w = _binary_fraction_weights()
    jmax = max(A_exp)
    freqs = np.array(sorted(low), dtype=float)
    cvals = np.array([low[k] for k in sorted(low)], dtype=complex)
    total, total_sq, n = 0.0, 0.0, 0
    while n < samples:
        m = min(chunk, samples - n)
        bits = rng.integers(0, 2, size=(m, jmax + 53), dtype=np.uint8).astype(float)
        f = np.zeros(m, dtype=complex)
        for j in A_exp:
            frac = bits[:, j: j + 53] @ w
            f += np.exp(2j * np.pi * frac)
        s = bits[:, :53] @ w
        if freqs.size:
            f += np.exp(2j * np.pi * np.outer(s, freqs)) @ cvals
        a = np.abs(f)
        total += a.sum()
        total_sq += (a * a).sum()
        n += m
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, math.sqrt(var / n)


def trig_witnesses(kind: str, n: int, p: float = 1.0, M: int = 4096,
                   samples: int = 200_000, seed: int = 0) -> Witness:
    """Trigonometric witnesses, stored as frequency -> coefficient maps.

    ``dirichlet``: D_n; ``rudin_shapiro``: signs of P_n on 0..2^n-1;
    ``vallee_poussin``: V_n; ``lacunary_nu``: A = {2^j : j0 <= j <= j0+2n}
    with 2^j0 >= 4n, B = {-n..n}, x = V_n - 1_B.
    """
    if kind == "dirichlet":
        c = dirichlet(n)
        w = Witness(f"dirichlet_{n}", "kernel", {"n": n, "p": p, "M": M}, sets={"B": tuple(range(-n, n + 1))})
        w.expected["l2_norm"] = (math.sqrt(2 * n + 1), "Parseval")
    elif kind == "rudin_shapiro":
        P, Q = rudin_shapiro(n)
        c = {k: float(s) for k, s in enumerate(P)}
        w = Witness(f"rudin_shapiro_{n}", "kernel", {"n": n, "p": p, "M": M},
                    sets={"A": tuple(range(2**n))}, signs={"eps": P})
        w.expected["l2_norm"] = (2 ** (n / 2), "Parseval")
        w.notes = "sup norm at most sqrt(2) * 2^(n/2)"
    elif kind == "vallee_poussin":
        c = vallee_poussin(n)
        w = Witness(f"vallee_poussin_{n}", "kernel", {"n": n, "p": p, "M": M})
        w.notes = "L1 norm at most 3"
    elif kind == "lacunary_nu":
        j0 = max(0, math.ceil(math.log2(4 * n)))
        A_exp = list(range(j0, j0 + 2 * n + 1))
        V = vallee_poussin(n)
        x = {k: v for k, v in V.items() if abs(k) > n}
        num, err = lacunary_l1_norm(A_exp, x, samples, seed)
        den = trig_lp_norm(V, 1.0, max(M, 64 * n))
        w = Witness(f"lacunary_nu_{n}", "lacunary_nu", {"n": n, "M": M, "samples": samples, "seed": seed},
                    sets={"A": tuple(2**j for j in A_exp), "B": tuple(range(-n, n + 1))},
                    signs={"eps": np.ones(len(A_exp)), "eta": np.ones(2 * n + 1)})
        w.params.update(numerator=num, numerator_stderr=err, denominator=den, ratio=num / den)
        w.notes = "nu ratio ||1_A + x||_1 / ||V_n||_1; numerator by Monte Carlo"
        w.coeffs = x
        return w
    else:
        raise ValueError(f"unknown trigonometric witness {kind!r}")
    w.coeffs = c
    return w


# ---------------------------------------------------------------------------
# mixed dyadic construction


def mixed_dyadic_witnesses(q: float, n: int, norm: str = "triple") -> list[Witness]:
    """x = sum_j (-1)^(j+1) 2^-k_j 1_{D_kj} on levels 0, n, 1, n+1, ... and its greedy part.

    The greedy set of order P = 2^n - 1 is the union of the low levels, where
    every coefficient has the larger modulus and sign +.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > MIXED_DYADIC_MAX_N:
        raise SizeGuardError(f"n={n} exceeds the mixed dyadic guard {MIXED_DYADIC_MAX_N}")
    layout = example_layout(n)
    x = np.zeros(layout.dim)
    G = []
    for j, (k, blk) in enumerate(zip(layout.levels, layout.blocks), start=1):
        x[blk.start: blk.stop] = (-1) ** (j + 1) * 2.0**-k
        if j % 2 == 1:
            G.extend(range(blk.start + 1, blk.stop + 1))
    Nlev = 2 * n
    fx = Nlev ** (1 / q) if not math.isinf(q) else 1.0
    fg = n ** (1 / q) if not math.isinf(q) else 1.0
    num = fg if norm == "f" else max(fg, n)
    w = Witness(f"mixed_dyadic_q{q:g}_n{n}", "g", {"q": q, "n": n, "levels": list(layout.levels),
                                                    "P": 2**n - 1, "norm": norm},
                x, {"Gamma": tuple(G)},
                expected={"denominator": (fx, "(2n)^(1/q)"),
                          "numerator": (num, "n^(1/q) in the f-norm, n in the triple norm"),
                          "ratio": (num / fx, "numerator / (2n)^(1/q)")})
    w.notes = "f-norm and James norm of x both equal (2n)^(1/q)"
    return [w]


# ---------------------------------------------------------------------------
# evaluation


def measure(w: Witness, space: SpaceOracle | None = None) -> dict:
    """Recompute every quantity the witness makes claims about."""
    if w.role == "lacunary_nu":
        return {"numerator": w.params["numerator"], "denominator": w.params["denominator"],
                "ratio": w.params["ratio"]}
    if w.role == "kernel":
        out = {"l2_norm": trig_lp_norm(w.coeffs, 2.0, w.params["M"]),
               "l1_norm": trig_lp_norm(w.coeffs, 1.0, w.params["M"]),
               "sup_norm": trig_lp_norm(w.coeffs, math.inf, w.params["M"])}
        if space is not None:
            out["norm"] = space.norm(_coeffs_on(space, w.coeffs))
        return out
    if space is None:
        raise ValueError("a space is required to measure this witness")
    d = space.dim
    x = np.asarray(w.x, dtype=space.dtype)
    if w.role in ("g", "g_c", "L"):
        G = zero_based(w.sets["Gamma"], d)
        p = np.zeros_like(x)
        p[G] = x[G]
        num_vec = p if w.role == "g" else x - p
        den_vec = x if w.role != "L" else x - np.asarray(w.feasible_z, dtype=space.dtype)
        num, den = space.norm(num_vec), space.norm(den_vec)
        out = {"numerator": num, "denominator": den, "ratio": num / den}
        if isinstance(space, MixedDyadicSpace):
            out["f_numerator"] = float(space.f_norms(num_vec[None])[0])
            out["james_numerator"] = float(space.james_norms(num_vec[None])[0])
            out["f_denominator"] = float(space.f_norms(den_vec[None])[0])
            out["james_denominator"] = float(space.james_norms(den_vec[None])[0])
        return out
    if w.role == "nu":
        A, B = zero_based(w.sets["A"], d), zero_based(w.sets["B"], d)
        if set(A) & set(B) or np.any(x[A] != 0) or np.any(x[B] != 0):
            raise ValueError("nu witness violates disjointness")
        a, b = x.copy(), x.copy()
        a[A] = w.signs.get("eps", 1)
        b[B] = w.signs.get("eta", 1)
        num, den = space.norm(a), space.norm(b)
        return {"numerator": num, "denominator": den, "ratio": num / den}
    raise ValueError(f"unknown witness role {w.role!r}")


def check_expected(w: Witness, space: SpaceOracle | None = None, tol: float = 1e-9) -> dict:
    """quantity -> (measured, expected, ok)."""
    got = measure(w, space)
    out = {}
    for key, (val, _) in w.expected.items():
        m = got[key]
        out[key] = (m, val, abs(m - val) <= tol * max(1.0, abs(val)))
    return out


def witness_space(w: Witness) -> SpaceOracle:
    """The smallest natural space a witness lives in."""
    from .spaces import make_mixed_dyadic, make_summing

    if w.name.startswith("summing"):
        return make_summing(w.x.size)
    if w.role == "nu" and "d1" in w.params:
        return DirectSumSpace(w.params["p"], w.params["d1"], w.params["q"], w.params["d2"])
    if w.name.startswith("mixed_dyadic"):
        return make_mixed_dyadic(w.params["q"], w.params["levels"], w.params["norm"])
    raise ValueError(f"no natural space for {w.name}")


# ---------------------------------------------------------------------------
# seeds for the constant searches


def operator_seeds(space: SpaceOracle, N: int) -> list[np.ndarray]:
    """Vectors known to be extremal (or nearly) for projection-type ratios."""
    d = space.dim
    out = []
    if isinstance(space, SummingSpace):
        for w in summing_witnesses(N, d) if 4 * N + 1 <= d else []:
            if w.role in ("g", "g_c", "L"):
                out.append(w.x)
        if 2 * N + 1 <= d and not out:
            out.append(_pad(summing_g_vector(N), d))
    elif isinstance(space, MixedDyadicSpace):
        levels = space.layout.levels
        n = len(levels) // 2
        if len(levels) % 2 == 0 and levels == example_layout(n).levels and n <= MIXED_DYADIC_MAX_N:
            out.append(mixed_dyadic_witnesses(space.q, n, space.kind)[0].x)
    elif isinstance(space, TrigSpace):
        for m in range(1, space.n_max + 1):
            out.append(_coeffs_on(space, dirichlet(m)))
    return out


def nu_seeds(space: SpaceOracle, N: int) -> list[tuple]:
    """(A, B, eps, eta, x) configurations with 1-based A and B."""
    d = space.dim
    out = []
    ws = []
    if isinstance(space, SummingSpace) and 4 * N + 1 <= d:
        ws = [w for w in summing_witnesses(N, d) if w.role == "nu"]
    elif isinstance(space, DirectSumSpace) and space.d1 >= N and space.d2 >= N + 1:
        x = np.zeros(d)
        x[space.d1 + N] = 1.0
        ws = [Witness("direct_sum_nu", "nu", {}, x, {"A": tuple(range(1, N + 1)),
                                                      "B": tuple(range(space.d1 + 1, space.d1 + N + 1))},
                      {"eps": np.ones(N), "eta": np.ones(N)})]
    for w in ws:
        out.append((list(w.sets["A"]), list(w.sets["B"]), w.signs["eps"], w.signs["eta"], w.x))
    return out


# ---------------------------------------------------------------------------
# registry


def registry() -> list[WitnessSpec]:
    """Default parameterisations of every generator, for listing and export."""
    specs = []
    for N in (1, 2, 3):
        specs.append(WitnessSpec(f"summing_N{N}", "summing", {"N": N}, summing_witnesses))
        specs.append(WitnessSpec(f"l1_c0_N{N}", "direct_sum", {"family": "l1_c0", "N": N, "d1": 4, "d2": 4},
                                 direct_sum_witnesses))
        specs.append(WitnessSpec(f"l1_l2_N{N}", "direct_sum",
                                 {"family": "l1_lq", "N": N, "d1": 4, "d2": 4, "q": 2.0}, direct_sum_witnesses))
        specs.append(WitnessSpec(f"l2_c0_N{N}", "direct_sum",
                                 {"family": "lp_c0", "N": N, "d1": 4, "d2": 4, "p": 2.0}, direct_sum_witnesses))
    for n in (8, 16):
        specs.append(WitnessSpec(f"dirichlet_{n}", "trig", {"kind": "dirichlet", "n": n},
                                 lambda **kw: [trig_witnesses(**kw)]))
    specs.append(WitnessSpec("rudin_shapiro_4", "trig", {"kind": "rudin_shapiro", "n": 4},
                             lambda **kw: [trig_witnesses(**kw)]))
    specs.append(WitnessSpec("vallee_poussin_8", "trig", {"kind": "vallee_poussin", "n": 8},
                             lambda **kw: [trig_witnesses(**kw)]))
    for n in (2, 3, 4):
        specs.append(WitnessSpec(f"mixed_dyadic_q2_n{n}", "mixed_dyadic", {"q": 2.0, "n": n},
                                 mixed_dyadic_witnesses))
    return specs


def find_spec(name: str) -> WitnessSpec:
    for s in registry():
        if s.name == name:
            return s
    raise KeyError(name)
