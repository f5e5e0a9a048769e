"""Symmetric norms on R^n, their duals, and majorization.

Three norm families are supported, selected by a :class:`NormSpec`:

* ``p=<p>``  -- the l^p norm, ``1 <= p <= inf``;
* ``kfan=<k>`` -- the Ky Fan k-norm, the sum of the k largest absolute entries;
* ``sumaug`` -- ``||x||_2 + |sum(x)|``, permutation invariant but not
  sign invariant.

Evaluation functions accept a single vector or a stack of vectors along
the last axis.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_batch, check_same_length, check_square, check_vector

__all__ = [
    "NormSpec", "P", "KyFan", "SumAugmented", "CapExceededError",
    "parse_norm", "sort_abs_desc", "norm_eval", "dual_eval",
    "extreme_points_dual_kfan", "dual_ball_vertices", "decompose_in_dual_ball",
    "is_weakly_majorized", "is_substochastic", "is_doubly_stochastic",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ENUMERATION_CAP = 10**6


class CapExceededError(ValueError):
    """An exhaustive enumeration would exceed the configured size cap."""


@dataclass(frozen=True)
class NormSpec:
    """Tagged description of a permutation-invariant norm.

    ``kind`` is one of ``"p"``, ``"kfan"`` or ``"sumaug"``; ``param`` holds
    the exponent (``math.inf`` for the max norm) or the Ky Fan order.
    """

    kind: str
    param: float | int | None = None

    def __post_init__(self):
        if self.kind == "p":
            p = float(self.param)
            if math.isnan(p) or p < 1:
                raise ValueError(f"p-norm needs p >= 1, got {self.param}")
            object.__setattr__(self, "param", p)
        elif self.kind == "kfan":
            k = self.param
            if isinstance(k, float) and k.is_integer():
                k = int(k)
            if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
                raise ValueError(f"Ky Fan order must be a positive integer, got {self.param}")
            object.__setattr__(self, "param", int(k))
        elif self.kind == "sumaug":
            object.__setattr__(self, "param", None)
        else:
            raise ValueError(f"unknown norm kind {self.kind!r}")

    @property
    def symmetric(self):
        """True for sign- and permutation-invariant norms."""
        return self.kind in ("p", "kfan")

    @property
    def polyhedral(self):
        return self.kind == "kfan" or (self.kind == "p" and self.param in (1.0, math.inf))

    def check_dimension(self, n):
        if self.kind == "kfan" and not 1 <= self.param <= n:
            raise ValueError(f"Ky Fan order k={self.param} out of range [1, {n}]")

    def __str__(self):
        if self.kind == "p":
            p = self.param
            if math.isinf(p):
                return "p=inf"
            return f"p={int(p)}" if p.is_integer() else f"p={p!r}"
        if self.kind == "kfan":
            return f"kfan={self.param}"
        return "sumaug"


def P(p):
    return NormSpec("p", p)


def KyFan(k):
    return NormSpec("kfan", k)


def SumAugmented():
    return NormSpec("sumaug")


def parse_norm(text):
    """Parse the text syntax ``p=2``, ``p=inf``, ``kfan=3`` or ``sumaug``."""
    s = str(text).strip().lower()
    if s == "sumaug":
        return SumAugmented()
    key, sep, value = s.partition("=")
    if not sep:
        raise ValueError(f"cannot parse norm spec {text!r}")
    key, value = key.strip(), value.strip()
    if key == "p":
        if value in ("inf", "infinity", "oo"):
            return P(math.inf)
        try:
            return P(float(value))
        except ValueError:
            raise ValueError(f"cannot parse norm spec {text!r}") from None
    if key == "kfan":
        try:
            return KyFan(int(value))
        except ValueError:
            raise ValueError(f"cannot parse norm spec {text!r}") from None
    raise ValueError(f"cannot parse norm spec {text!r}")


def _as_spec(spec):
    return spec if isinstance(spec, NormSpec) else parse_norm(spec)


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def sort_abs_desc(x):
    """Non-increasing rearrangement of ``|x|`` (stable on ties)."""
    x = check_batch(x)
    a = np.abs(x)
    order = np.argsort(-a, axis=-1, kind="stable")
    return np.take_along_axis(a, order, axis=-1)


def _p_norm(x, p):
    a = np.abs(x)
    if math.isinf(p):
        return a.max(axis=-1)
    if p == 1:
        return a.sum(axis=-1)
    if p == 2:
        return np.sqrt(np.einsum("...i,...i->...", a, a))
    # scale by the max entry so large p does not overflow
    m = a.max(axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    return (np.sum((a / safe) ** p, axis=-1) ** (1.0 / p)) * safe[..., 0]


def _kfan_norm(x, k):
    a = np.abs(x)
    n = a.shape[-1]
    if k == n:
        return a.sum(axis=-1)
    if k == 1:
        return a.max(axis=-1)
    top = np.partition(a, n - k, axis=-1)[..., n - k:]
    return top.sum(axis=-1)


def norm_eval(spec, x):
    """Evaluate the norm described by ``spec`` on ``x`` (or on each row of ``x``)."""
    spec = _as_spec(spec)
    x = check_batch(x)
    spec.check_dimension(x.shape[-1])
    if spec.kind == "p":
        out = _p_norm(x, spec.param)
    elif spec.kind == "kfan":
        out = _kfan_norm(x, spec.param)
    else:
        out = np.sqrt(np.einsum("...i,...i->...", x, x)) + np.abs(x.sum(axis=-1))
    return _scalar(out)


def conjugate_exponent(p):
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def dual_eval(spec, x):
    """Dual norm ``max{<x, y> : ||y|| <= 1}``.

    For the Ky Fan k-norm this is ``max(||x||_inf, ||x||_1 / k)``.
    """
    spec = _as_spec(spec)
    x = check_batch(x)
    spec.check_dimension(x.shape[-1])
    if spec.kind == "kfan":
        a = np.abs(x)
        out = np.maximum(a.max(axis=-1), a.sum(axis=-1) / spec.param)
    elif spec.kind == "p":
        out = _p_norm(x, conjugate_exponent(spec.param))
    else:
        raise ValueError("dual norm is not available for sumaug")
    return _scalar(out)


def extreme_points_dual_kfan(n, k, cap=DEFAULT_ENUMERATION_CAP):
    """All vectors ``sum_{i in S} +-e_i`` with ``|S| = k``, as rows of an array.

    These are the extreme points of the unit ball of the dual Ky Fan norm.
    Rows are ordered by support (lexicographic), then by sign pattern.
    """
    n, k = int(n), int(k)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    count = math.comb(n, k) * 2**k
    if count > cap:
        raise CapExceededError(f"C({n},{k})*2^{k} = {count} exceeds cap {cap}")
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=k)))
    out = np.zeros((count, n))
    row = 0
    for support in itertools.combinations(range(n), k):
        block = out[row:row + len(signs)]
        block[:, support] = signs
        row += len(signs)
    return out


def dual_ball_vertices(spec, n, cap=DEFAULT_ENUMERATION_CAP):
    """Extreme points of the dual unit ball for a polyhedral norm."""
    spec = _as_spec(spec)
    spec.check_dimension(n)
    if spec.kind == "kfan":
        return extreme_points_dual_kfan(n, spec.param, cap)
    if spec.kind == "p" and math.isinf(spec.param):
        return extreme_points_dual_kfan(n, 1, cap)
    if spec.kind == "p" and spec.param == 1:
        return extreme_points_dual_kfan(n, n, cap)
    raise ValueError(f"{spec} is not polyhedral; no finite vertex set")


def _threshold_decomposition(u):
    """Write ``u`` in [0,1]^n as a convex combination of 0/1 vectors.

    Systematic-threshold construction: lay the entries of ``u`` end to end
    on [0, sum(u)) and, for a threshold t in [0, 1), select every index whose
    interval contains one of t, t+1, t+2, ...  Each index is selected for a
    set of t of measure u_i, and each selection has floor(sum u) or
    ceil(sum u) elements.  Returns (weights, sets) with sets a boolean array.
    """
    cum = np.concatenate(([0.0], np.cumsum(u)))
    breaks = np.unique(np.concatenate(([0.0, 1.0], np.mod(cum, 1.0))))
    breaks = breaks[(breaks >= 0.0) & (breaks <= 1.0)]
    weights, sets = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi - lo <= 0:
            continue
        t = 0.5 * (lo + hi)
        # index i is chosen iff some t + m lies in [cum[i], cum[i+1])
        chosen = np.floor(cum[1:] - t) - np.floor(cum[:-1] - t) >= 1
        chosen &= u > 0
        weights.append(hi - lo)
        sets.append(chosen)
    return np.array(weights), np.array(sets)


def decompose_in_dual_ball(v, k, tol=1e-12):
    """Convex decomposition of ``v`` into extreme points of the dual Ky Fan ball.

    Returns a list of ``(weight, point)`` pairs whose weights sum to one and
    whose points each have exactly ``k`` entries equal to +-1 (the rest 0).

    Points with fewer than ``k`` nonzeros produced along the way are split
    as the midpoint of two extreme points that differ by +-1 on unused
    coordinates.
    """
    v = check_vector(v, "v")
    n = v.size
    k = int(k)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    d = dual_eval(KyFan(k), v)
    if d > 1 + tol:
        raise ValueError(f"v is outside the dual unit ball (dual norm {d!r})")
    u = np.abs(v)
    if d > 1:
        u = u / d
    sign = np.where(v < 0, -1.0, 1.0)

    weights, sets = _threshold_decomposition(u)
    terms = {}
    for w, chosen in zip(weights, sets):
        m = int(chosen.sum())
        if m > k:
            # only reachable on a roundoff-width threshold segment when sum(u) ~ k
            chosen = chosen.copy()
            chosen[np.flatnonzero(chosen)[k:]] = False
            m = k
        base = np.where(chosen, sign, 0.0)
        if m == k:
            pieces = [(w, base)]
        else:
            spare = np.flatnonzero(~chosen)[: k - m]
            pad = np.zeros(n)
            pad[spare] = 1.0
            pieces = [(0.5 * w, base + pad), (0.5 * w, base - pad)]
        for pw, point in pieces:
            key = tuple(point)
            terms[key] = terms.get(key, 0.0) + pw
    return [(w, np.array(key)) for key, w in terms.items() if w > 0]


def is_weakly_majorized(x, y, tol=1e-12):
    """True iff every partial sum of ``|x|`` sorted down is dominated by that of ``|y|``."""
    x = check_vector(x, "x")
    y = check_vector(y, "y")
    check_same_length(("x", x), ("y", y))
    cx = np.cumsum(sort_abs_desc(x))
    cy = np.cumsum(sort_abs_desc(y))
    return bool(np.all(cx <= cy + tol))


def is_substochastic(a, tol=1e-12):
    """Row and column absolute sums all at most one."""
    a = check_square(a)
    absa = np.abs(a)
    return bool(np.all(absa.sum(axis=0) <= 1 + tol) and np.all(absa.sum(axis=1) <= 1 + tol))


def is_doubly_stochastic(a, tol=1e-12):
    a = check_square(a)
    if np.any(a < -tol):
        return False
    return bool(np.all(np.abs(a.sum(axis=0) - 1) <= tol) and np.all(np.abs(a.sum(axis=1) - 1) <= tol))
