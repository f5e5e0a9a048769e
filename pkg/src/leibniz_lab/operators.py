"""Matrix constructions on R^n: Theta_x, I_x, L_x, Laplacians and Dirichlet forms.

Vector arguments may carry leading batch axes; matrices are then returned
with shape ``(..., n, n)``.
"""
import math

import numpy as np

from ._validation import check_batch, check_same_length, check_square
from .norms import NormSpec, dual_ball_vertices, dual_eval, norm_eval, parse_norm
from .probability import DiscreteMeasure

__all__ = [
    "Laplacian", "LaplacianError", "mean_projection", "theta", "i_matrix",
    "l_matrix", "delta_uniform", "delta_weighted", "delta3", "pi_matrix",
    "dirichlet_eval", "unit_contraction", "product_identity_residual",
    "opnorm_on_centered", "random_laplacian", "random_substochastic",
    "random_centered",
]


class LaplacianError(ValueError):
    """A matrix failed one of the Laplacian invariants."""

    def __init__(self, invariant, amount, message=None):
        self.invariant = invariant
        self.amount = float(amount)
        super().__init__(message or f"Laplacian invariant {invariant!r} violated by {amount:.3e}")


class Laplacian:
    """A symmetric, non-positive definite matrix with kernel span{1}
    and non-negative off-diagonal entries.

    Construction validates the invariants and raises :class:`LaplacianError`
    naming the failing invariant and the size of the violation.
    """

    SYMMETRY_TOL = 1e-12
    KERNEL_TOL = 1e-12
    DEFINITE_TOL = 1e-10
    GAP_TOL = 1e-8
    OFFDIAG_TOL = 1e-12

    def __init__(self, matrix, validate=True):
        m = check_square(matrix, "Laplacian")
        if m.ndim != 2:
            raise ValueError("Laplacian must be a single 2-D matrix")
        if m.shape[0] < 2:
            raise LaplacianError("size", m.shape[0], "a Laplacian needs n >= 2")
        self.matrix = m
        if validate:
            self.validate()

    @property
    def n(self):
        return self.matrix.shape[0]

    def violations(self):
        """Return ``{invariant: amount}`` for every failed invariant."""
        m = self.matrix
        out = {}
        asym = np.abs(m - m.T).max()
        if asym > self.SYMMETRY_TOL * max(1.0, np.abs(m).max()):
            out["symmetric"] = asym
        kernel = np.abs(m.sum(axis=1)).max()
        if kernel > self.KERNEL_TOL * max(1.0, np.abs(m).max()):
            out["kernel contains 1"] = kernel
        off = m[~np.eye(self.n, dtype=bool)]
        if off.size and off.min() < -self.OFFDIAG_TOL:
            out["off-diagonal >= 0"] = -off.min()
        eig = np.linalg.eigvalsh(0.5 * (m + m.T))
        if eig[-1] > self.DEFINITE_TOL:
            out["non-positive definite"] = eig[-1]
        gap = np.sort(np.abs(eig))[1]
        if gap <= self.GAP_TOL:
            out["kernel is exactly span{1}"] = gap
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            name, amount = next(iter(bad.items()))
            raise LaplacianError(name, amount)
        return self

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __matmul__(self, other):
        return self.matrix @ other

    def __repr__(self):
        return f"Laplacian(n={self.n})"


def _matrix_of(delta):
    return delta.matrix if isinstance(delta, Laplacian) else check_square(delta, "delta")


def mean_projection(n):
    """Orthogonal projection onto the constants: every entry 1/n."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.full((n, n), 1.0 / n)


def theta(x):
    """Symmetric matrix with off-diagonal (x_i + x_j)/(2n) and zero row sums."""
    x = check_batch(x)
    n = x.shape[-1]
    m = (x[..., :, None] + x[..., None, :]) / (2.0 * n)
    idx = np.arange(n)
    m[..., idx, idx] = 0.0
    m[..., idx, idx] = -m.sum(axis=-1)
    return m


def i_matrix(x):
    """``I_n + theta(x)``."""
    x = check_batch(x)
    return np.eye(x.shape[-1]) + theta(x)


def l_matrix(x):
    """``i_matrix(x) - x (x) 1 / n``: entry (i, j) is I_x[i, j] - x_i / n."""
    x = check_batch(x)
    return i_matrix(x) - x[..., :, None] / x.shape[-1]


def delta_uniform(n):
    """Laplacian ``P - I`` of the uniform measure on n points."""
    n = int(n)
    if n < 2:
        raise ValueError("delta_uniform needs n >= 2")
    return Laplacian(mean_projection(n) - np.eye(n))


def delta_weighted(mu):
    """Laplacian with off-diagonal mu_i mu_j and zero row sums."""
    mu = mu if isinstance(mu, DiscreteMeasure) else DiscreteMeasure(mu)
    w = mu.weights
    if w.size < 2:
        raise ValueError("delta_weighted needs at least two points")
    if np.any(w <= 0):
        raise ValueError("delta_weighted needs strictly positive weights")
    m = np.outer(w, w)
    np.fill_diagonal(m, 0.0)
    np.fill_diagonal(m, -m.sum(axis=1))
    return Laplacian(m)


_DELTA3 = np.array([[-2.0, 1.0, 1.0], [1.0, -1.0, 0.0], [1.0, 0.0, -1.0]])


def delta3():
    """The 3-point path Laplacian with centre vertex 1."""
    return Laplacian(_DELTA3.copy())


def pi_matrix(x):
    """Half-weighted matrix with ``delta3 (fg) = pi(f) g + pi(g) f``."""
    x = check_batch(x)
    if x.shape[-1] != 3:
        raise ValueError("pi_matrix needs vectors of length 3")
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    a, b = x1 + x2, x1 + x3
    z = np.zeros_like(x1)
    m = np.stack([
        np.stack([-(a + b), a, b], axis=-1),
        np.stack([a, -a, z], axis=-1),
        np.stack([b, z, -b], axis=-1),
    ], axis=-2)
    return 0.5 * m


def dirichlet_eval(delta, u, v):
    """Dirichlet form ``-<u, delta v>``."""
    m = _matrix_of(delta)
    u = check_batch(u, "u")
    v = check_batch(v, "v")
    check_same_length(("delta", m), ("u", u), ("v", v))
    out = -np.einsum("...i,...i->...", u, np.einsum("...ij,...j->...i", m, v))
    return float(out) if np.ndim(out) == 0 else out


def unit_contraction(f):
    """Clip every entry to [0, 1]."""
    return np.clip(check_batch(f, "f"), 0.0, 1.0)


def product_identity_residual(f, g):
    """``I_{f+1}(g - Eg) + I_{g+1}(f - Ef) - (E(fg) - fg)``, identically zero."""
    f = check_batch(f, "f")
    g = check_batch(g, "g")
    check_same_length(("f", f), ("g", g))
    fc = f - f.mean(axis=-1, keepdims=True)
    gc = g - g.mean(axis=-1, keepdims=True)
    fg = f * g
    lhs = (np.einsum("...ij,...j->...i", i_matrix(f + 1.0), gc)
           + np.einsum("...ij,...j->...i", i_matrix(g + 1.0), fc))
    return lhs - (fg.mean(axis=-1, keepdims=True) - fg)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _min_over_shift(spec, w, xtol=1e-13):
    """``min_lambda dual_eval(spec, w - lambda 1)`` row-wise, by golden section.

    The objective is convex and piecewise linear, and outside
    [min(w), max(w)] it increases, so that interval brackets the minimum.
    """
    lo = w.min(axis=-1)
    hi = w.max(axis=-1)
    width = float((hi - lo).max(initial=0.0))
    if width == 0.0:
        return dual_eval(spec, w - lo[..., None])
    iters = max(1, math.ceil(math.log(xtol / width) / math.log(_INV_PHI)))

    def obj(lam):
        return dual_eval(spec, w - lam[..., None])

    for _ in range(iters):
        c = hi - _INV_PHI * (hi - lo)
        d = lo + _INV_PHI * (hi - lo)
        left = obj(c) < obj(d)
        hi = np.where(left, d, hi)
        lo = np.where(left, lo, c)
    lam = 0.5 * (lo + hi)
    return np.minimum(obj(lam), np.minimum(obj(lo), obj(hi)))


def opnorm_on_centered(a, spec, method="exact-polyhedral", trials=10_000, seed=0,
                       cap=None):
    """Operator norm of ``a`` restricted to the mean-zero hyperplane.

    ``exact-polyhedral`` uses duality: the norm equals the maximum over
    extreme points v of the dual ball of ``min_lambda ||a^T v - lambda 1||_*``.
    ``monte-carlo`` returns the largest ratio ``||a x|| / ||x||`` over
    ``trials`` random centred directions, a lower bound.

    The exact method also accepts a stack of matrices and returns an array.
    """
    a = check_square(a, "A")
    spec = spec if isinstance(spec, NormSpec) else parse_norm(spec)
    n = a.shape[-1]
    spec.check_dimension(n)
    if method == "exact-polyhedral":
        if not spec.polyhedral:
            raise ValueError(f"exact method needs a polyhedral norm, got {spec}")
        if n == 1:
            return 0.0 if a.ndim == 2 else np.zeros(a.shape[:-2])
        kw = {} if cap is None else {"cap": cap}
        verts = dual_ball_vertices(spec, n, **kw)
        # v and -v give the same value
        first = verts[np.arange(len(verts)), np.argmax(verts != 0, axis=1)]
        verts = verts[first > 0]
        w = np.einsum("vi,...ij->...vj", verts, a)
        out = _min_over_shift(spec, w).max(axis=-1)
        return float(out) if np.ndim(out) == 0 else out
    if a.ndim != 2:
        raise ValueError("monte-carlo expects a single matrix")
    if n == 1:
        return 0.0
    if method == "monte-carlo":
        trials = int(trials)
        if trials < 1:
            raise ValueError("monte-carlo needs trials >= 1")
        x = random_centered(np.random.default_rng(seed), n, size=trials)
        num = norm_eval(spec, x @ a.T)
        den = norm_eval(spec, x)
        ok = den > 0
        return float(np.max(num[ok] / den[ok])) if ok.any() else 0.0
    raise ValueError(f"unknown method {method!r}")


def random_centered(rng, n, size=None):
    """Gaussian vectors projected onto the mean-zero hyperplane."""
    shape = (n,) if size is None else (size, n)
    x = rng.standard_normal(shape)
    return x - x.mean(axis=-1, keepdims=True)


def random_substochastic(rng, n):
    """Uniform [-1, 1] entries, rescaled by the largest row/column absolute sum."""
    a = rng.uniform(-1.0, 1.0, (n, n))
    absa = np.abs(a)
    scale = max(absa.sum(axis=0).max(), absa.sum(axis=1).max(), 1.0)
    return a / scale


def random_laplacian(rng, n, edge_prob=0.5, max_tries=1000):
    """Laplacian of a random connected weighted graph.

    Each edge is present with probability ``edge_prob`` and has weight
    uniform on (0, 1]; the graph is resampled until connected.  The diagonal
    is minus the row sum of the weights.
    """
    n = int(n)
    if n < 2:
        raise ValueError("random_laplacian needs n >= 2")
    iu = np.triu_indices(n, 1)
    for _ in range(max_tries):
        present = rng.random(len(iu[0])) < edge_prob
        weights = 1.0 - rng.random(len(iu[0]))
        w = np.zeros((n, n))
        w[iu] = np.where(present, weights, 0.0)
        w = w + w.T
        if _connected(w > 0):
            np.fill_diagonal(w, -w.sum(axis=1))
            return Laplacian(w)
    raise RuntimeError("could not sample a connected graph")


def _connected(adj):
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        frontier = adj[frontier].any(axis=0) & ~seen
        seen |= frontier
    return bool(seen.all())
