"""Derivations from l^inf_n into the matrix bimodule M_n(R).

Two calculi are implemented:

* the Hilbert-Schmidt calculus: ``grad f = (f (x) 1 - 1 (x) f) / sqrt(2n)``
  with its trace-pairing adjoint ``div`` and the standard actions
  ``a (b (x) c) d = ab (x) cd``;
* the Cipriani-Sauvageot calculus: ``grad0 f = f (x) 1`` with the actions
  ``a (b (x) c) = ab (x) c - a (x) bc`` and ``(b (x) c) d = b (x) cd``, the
  inner product built from a Dirichlet form, and the adjoint ``div0`` taken
  with respect to the uniform Laplacian.

A matrix ``A`` is read in the basis ``e_i (x) e_j``, i.e. ``A[i, j]`` is the
coefficient of ``e_i (x) e_j``.
"""
import numpy as np

from ._validation import check_batch, check_same_length, check_square
from .norms import NormSpec, dual_ball_vertices, norm_eval, parse_norm
from .operators import _matrix_of

__all__ = [
    "grad", "div", "act", "partial_seminorm", "partial_seminorm_dual",
    "cs_act_left", "cs_act_right", "grad0", "div0", "cs_gram", "cs_inner",
    "cs_norm", "carre_du_champ", "div0_to_div_ratio",
]


def grad(f):
    """``(grad f)[i, j] = (f_i - f_j) / sqrt(2n)``."""
    f = check_batch(f, "f")
    n = f.shape[-1]
    return (f[..., :, None] - f[..., None, :]) / np.sqrt(2.0 * n)


def div(a):
    """Adjoint of :func:`grad` for the trace pairing ``Tr(A^T grad f) = <div A, f>``."""
    a = check_square(a)
    n = a.shape[-1]
    return (a.sum(axis=-1) - a.sum(axis=-2)) / np.sqrt(2.0 * n)


def act(left, a, right):
    """Standard bimodule action: ``(left . A . right)[i, j] = left_i A[i, j] right_j``."""
    left = check_batch(left, "a")
    right = check_batch(right, "b")
    a = check_square(a)
    check_same_length(("a", left), ("A", a), ("b", right))
    return left[..., :, None] * a * right[..., None, :]


def _spec(spec):
    spec = spec if isinstance(spec, NormSpec) else parse_norm(spec)
    if not spec.symmetric:
        raise ValueError(f"{spec} is not a symmetric norm")
    return spec


def partial_seminorm(a, spec):
    """``||div A||`` in the given symmetric norm."""
    spec = _spec(spec)
    out = norm_eval(spec, div(a))
    return out


def partial_seminorm_dual(a, spec):
    """``max{Tr(A^T grad f) : ||f||_* <= 1}`` by enumerating dual-ball vertices.

    Only polyhedral norms have a finite vertex set.  Agrees with
    :func:`partial_seminorm` by duality.
    """
    spec = _spec(spec)
    a = check_square(a)
    if a.ndim != 2:
        raise ValueError("expects a single matrix")
    verts = dual_ball_vertices(spec, a.shape[-1])
    pair = np.einsum("ij,vij->v", a, grad(verts))
    return float(pair.max())


def cs_act_left(f, a):
    """Left Cipriani-Sauvageot action.

    On a basis element ``f . (e_i (x) e_j) = f_i e_i (x) e_j - delta_ij f (x) e_i``;
    in matrix form the entry (k, l) is ``f_k (A[k, l] - A[l, l])``.
    """
    f = check_batch(f, "f")
    a = check_square(a)
    check_same_length(("f", f), ("A", a))
    diag = np.diagonal(a, axis1=-2, axis2=-1)
    return f[..., :, None] * (a - diag[..., None, :])


def cs_act_right(a, h):
    """Right action ``(b (x) c) . h = b (x) ch``: scales column j by h_j."""
    h = check_batch(h, "h")
    a = check_square(a)
    check_same_length(("A", a), ("h", h))
    return a * h[..., None, :]


def grad0(f):
    """``f (x) 1``: row i is constant f_i."""
    f = check_batch(f, "f")
    n = f.shape[-1]
    return np.broadcast_to(f[..., :, None], f.shape + (n,)).copy()


def div0(a):
    """Adjoint of :func:`grad0` in the uniform-Laplacian Cipriani-Sauvageot product.

    Linear extension of ``div0(a (x) b)_i = (1/2n) sum_j (a_i - a_j)(b_i + b_j)``,
    which on a general matrix is
    ``(n A[i, i] + rowsum_i - colsum_i - trace) / (2n)``.
    """
    a = check_square(a)
    n = a.shape[-1]
    diag = np.diagonal(a, axis1=-2, axis2=-1)
    trace = diag.sum(axis=-1, keepdims=True)
    return (n * diag + a.sum(axis=-1) - a.sum(axis=-2) - trace) / (2.0 * n)


def cs_gram(delta):
    """Gram tensor ``G[k, l, i, j] = (e_k (x) e_l, e_i (x) e_j)_H``.

    Built literally from
    ``(c (x) d, a (x) b)_H = (E(c, abd) + E(cdb, a) - E(db, ca)) / 2``
    with ``E(u, v) = -<u, delta v>`` and entrywise vector products.
    Memory is n^4 floats.
    """
    m = _matrix_of(delta)
    n = m.shape[-1]
    e = np.eye(n)
    # ab d over (i, j, l); cdb over (k, l, j); db over (l, j); ca over (k, i)
    abd = np.einsum("ip,jp,lp->ijlp", e, e, e)
    form = -m  # E(e_p, e_q) = -delta[p, q]
    t1 = np.einsum("kq,ijlq->klij", form, abd)            # E(e_k, a b d)
    t2 = np.einsum("kljp,pi->klij", abd, form)            # E(c d b, e_i)
    db = np.einsum("lp,jp->ljp", e, e)
    t3 = np.einsum("ljp,pq,kiq->klij", db, form, db)      # E(d b, c a)
    return 0.5 * (t1 + t2 - t3)


def cs_inner(a, b, delta, method="closed"):
    """Cipriani-Sauvageot inner product of two matrices.

    ``method="closed"`` contracts the basis formula analytically (O(n^2));
    ``method="gram"`` sums ``A[k,l] B[i,j] G[k,l,i,j]`` over the full Gram
    tensor from :func:`cs_gram` (O(n^4)).
    """
    m = _matrix_of(delta)
    a = check_square(a, "A")
    b = check_square(b, "B")
    check_same_length(("A", a), ("B", b), ("delta", m))
    if method == "gram":
        out = np.einsum("...kl,klij,...ij->...", a, cs_gram(m), b)
    elif method == "closed":
        da = np.diagonal(a, axis1=-2, axis2=-1)
        db = np.diagonal(b, axis1=-2, axis2=-1)
        t1 = np.einsum("ki,...ki,...i->...", m, a, db)
        t2 = np.einsum("ki,...k,...ik->...", m, da, b)
        t3 = np.einsum("lk,...kl,...kl->...", m, a, b)
        out = 0.5 * (-t1 - t2 + t3)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


def cs_norm(a, delta, method="closed"):
    """Square root of ``cs_inner(A, A)``; roundoff negatives are clamped to zero."""
    sq = np.asarray(cs_inner(a, a, delta, method))
    if np.any(sq < -1e-6):
        raise ArithmeticError(f"cs_inner(A, A) = {sq.min()!r} is significantly negative")
    out = np.sqrt(np.maximum(sq, 0.0))
    return float(out) if np.ndim(out) == 0 else out


def carre_du_champ(a, c, delta):
    """``(delta(ac) - a delta(c) - c delta(a)) / 2``.

    Normalised so that, for the uniform Laplacian, its mean is the
    covariance ``E_delta(a, c) / n``.
    """
    m = _matrix_of(delta)
    a = check_batch(a, "a")
    c = check_batch(c, "c")
    check_same_length(("a", a), ("c", c), ("delta", m))

    def apply(v):
        return np.einsum("ij,...j->...i", m, v)

    return 0.5 * (apply(a * c) - a * apply(c) - c * apply(a))


def div0_to_div_ratio(n, rng=None, samples=8):
    """Empirical ratio ``div0(A) / div(A)`` over random zero-diagonal matrices.

    Returns ``(ratio, spread)``: the mean ratio and the largest deviation
    from it across all entries and samples.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    ratios = []
    for _ in range(samples):
        a = rng.standard_normal((n, n))
        np.fill_diagonal(a, 0.0)
        d = div(a)
        ok = np.abs(d) > 1e-8
        ratios.append(div0(a)[ok] / d[ok])
    r = np.concatenate(ratios)
    mean = float(r.mean())
    return mean, float(np.abs(r - mean).max())
