"""Finite probability spaces: expectations and absolute central moments."""
import math

import numpy as np

from ._validation import check_batch, check_same_length, check_vector
from .records import SlackRecord

__all__ = [
    "DiscreteMeasure", "expectation", "sigma_p", "ess_sup",
    "weighted_leibniz_terms", "weighted_leibniz_slack",
]


class DiscreteMeasure:
    """Non-negative weights on {0, ..., n-1} summing to one.

    Parameters
    ----------
    weights : array_like
    tol : float
        Allowed deviation of the total mass from one.
    normalize : bool
        Rescale the weights to sum exactly to one after the tolerance check.
    """

    def __init__(self, weights, tol=1e-12, normalize=False):
        w = check_vector(weights, "weights")
        if np.any(w < 0):
            raise ValueError("measure weights must be non-negative")
        total = w.sum()
        if abs(total - 1.0) > tol:
            raise ValueError(f"measure weights sum to {total!r}, not 1")
        self.weights = w / total if normalize else w

    @classmethod
    def uniform(cls, n):
        return cls(np.full(int(n), 1.0 / int(n)))

    @property
    def n(self):
        return self.weights.size

    @property
    def support(self):
        return self.weights > 0

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"DiscreteMeasure({self.weights.tolist()!r})"


def _weights(mu):
    if isinstance(mu, DiscreteMeasure):
        return mu.weights
    w = check_batch(mu, "mu")
    if np.any(w < 0) or np.any(np.abs(w.sum(axis=-1) - 1.0) > 1e-12):
        raise ValueError("mu must be non-negative and sum to one")
    return w


def expectation(f, mu):
    """``sum_i mu_i f_i``."""
    f = check_batch(f, "f")
    w = _weights(mu)
    check_same_length(("f", f), ("mu", w))
    out = np.sum(w * f, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def _check_p(p):
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return p


def sigma_p(f, mu, p):
    """Absolute central moment ``(sum_i mu_i |f_i - E f|^p)^(1/p)``.

    For ``p = inf`` the maximum of ``|f_i - E f|`` over the support of mu.
    """
    p = _check_p(p)
    f = check_batch(f, "f")
    w = _weights(mu)
    check_same_length(("f", f), ("mu", w))
    dev = np.abs(f - np.sum(w * f, axis=-1, keepdims=True))
    if math.isinf(p):
        out = np.max(np.where(w > 0, dev, 0.0), axis=-1)
    elif p == 1:
        out = np.sum(w * dev, axis=-1)
    elif p == 2:
        out = np.sqrt(np.sum(w * dev * dev, axis=-1))
    else:
        out = np.sum(w * dev**p, axis=-1) ** (1.0 / p)
    return float(out) if np.ndim(out) == 0 else out


def ess_sup(f, mu):
    """Max of ``|f_i|`` over indices with positive weight."""
    f = check_batch(f, "f")
    w = _weights(mu)
    out = np.max(np.where(w > 0, np.abs(f), 0.0), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def weighted_leibniz_terms(f, g, mu, p):
    """Return ``(lhs, rhs)`` of the weighted Leibniz inequality

    ``sigma_p(fg) <= ||g||_inf sigma_p(f) + ||f||_inf sigma_p(g)``.
    """
    f = check_batch(f, "f")
    g = check_batch(g, "g")
    check_same_length(("f", f), ("g", g))
    lhs = sigma_p(f * g, mu, p)
    rhs = ess_sup(g, mu) * sigma_p(f, mu, p) + ess_sup(f, mu) * sigma_p(g, mu, p)
    return lhs, rhs


def weighted_leibniz_slack(f, g, mu, p, tolerance=1e-9):
    f = check_vector(f, "f")
    g = check_vector(g, "g")
    w = _weights(mu)
    check_same_length(("f", f), ("g", g), ("mu", w))
    lhs, rhs = weighted_leibniz_terms(f, g, w, p)
    return SlackRecord("weighted-leibniz", lhs, rhs,
                       {"f": f, "g": g, "mu": w, "p": float(p)}, tolerance)
