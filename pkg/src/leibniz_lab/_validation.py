"""Input checking shared by the public functions."""
import numpy as np


def check_vector(x, name="x"):
    """Return ``x`` as a finite 1-D float array of length >= 1."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def check_batch(x, name="x"):
    """Like :func:`check_vector` but allows leading batch axes."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] == 0:
        raise ValueError(f"{name} must have a non-empty last axis")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def check_square(a, name="A"):
    arr = np.asarray(a, dtype=float)
    if arr.ndim < 2 or arr.shape[-1] != arr.shape[-2] or arr.shape[-1] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def check_same_length(*named):
    """``named`` is a sequence of (name, array) pairs."""
    sizes = {name: arr.shape[-1] for name, arr in named}
    if len(set(sizes.values())) > 1:
        desc = ", ".join(f"{k}={v}" for k, v in sizes.items())
        raise ValueError(f"dimension mismatch: {desc}")
