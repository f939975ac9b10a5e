"""Simultaneous polynomial root iteration (Aberth-Ehrlich) with Newton polishing.

Coefficients are ascending throughout: ``c[0] + c[1] z + ... + c[d] z^d``.
:func:`aberth` is vectorised over a batch of polynomials of equal degree so
that the curve tracer can solve ``f(z) = w`` for thousands of ``w`` at once.
"""
from __future__ import annotations

import numpy as np

__all__ = ["RootFinderError", "horner", "aberth", "roots", "clustered_roots"]


class RootFinderError(RuntimeError):
    pass


def horner(coeffs, z):
    """Value and derivative of an ascending-coefficient polynomial.

    ``coeffs`` has shape ``(..., d + 1)`` and broadcasts against ``z`` with the
    coefficient axis dropped.
    """
    coeffs = np.asarray(coeffs)
    p = np.zeros(np.broadcast_shapes(coeffs.shape[:-1], np.shape(z)), dtype=complex)
    dp = np.zeros_like(p)
    for k in range(coeffs.shape[-1] - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[..., k]
    return p, dp


def _initial_guesses(coeffs: np.ndarray, seed: int) -> np.ndarray:
    d = coeffs.shape[-1] - 1
    lead = coeffs[..., -1:]
    # Fujiwara-type bound on root moduli
    ratios = np.abs(coeffs[..., :-1] / lead) ** (1.0 / (d - np.arange(d)))
    radius = 2.0 * ratios.max(axis=-1, keepdims=True)
    radius = np.maximum(radius, 1e-3)
    rng = np.random.default_rng(seed)
    phase = 0.4 + 0.1 * rng.random()
    angles = 2 * np.pi * np.arange(d) / d + phase
    return 0.5 * radius * np.exp(1j * angles)


def aberth(coeffs, *, seed: int = 0, maxiter: int = 500, tol: float = 1e-15,
           init=None) -> np.ndarray:
    """All roots of each polynomial in a batch.

    Parameters
    ----------
    coeffs : array_like, shape (..., d + 1)
        Ascending coefficients, leading coefficient nonzero.
    seed : int
        Seeds the phase of the initial circle of guesses.
    init : array_like, optional
        Starting guesses of shape (..., d).

    Returns
    -------
    ndarray of shape (..., d)
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    d = coeffs.shape[-1] - 1
    if d < 1:
        return np.zeros(coeffs.shape[:-1] + (0,), dtype=complex)
    if np.any(coeffs[..., -1] == 0):
        raise ValueError("leading coefficient must be nonzero")
    if d == 1:
        return (-coeffs[..., :1] / coeffs[..., 1:2]).astype(complex)
    z = _initial_guesses(coeffs, seed) if init is None else np.array(init, dtype=complex)
    z = np.broadcast_to(z, coeffs.shape[:-1] + (d,)).copy()
    c = coeffs[..., None, :]
    eye = np.eye(d, dtype=bool)
    active = np.ones(z.shape, dtype=bool)
    for _ in range(maxiter):
        p, dp = horner(c, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / dp, 0)
            diff = z[..., :, None] - z[..., None, :]
            inv = np.where(eye, 0, 1.0 / np.where(eye, 1, diff))
            s = inv.sum(axis=-1)
            step = newton / (1 - newton * s)
        step = np.where(np.isfinite(step) & active, step, 0)
        z -= step
        active = np.abs(step) > tol * (1 + np.abs(z))
        if not active.any():
            break
    if not np.all(np.isfinite(z)):
        raise RootFinderError("non-finite root estimate")
    return z


def newton_polish(coeffs, z, steps: int = 3):
    coeffs = np.asarray(coeffs, dtype=complex)
    z = np.array(z, dtype=complex)
    for _ in range(steps):
        p, dp = horner(coeffs[..., None, :], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dp != 0, p / dp, 0)
        step = np.where(np.isfinite(step), step, 0)
        z = z - step
    return z


def roots(coeffs, *, seed: int = 0) -> np.ndarray:
    """Roots of a single polynomial, Aberth followed by Newton polishing."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    z = aberth(coeffs, seed=seed)
    return newton_polish(coeffs, z)


def _derivative(coeffs: np.ndarray, m: int) -> np.ndarray:
    c = coeffs
    for _ in range(m):
        c = c[1:] * np.arange(1, len(c))
    return c


def _merge_radius(m: int, cluster_tol: float) -> float:
    # an m-fold root scatters double-precision estimates over ~eps**(1/m);
    # capped so high multiplicities cannot swallow well-separated roots
    return max(cluster_tol, min(1e-3, 100.0 * np.finfo(float).eps ** (1.0 / m)))


def _refine_multiple(coeffs: np.ndarray, r: complex, m: int, limit: float,
                     newton_steps: int) -> complex:
    c = _derivative(coeffs, m - 1)
    for _ in range(newton_steps):
        p, dp = horner(c, r)
        if dp == 0 or not np.isfinite(p / dp):
            break
        step = complex(p / dp)
        if abs(step) > limit:
            break
        r -= step
        if abs(step) <= 1e-17 * (1 + abs(r)):
            break
    return r


def clustered_roots(coeffs, *, seed: int = 0, cluster_tol: float = 1e-6,
                    newton_steps: int = 8) -> list[tuple[complex, int]]:
    """Distinct roots with multiplicities.

    Root estimates are grouped around a seed estimate with a radius that
    depends on the group size (an ``m``-fold root scatters double-precision
    estimates over about ``eps**(1/m)``); the size is shrunk until the group
    found within the radius has exactly that size, and the largest such
    group is taken first.  Each group mean is refined by Newton on the
    ``(m - 1)``-th derivative, which has a simple root at an ``m``-fold root
    of the original polynomial.  A group whose refined centre does not make
    the polynomial vanish to near machine precision is split back into
    simple roots.
    """
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    z = np.array(sorted(aberth(coeffs, seed=seed), key=lambda u: (u.real, u.imag)))
    scale = 1.0 + float(np.max(np.abs(z), initial=0.0))
    remaining = list(range(len(z)))
    groups: list[list[complex]] = []
    while remaining:
        best = None
        for i in remaining:
            k = len(remaining)
            while True:
                radius = _merge_radius(k, cluster_tol) * scale if k > 1 else 0.0
                members = [j for j in remaining if abs(z[j] - z[i]) <= radius] if k > 1 else [i]
                if len(members) >= k:
                    break
                k = len(members)
            if best is None or len(members) > len(best):
                best = members
        groups.append([complex(z[j]) for j in best])
        remaining = [j for j in remaining if j not in best]
    absc = np.abs(coeffs)
    out = []
    for g in groups:
        m = len(g)
        r = _refine_multiple(coeffs, complex(np.mean(g)), m,
                             _merge_radius(m, cluster_tol) * scale, newton_steps)
        if m > 1:
            size = float(np.polynomial.polynomial.polyval(abs(r), absc))
            if abs(horner(coeffs, r)[0]) > 1e-12 * size:
                out += [(complex(v), 1) for v in newton_polish(coeffs, np.array(g))]
                continue
        out.append((r, m))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out
