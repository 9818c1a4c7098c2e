"""Complex dense linear-algebra kernel for the scheme simulator.

Five small contracts on top of numpy: circularly-symmetric Gaussian
sampling, orthonormal null-space bases, receive-side unitaries that
confine a signal to its first few coordinates, numerical rank, and
full-column-rank linear solves. Channel matrices here are continuous
random, so rank decisions use a relative singular-value threshold;
draws that land below it are measure-zero degeneracies that callers
flag and resample rather than repair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EmptyNullSpace(Exception):
    """The matrix has no right null space under the given tolerance."""


class RankDeficient(Exception):
    """A matrix failed the full-rank precondition of an operation."""


@dataclass(frozen=True)
class Tolerance:
    """Relative singular-value threshold for rank and null-space decisions."""

    rel_eps: float = 1e-10

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_eps < 1.0:
            raise ValueError(f"rel_eps must lie in (0, 1), got {self.rel_eps}")


DEFAULT_TOL = Tolerance()


def sample_gaussian(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a rows x cols matrix of i.i.d. CN(0, 1) entries.

    Real and imaginary parts are each N(0, 1/2) so that E|entry|^2 = 1.
    Deterministic given the generator state.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def rank(h: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above rel_eps times the largest one."""
    h = np.asarray(h)
    if h.size == 0:
        return 0
    s = np.linalg.svd(h, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rel_eps * s[0]))


def null_space_basis(h: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right null space of ``h``.

    Returns a cols x k matrix V with V^H V = I and ||h V|| <= rel_eps ||h||,
    where k = cols - rank(h). For a full-row-rank N x M matrix with M > N
    this is exactly M - N columns.

    Raises EmptyNullSpace when the null space is trivial under ``tol``.
    """
    h = np.asarray(h, dtype=complex)
    _, s, vh = np.linalg.svd(h, full_matrices=True)
    top = s[0] if s.size else 0.0
    r = int(np.sum(s > tol.rel_eps * top)) if top > 0.0 else 0
    if r >= h.shape[1]:
        raise EmptyNullSpace(
            f"{h.shape[0]}x{h.shape[1]} matrix has rank {r}: no null space"
        )
    return vh[r:].conj().T


def receive_unitary(g: np.ndarray, x: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unitary change of basis confining the range of ``g`` to coordinates 1..x.

    ``g`` is the N x x effective desired-signal matrix (channel times
    precoder). The returned N x N unitary U satisfies U^H U = I and rows
    x+1..N of U @ g are zero to within rel_eps * ||g||: after the basis
    change, the x signal streams occupy only the first x coordinates and
    the remaining N - x coordinates carry interference alone.

    Raises RankDeficient when rank(g) < x (degenerate draw; resample).
    """
    g = np.asarray(g, dtype=complex)
    n, ncols = g.shape
    if ncols != x:
        raise ValueError(f"expected {n}x{x} signal matrix, got {n}x{ncols}")
    if x > n:
        raise ValueError(f"cannot confine {x} streams to {n} coordinates")
    if rank(g, tol) < x:
        raise RankDeficient(f"signal matrix rank below {x}")
    u, _, _ = np.linalg.svd(g, full_matrices=True)
    # Left singular vectors: the first x span range(g), the rest are the
    # orthogonal complement, so u^H @ g is zero below row x.
    return u.conj().T


def solve_exact(a: np.ndarray, b: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Solve a consistent square or tall system to machine precision.

    Raises RankDeficient when ``a`` is not full column rank under ``tol``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] < a.shape[1]:
        raise ValueError(f"underdetermined system {a.shape[0]}x{a.shape[1]}")
    if rank(a, tol) < a.shape[1]:
        raise RankDeficient(
            f"{a.shape[0]}x{a.shape[1]} system matrix is column-rank deficient"
        )
    x, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
    return x


def conditioning(a: np.ndarray) -> float:
    """Ratio of smallest to largest singular value (0 for a zero matrix)."""
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])
