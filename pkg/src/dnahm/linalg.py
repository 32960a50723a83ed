"""Dense complex matrix kernel used by every other module.

Matrices are plain 2-D complex128 numpy arrays; ``cmatrix`` validates and
freezes one. Sizes are small (the charge k is typically 2..10), so the
routines favour robustness and clear error reporting over speed. All
tolerances are relative to matrix magnitude: 1e-9 for rank decisions,
1e-12 for symmetry checks, overridable per call.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import (
    DegenerateLeadingCoefficient,
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
)

CMatrix = np.ndarray

RANK_TOL = 1e-9
SYMMETRY_TOL = 1e-12


def cmatrix(data) -> CMatrix:
    """Validate a matrix: 2-D complex128 with all entries finite.

    The returned array is a frozen copy (non-writeable), safe to share.
    """
    m = np.array(data, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatch("matrix entries must be finite")
    m.setflags(write=False)
    return m


def dagger(m: CMatrix) -> CMatrix:
    """Conjugate transpose."""
    return m.conj().T


def max_abs(m: CMatrix) -> float:
    """Max-abs-entry norm; zero for empty input."""
    return float(np.abs(m).max()) if m.size else 0.0


def _require_square(m: CMatrix) -> int:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m.shape[0]


def _hermitian_part(m: CMatrix, tol: float) -> CMatrix:
    """Return (m + m*)/2 after checking m is Hermitian within tol (relative)."""
    _require_square(m)
    deviation = max_abs(m - dagger(m))
    if deviation > tol * (1.0 + max_abs(m)):
        raise NotHermitian(deviation)
    return (m + dagger(m)) / 2.0


def hermitian_eig(h: CMatrix, tol: float = SYMMETRY_TOL) -> tuple[np.ndarray, CMatrix]:
    """Eigendecompose a Hermitian matrix.

    Returns (eigenvalues ascending, U) with h @ U = U @ diag(eigenvalues)
    and U unitary. Raises NotHermitian if the symmetry check fails and
    NoConvergence if the underlying iteration gives up.
    """
    hs = _hermitian_part(h, tol)
    try:
        lam, u = np.linalg.eigh(hs)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigensolve did not converge: {exc}") from exc
    return lam, u


def positive_sqrt(h: CMatrix, tol: float = SYMMETRY_TOL) -> CMatrix:
    """Positive square root of a Hermitian positive-definite matrix.

    Computed by the scaled Denman-Beavers iteration, which keeps the
    eigendecomposition reconstruction available as an independent
    cross-check. Raises NotPositiveDefinite (carrying lambda_min) when the
    smallest eigenvalue is below tol relative to the matrix magnitude;
    during evolution that is the breakdown signal.
    """
    hs = _hermitian_part(h, tol)
    k = hs.shape[0]
    scale = 1.0 + max_abs(hs)
    lam_min = float(np.linalg.eigvalsh(hs)[0])
    if lam_min <= tol * scale:
        raise NotPositiveDefinite(lam_min)

    y = hs.copy()
    z = np.eye(k, dtype=np.complex128)
    converged = False
    for _ in range(60):
        mu = abs(np.linalg.det(y) * np.linalg.det(z)) ** (-1.0 / (2 * k))
        if not np.isfinite(mu) or mu <= 0.0:
            mu = 1.0
        y, z = mu * y, mu * z
        y_next = 0.5 * (y + np.linalg.inv(z))
        z_next = 0.5 * (z + np.linalg.inv(y))
        step = max_abs(y_next - y)
        y, z = y_next, z_next
        if step <= 1e-14 * (1.0 + max_abs(y)):
            converged = True
            break
    root = (y + dagger(y)) / 2.0
    if not converged and max_abs(root @ root - hs) > 1e-11 * scale:
        raise NoConvergence("matrix square root iteration did not converge")
    return root


def inverse(m: CMatrix, tol: float = RANK_TOL) -> CMatrix:
    """Inverse of a square matrix, refusing when the condition is hopeless.

    Raises Singular (with the condition estimate) when the smallest singular
    value is below tol times the largest.
    """
    _require_square(m)
    s = np.linalg.svd(m, compute_uv=False)
    smax = s[0] if s.size else 0.0
    smin = s[-1] if s.size else 0.0
    if smax == 0.0 or smin <= tol * smax:
        raise Singular(condition=float(smax / smin) if smin > 0 else np.inf)
    return np.linalg.inv(m)


def nullity(m: CMatrix, tol: float = RANK_TOL) -> tuple[int, CMatrix]:
    """Numerical nullity and an orthonormal nullspace basis.

    Accepts any rectangular matrix. Counts singular values at or below
    tol * sigma_max; the basis columns satisfy ||m @ basis|| <= tol * sigma_max.
    """
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    _, s, vh = np.linalg.svd(m)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > tol * smax))
    basis = dagger(vh[rank:])
    return m.shape[1] - rank, basis


def matrix_rank(m: CMatrix, tol: float = RANK_TOL) -> int:
    """Numerical rank at relative tolerance tol."""
    count, _ = nullity(m, tol)
    return m.shape[1] - count


def poly_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Roots of a polynomial given ascending coefficients c[0] + c[1] x + ...

    Uses companion-matrix eigenvalues. Raises DegenerateLeadingCoefficient
    when the leading coefficient is negligible relative to the others.
    Roots are sorted by (real, imag) so output order is deterministic.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim != 1 or c.size == 0:
        raise DimensionMismatch("coefficients must be a non-empty 1-D sequence")
    scale = float(np.abs(c).max())
    if scale == 0.0 or abs(c[-1]) <= 1e-12 * scale:
        raise DegenerateLeadingCoefficient(
            f"leading coefficient {abs(c[-1]):.3e} below 1e-12 of scale {scale:.3e}"
        )
    d = c.size - 1
    if d == 0:
        return np.zeros(0, dtype=np.complex128)
    monic = c / c[-1]
    comp = np.zeros((d, d), dtype=np.complex128)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -monic[:-1]
    roots = np.linalg.eigvals(comp)
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]
