"""Supermode basis: eigendecomposition of the tridiagonal coupling matrix.

The linear propagation couples guide amplitudes through the real symmetric
tridiagonal matrix with ``beta_s`` on the diagonal and ``couplings`` on the
off-diagonals.  Its eigenpairs define the supermodes: eigenvalues are
sorted strictly descending, and row k of ``transform`` is the unit-norm
eigenvector of eigenvalue k, so the matrix maps individual-guide operators
to supermode operators.  Row signs are fixed by making the first component
with magnitude above 1e-12 positive; the choice is arbitrary physically
(signs cancel in the basis change of the biphoton amplitude) but keeps
golden outputs deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from anwsim.model import ArrayConfig, ConfigError

__all__ = [
    "SpectralError",
    "DegenerateSpectrumError",
    "SupermodeDecomposition",
    "decompose",
    "homogeneous_reference",
    "decomposition_residuals",
]

DEGENERACY_TOL = 1e-12
_SIGN_TOL = 1e-12


class SpectralError(RuntimeError):
    """Eigensolver failure (no convergence within the iteration cap)."""


class DegenerateSpectrumError(SpectralError):
    """Two eigenvalues coincide within DEGENERACY_TOL; ordering undefined."""


@dataclass(frozen=True, eq=False)
class SupermodeDecomposition:
    """Eigenvalues (strictly descending) and the orthogonal row-eigenvector matrix."""

    eigenvalues: np.ndarray
    transform: np.ndarray

    def __post_init__(self) -> None:
        lam = np.array(self.eigenvalues, dtype=float, copy=True)
        s = np.array(self.transform, dtype=float, copy=True)
        if lam.ndim != 1 or s.shape != (lam.size, lam.size):
            raise ConfigError("transform must be square with one row per eigenvalue")
        lam.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "transform", s)

    @property
    def n_guides(self) -> int:
        return int(self.eigenvalues.size)


def _fix_row_signs(s: np.ndarray) -> np.ndarray:
    # first component with |.| > 1e-12 decides the row sign
    first = (np.abs(s) > _SIGN_TOL).argmax(axis=1)
    lead = s[np.arange(s.shape[0]), first]
    return s * np.where(lead < 0.0, -1.0, 1.0)[:, None]


def _check_gaps(lam_desc: np.ndarray) -> None:
    gaps = -np.diff(lam_desc)
    if gaps.size == 0:
        return
    k = int(np.argmin(gaps))
    if gaps[k] <= DEGENERACY_TOL:
        raise DegenerateSpectrumError(
            f"eigenvalues {k + 1} and {k + 2} coincide within {DEGENERACY_TOL:g} "
            f"({lam_desc[k]!r} vs {lam_desc[k + 1]!r}); ordering is undefined"
        )


def decompose(config: ArrayConfig) -> SupermodeDecomposition:
    """Eigendecomposition of the array's tridiagonal coupling matrix."""
    if config.n_guides == 1:
        return SupermodeDecomposition(config.beta_s.copy(), np.ones((1, 1)))
    try:
        lam, vec = eigh_tridiagonal(config.beta_s, config.couplings)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise SpectralError(f"tridiagonal eigensolver did not converge: {exc}") from exc
    lam = lam[::-1].copy()
    _check_gaps(lam)
    s = _fix_row_signs(vec[:, ::-1].T.copy())
    return SupermodeDecomposition(lam, s)


def homogeneous_reference(n_guides: int, beta_0: float = 0.0, c_0: float = 1.0) -> SupermodeDecomposition:
    """Closed-form eigenpairs of the homogeneous array.

    lambda_k = beta_0 + 2*c_0*cos(k*pi/(N+1)) and
    v_k(j) = sqrt(2/(N+1)) * sin(j*k*pi/(N+1)), k, j = 1..N, which already
    follows the descending ordering and positive-leading-component
    convention of :func:`decompose`.
    """
    n = int(n_guides)
    if n < 1:
        raise ConfigError("n_guides must be at least 1")
    if n == 1:
        return SupermodeDecomposition(np.array([float(beta_0)]), np.ones((1, 1)))
    if not c_0 > 0.0:
        raise ConfigError("c_0 must be positive")
    k = np.arange(1, n + 1)
    lam = beta_0 + 2.0 * c_0 * np.cos(k * np.pi / (n + 1))
    s = np.sqrt(2.0 / (n + 1)) * np.sin(np.outer(k, k) * (np.pi / (n + 1)))
    s = _fix_row_signs(s)
    return SupermodeDecomposition(lam, s)


def decomposition_residuals(config: ArrayConfig, dec: SupermodeDecomposition) -> tuple[float, float]:
    """Max orthonormality defect and max eigen-residual relative to the matrix norm.

    Returns ``(ortho, resid)`` with
    ortho = max(|S S^T - I|, |S^T S - I|) and
    resid = max_k ||Omega v_k - lambda_k v_k||_inf / max(||Omega||, tiny).
    """
    s = dec.transform
    n = dec.n_guides
    eye = np.eye(n)
    ortho = max(
        float(np.abs(s @ s.T - eye).max()),
        float(np.abs(s.T @ s - eye).max()),
    )
    v = s.T  # columns are eigenvectors
    ov = config.beta_s[:, None] * v
    if n > 1:
        c = config.couplings[:, None]
        ov[:-1] += c * v[1:]
        ov[1:] += c * v[:-1]
    resid = float(np.abs(ov - v * dec.eigenvalues[None, :]).max())
    scale = float(np.abs(dec.eigenvalues).max()) if n else 0.0
    return ortho, resid / max(scale, 1e-300)
