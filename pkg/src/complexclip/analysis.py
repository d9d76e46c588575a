"""Singular-value spectra and conditioning reports for spectrogram matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .detector import Spectrogram, SpectrogramDb
from .errors import EmptyMatrix, NonFiniteEntry, ShapeMismatch

DEFAULT_RTOL = 1e-6
REPORT_SIGMAS = 32


@numba.njit(cache=True)
def _jacobi_sweeps(X, tol, negligible, max_sweeps):
    """One-sided (Hestenes) Jacobi on the columns of ``X``, in place.

    Cyclic-by-row ordering. Columns whose squared norm is at most
    ``negligible`` are at rounding level and are left alone. Returns the
    number of sweeps used, or -1 if the columns were not mutually orthogonal
    to ``tol`` after ``max_sweeps``.
    """
    m, n = X.shape
    norms = np.empty(n)
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += X[i, j] * X[i, j]
        norms[j] = acc
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                a = norms[p]
                b = norms[q]
                if a <= negligible or b <= negligible:
                    continue
                g = 0.0
                for i in range(m):
                    g += X[i, p] * X[i, q]
                if abs(g) <= tol * math.sqrt(a * b):
                    continue
                rotated = True
                zeta = (b - a) / (2.0 * g)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + math.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                na = 0.0
                nb = 0.0
                for i in range(m):
                    xp = X[i, p]
                    xq = X[i, q]
                    u = c * xp - s * xq
                    v = s * xp + c * xq
                    X[i, p] = u
                    X[i, q] = v
                    na += u * u
                    nb += v * v
                norms[p] = na
                norms[q] = nb
        if not rotated:
            return sweep + 1
    return -1


@dataclass(frozen=True, eq=False)
class SingularSpectrum:
    values: np.ndarray
    source_shape: tuple[int, int]

    def __len__(self) -> int:
        return self.values.size


def singular_values(A: np.ndarray, *, tol: float | None = None, max_sweeps: int = 100) -> SingularSpectrum:
    """Singular values of a real matrix, descending.

    The matrix is first reduced to its triangular QR factor (an orthogonal
    transform, so singular values are unchanged); one-sided Jacobi rotations
    then orthogonalize the columns of ``R^T`` and the column norms are the
    singular values.

    ``tol`` is the relative column-orthogonality threshold; the default,
    ``n * eps``, is the level at which inner products of rounding-noise
    columns stop being meaningful (tighter values may never converge on
    rank-deficient input).
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.size == 0:
        raise EmptyMatrix(f"need a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NonFiniteEntry("matrix contains NaN or infinite entries")
    shape = (int(A.shape[0]), int(A.shape[1]))
    if A.shape[0] < A.shape[1]:
        A = A.T
    R = np.linalg.qr(A, mode="r")
    X = np.array(R.T, dtype=np.float64, order="F")
    if tol is None:
        tol = X.shape[0] * np.finfo(np.float64).eps
    negligible = (np.finfo(np.float64).eps * np.linalg.norm(X)) ** 2
    if _jacobi_sweeps(X, tol, negligible, max_sweeps) < 0:
        raise RuntimeError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.sqrt(np.einsum("ij,ij->j", X, X))
    sigma = np.sort(sigma)[::-1]
    return SingularSpectrum(sigma, shape)


def numerical_rank(s: SingularSpectrum | np.ndarray, rtol: float = DEFAULT_RTOL) -> int:
    """Number of singular values above ``rtol`` times the largest."""
    if not 0 < rtol < 1:
        raise ValueError(f"rtol must be in (0, 1), got {rtol}")
    values = s.values if isinstance(s, SingularSpectrum) else np.asarray(s, dtype=float)
    if values.size == 0 or values[0] <= 0:
        return 0
    return int(np.count_nonzero(values > rtol * values[0]))


@dataclass(frozen=True, eq=False)
class ConditionReport:
    baseline: SingularSpectrum
    clipped: SingularSpectrum
    sigma_max_reduction: float
    per_sigma_relative_change: np.ndarray
    condition_ratio: float
    support_fraction_clipped: float
    baseline_rank: int
    clipped_rank: int
    source_id: str = ""

    def to_json(self, n_sigmas: int = REPORT_SIGMAS) -> dict:
        ratio = self.condition_ratio
        return {
            "source_id": self.source_id,
            "shape": list(self.baseline.source_shape),
            "baseline_sigmas": self.baseline.values[:n_sigmas].tolist(),
            "clipped_sigmas": self.clipped.values[:n_sigmas].tolist(),
            "sigma_max_reduction": self.sigma_max_reduction,
            "condition_ratio": ratio if math.isfinite(ratio) else None,
            "support_fraction": self.support_fraction_clipped,
        }


def _matrix_and_support(Y) -> tuple[np.ndarray, float]:
    if isinstance(Y, SpectrogramDb):
        values = Y.values
        support = np.count_nonzero(values > Y.floor) / values.size
    elif isinstance(Y, Spectrogram):
        values = Y.values
        support = np.count_nonzero(values > 0) / values.size
    else:
        values = np.asarray(Y, dtype=np.float64)
        if values.size == 0:
            raise EmptyMatrix("empty matrix")
        support = np.count_nonzero(values > 0) / values.size
    return values, float(support)


def _condition(values: np.ndarray, rank: int) -> float:
    if rank == 0:
        return math.nan
    return float(values[0] / values[rank - 1])


def condition_report(
    baseline: Spectrogram | SpectrogramDb | np.ndarray,
    clipped: Spectrogram | SpectrogramDb | np.ndarray,
    rtol: float = DEFAULT_RTOL,
    source_id: str = "",
) -> ConditionReport:
    """Compare singular spectra of a baseline and a clipped spectrogram.

    Condition numbers use the numerical rank at ``rtol`` so that sparse
    clipped matrices (whose smallest singular value is often zero) still get
    a finite value. For dB spectrograms the clipped support counts entries
    above the floor.
    """
    base, _ = _matrix_and_support(baseline)
    clip, support = _matrix_and_support(clipped)
    if base.shape != clip.shape:
        raise ShapeMismatch(f"baseline shape {base.shape} != clipped shape {clip.shape}")
    sb = singular_values(base)
    sc = singular_values(clip)
    rb = numerical_rank(sb, rtol)
    rc = numerical_rank(sc, rtol)
    b0, c0 = sb.values[0], sc.values[0]
    if b0 > 0:
        reduction = float(1.0 - c0 / b0)
    else:
        reduction = 0.0 if c0 == 0 else -math.inf
    k = min(rb, rc)
    change = (sc.values[:k] - sb.values[:k]) / sb.values[:k]
    cb, cc = _condition(sb.values, rb), _condition(sc.values, rc)
    ratio = cb / cc if (math.isfinite(cb) and math.isfinite(cc)) else math.nan
    return ConditionReport(sb, sc, reduction, change, ratio, support, rb, rc, source_id)
