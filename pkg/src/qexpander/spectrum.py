"""Superoperator view of a channel: spectrum, second eigenvalue, moments.

Conventions fixed here once:

- vec is column-stacking, so vec(A M B) = (B^T kron A) vec(M) and the
  superoperator of E is S = sum_s P(s) (U(s)^T kron U(s)†).
- the second eigenvalue lambda2 is the maximum modulus after removing
  exactly one eigenvalue closest to 1 (ties broken by largest real part);
  random channels have a unique unit eigenvalue, but identity-like edge
  cases need a deterministic rule.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .channel import Channel, apply
from .errors import NumericalError, ValidationError
from .matrixcore import EIG_TOL, HERM_IMAG_TOL, SPECTRAL_RADIUS_TOL

DEFAULT_DIM_CEILING = 64  # dense N^2 x N^2 work is impractical beyond this


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return m.reshape(-1, order="F")


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    return v.reshape((n, n), order="F")


def superoperator(channel: Channel) -> np.ndarray:
    """The N^2 x N^2 matrix S with S vec(M) = vec(E(M)) for all M."""
    n = channel.dim
    s = np.zeros((n * n, n * n), dtype=complex)
    for k in range(channel.kraus_count):
        w = channel.weights[k]
        if w == 0.0:
            continue
        u = channel.unitaries[k]
        s += w * np.kron(u.T, u.conj().T)
    return s


@dataclass(frozen=True, eq=False)
class SuperopSpectrum:
    """All N^2 eigenvalues plus the second-eigenvalue extraction metadata."""

    dim: int
    eigenvalues: np.ndarray  # sorted: descending real part (hermitian) or modulus
    hermitian: bool
    lambda2: float
    unit_eigvec_residual: float
    removed_eigenvalue: complex

    def __post_init__(self) -> None:
        if self.eigenvalues.shape != (self.dim * self.dim,):
            raise ValidationError(
                f"expected {self.dim * self.dim} eigenvalues, got {self.eigenvalues.shape}"
            )


def _remove_one_unit_eigenvalue(eigs: np.ndarray) -> tuple[int, complex]:
    """Index of the eigenvalue to remove: closest to 1, ties to largest real part."""
    dist = np.abs(eigs - 1.0)
    best = np.lexsort((-eigs.real, dist))[0]
    return int(best), complex(eigs[best])


def eigen_spectrum(channel: Channel, dim_ceiling: int = DEFAULT_DIM_CEILING) -> SuperopSpectrum:
    """Dense eigendecomposition of the superoperator with lambda2 extraction."""
    n = channel.dim
    if n > dim_ceiling:
        raise ValidationError(f"N={n} exceeds the dense-solver ceiling {dim_ceiling}")
    s = superoperator(channel)
    try:
        if channel.hermitian:
            eigs = np.linalg.eigvalsh(s).astype(complex)
        else:
            eigs = np.linalg.eigvals(s)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed to converge (channel seed {channel.seed}): {exc}"
        ) from exc

    if channel.hermitian:
        order = np.argsort(-eigs.real)
    else:
        order = np.argsort(-np.abs(eigs))
    eigs = eigs[order]

    radius = float(np.max(np.abs(eigs)))
    if radius > 1.0 + SPECTRAL_RADIUS_TOL:
        raise NumericalError(
            f"spectral radius {radius!r} exceeds 1 (channel seed {channel.seed})"
        )
    if channel.hermitian:
        worst_imag = float(np.max(np.abs(eigs.imag)))
        if worst_imag > HERM_IMAG_TOL:
            raise NumericalError(
                f"hermitian spectrum has imaginary part {worst_imag:.3e} "
                f"(channel seed {channel.seed})"
            )

    drop, removed = _remove_one_unit_eigenvalue(eigs)
    rest = np.delete(eigs, drop)
    lam2 = float(np.max(np.abs(rest))) if rest.size else 0.0

    ident = np.eye(n, dtype=complex)
    v = vec(ident) / math.sqrt(n)
    residual = float(np.max(np.abs(s @ v - v)))

    return SuperopSpectrum(
        dim=n,
        eigenvalues=eigs,
        hermitian=channel.hermitian,
        lambda2=lam2,
        unit_eigvec_residual=residual,
        removed_eigenvalue=removed,
    )


def _superop_power(channel: Channel, m: int) -> np.ndarray:
    s = superoperator(channel)
    power = s
    for _ in range(m - 1):
        power = power @ s
    return power


def moment_trace(channel: Channel, m: int) -> float:
    """tr(S^m) = sum_a lambda_a^m for a Hermitian channel, m even.

    Computed by m - 1 dense multiplications of the superoperator.
    """
    if not channel.hermitian:
        raise ValidationError("moment_trace needs a hermitian channel")
    if m < 2 or m % 2 != 0:
        raise ValidationError(f"moment order must be even and >= 2, got {m}")
    return float(np.trace(_superop_power(channel, m)).real)


def estimate_lambda2_from_moments(channel: Channel, m: int) -> float:
    """(tr(S^m) - 1)^(1/m): an upper bound on lambda2 that tightens as m grows."""
    moment = moment_trace(channel, m)
    if moment <= 1.0:
        raise NumericalError(f"moment {moment!r} <= 1 leaves the estimate undefined")
    return float((moment - 1.0) ** (1.0 / m))


def frobenius_moment(channel: Channel, m: int) -> float:
    """tr((S†)^m S^m), the squared Frobenius norm of S^m.

    Equals sum_a lambda_a^(2m) for Hermitian channels, and is bounded below
    by N^2 D^(-m) for every uniform-weight channel and by 1 always (unit
    eigenvalue).
    """
    if m < 1:
        raise ValidationError(f"moment order must be >= 1, got {m}")
    power = _superop_power(channel, m)
    return float(np.linalg.norm(power, "fro") ** 2)


@dataclass(frozen=True)
class BenchmarkConstants:
    D: int
    lambda_H: float
    lambda_nH: float
    lambda_loose: float


def benchmark_values(D: int) -> BenchmarkConstants:
    """Closed-form gap benchmarks: 2 sqrt(D-1)/D, 1/sqrt(D), and the loose sqrt."""
    if D < 2:
        raise ValidationError(f"need D >= 2, got D={D}")
    lam_h = 2.0 * math.sqrt(D - 1.0) / D
    return BenchmarkConstants(
        D=D,
        lambda_H=lam_h,
        lambda_nH=1.0 / math.sqrt(D),
        lambda_loose=math.sqrt(lam_h),
    )


def write_spectrum_csv(spectrum: SuperopSpectrum, path) -> None:
    """Rows rank,a_over_N2,eig_re,eig_im,eig_abs in the module's sort order."""
    n2 = spectrum.dim * spectrum.dim
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rank", "a_over_N2", "eig_re", "eig_im", "eig_abs"])
        for a, eig in enumerate(spectrum.eigenvalues, start=1):
            writer.writerow(
                [
                    a,
                    f"{a / n2:.12g}",
                    f"{eig.real:.12g}",
                    f"{eig.imag:.12g}",
                    f"{abs(eig):.12g}",
                ]
            )


def faithfulness_residual(channel: Channel, s: np.ndarray, m: np.ndarray) -> float:
    """max-entry |S vec(M) - vec(E(M))|, the defining contract of S."""
    return float(np.max(np.abs(s @ vec(m) - vec(apply(channel, m)))))


__all__ = [
    "DEFAULT_DIM_CEILING",
    "EIG_TOL",
    "BenchmarkConstants",
    "SuperopSpectrum",
    "benchmark_values",
    "eigen_spectrum",
    "estimate_lambda2_from_moments",
    "faithfulness_residual",
    "frobenius_moment",
    "moment_trace",
    "superoperator",
    "unvec",
    "vec",
    "write_spectrum_csv",
]
