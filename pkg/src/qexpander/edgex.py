"""Edge-expansion checks: per-projector ratios, the converse bound, and the
chain inequality on projectors built from the second eigenvector.

For a Hermitian channel with second eigenvalue lambda2 (signed, positive),
the chain argument diagonalizes the traceless eigenvector X, forms nested
projectors P_i onto its top-i eigendirections over the positive block, and
bounds sum_i (f_i^2 - f_{i+1}^2) tr((1-P_i) E(P_i)) by sqrt(2 (1-lambda2)).
The converse direction bounds tr(P E(P)) per projector in terms of
|lambda2| alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Channel, apply
from .errors import NumericalError, ValidationError
from .matrixcore import SLACK_TOL, TRACE_RESIDUAL_TOL, SeededRng, haar_unitary, hs_norm
from .spectrum import eigen_spectrum, superoperator, unvec

PROJECTOR_TOL = 1e-10
RANK_TOL = 1e-8


def random_projector(N: int, rank: int, rng: SeededRng) -> np.ndarray:
    """Rank-`rank` projector onto the span of Haar-random orthonormal columns."""
    if not 1 <= rank <= N:
        raise ValidationError(f"rank must lie in 1..{N}, got {rank}")
    v = haar_unitary(N, rng)[:, :rank]
    return v @ v.conj().T


def assert_projector(p: np.ndarray) -> int:
    """Validate P = P† = P² and return the integer rank tr(P)."""
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError(f"projector must be square, got shape {p.shape}")
    herm = float(np.max(np.abs(p - p.conj().T)))
    if herm > PROJECTOR_TOL:
        raise ValidationError(f"projector not Hermitian: residual {herm:.3e}")
    idem = float(np.max(np.abs(p @ p - p)))
    if idem > PROJECTOR_TOL:
        raise ValidationError(f"projector not idempotent: residual {idem:.3e}")
    tr = float(np.trace(p).real)
    rank = round(tr)
    if abs(tr - rank) > RANK_TOL:
        raise ValidationError(f"projector trace {tr!r} is not near an integer")
    return rank


def edge_ratio(channel: Channel, p: np.ndarray) -> float:
    """tr(P E(P)) / tr(P), the retained weight of the subspace under one step."""
    rank = assert_projector(p)
    if rank == 0:
        raise ValidationError("edge ratio of the rank-0 projector is undefined")
    return float(np.trace(p @ apply(channel, p)).real) / rank


def converse_check(
    channel: Channel, p: np.ndarray, lambda2: float | None = None
) -> tuple[bool, float]:
    """Per-projector bound tr(P E(P)) <= |l2| (l - l^2/N) + l^2/N for l <= N/2.

    Returns (holds, slack) with slack = rhs - lhs; holds means
    slack >= -1e-8. lambda2 may be passed in to avoid recomputing the
    spectrum per projector.
    """
    if not channel.hermitian:
        raise ValidationError("converse bound applies to hermitian channels")
    rank = assert_projector(p)
    if rank == 0:
        raise ValidationError("rank-0 projector")
    n = channel.dim
    if rank > n / 2:
        raise ValidationError(f"converse bound needs rank <= N/2, got rank {rank} at N={n}")
    lam = eigen_spectrum(channel).lambda2 if lambda2 is None else abs(lambda2)
    lhs = float(np.trace(p @ apply(channel, p)).real)
    rhs = lam * (rank - rank * rank / n) + rank * rank / n
    slack = rhs - lhs
    return slack >= -SLACK_TOL, slack


@dataclass(frozen=True, eq=False)
class ChainReport:
    lambda2: float  # signed second eigenvalue used on the right-hand side
    f_values: np.ndarray
    ratios: np.ndarray  # tr((1-P_i) E(P_i)) per nesting level
    lhs: float
    rhs: float
    holds: bool
    trace_residual: float


def tanner_chain_check(channel: Channel) -> ChainReport:
    """Build the nested projectors from the second eigenvector and check
    lhs <= sqrt(2 (1 - lambda2)) + 1e-8.

    Requires the second eigenvalue (signed) to be positive; square the
    channel first when it is not. The eigenvector is reconstructed as a
    traceless Hermitian matrix: the trace component is checked (and, in
    the degenerate case where the second eigenvalue ties the removed unit
    eigenvalue, projected away, since the eigenspace then contains a
    traceless representative), and the larger of the Hermitian /
    anti-Hermitian parts is kept.
    """
    if not channel.hermitian:
        raise ValidationError("chain argument applies to hermitian channels")
    n = channel.dim
    s = superoperator(channel)
    try:
        eigvals, eigvecs = np.linalg.eigh(s)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver failed (channel seed {channel.seed}): {exc}"
        ) from exc

    unit_idx = int(np.lexsort((-eigvals, np.abs(eigvals - 1.0)))[0])
    rest = np.delete(np.arange(eigvals.size), unit_idx)
    second_idx = int(rest[np.argmax(eigvals[rest])])
    lam2 = float(eigvals[second_idx])
    if lam2 <= 0.0:
        raise ValidationError(
            f"second eigenvalue {lam2!r} is not positive; square the channel first"
        )

    x = unvec(eigvecs[:, second_idx], n)
    degenerate = abs(float(eigvals[unit_idx]) - lam2) <= 1e-10
    if degenerate:
        x = x - (np.trace(x) / n) * np.eye(n)
        if hs_norm(x) < 1e-12:
            raise NumericalError("second eigenvector is the identity direction")
    trace_residual = abs(complex(np.trace(x))) / hs_norm(x)
    if trace_residual > TRACE_RESIDUAL_TOL:
        raise NumericalError(f"second eigenvector trace residual {trace_residual:.3e}")

    herm = (x + x.conj().T) / 2.0
    anti = (x - x.conj().T) / (2.0j)
    part = herm if hs_norm(herm) >= hs_norm(anti) else anti
    norm = hs_norm(part)
    if norm < 1e-12:
        raise NumericalError("second eigenvector has no Hermitian content")
    xh = part / norm

    evals, evecs = np.linalg.eigh(xh)
    order = np.argsort(-evals)
    evals, evecs = evals[order], evecs[:, order]
    m = int(np.sum(evals > 0.0))
    if m > n / 2:
        evals, evecs = -evals[::-1], evecs[:, ::-1]
        m = int(np.sum(evals > 0.0))
    if m == 0:
        raise NumericalError("traceless eigenvector with no positive part")

    top = evals[:m]
    f = top / math.sqrt(float(np.sum(top * top)))
    ratios = np.empty(m)
    proj = np.zeros((n, n), dtype=complex)
    for i in range(m):
        col = evecs[:, i : i + 1]
        proj = proj + col @ col.conj().T
        image = apply(channel, proj)
        ratios[i] = float(np.trace((np.eye(n) - proj) @ image).real)
    weights = f * f - np.append(f[1:] * f[1:], 0.0)
    lhs = float(np.sum(weights * ratios))
    rhs = math.sqrt(max(0.0, 2.0 * (1.0 - lam2)))
    return ChainReport(
        lambda2=lam2,
        f_values=f,
        ratios=ratios,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs + SLACK_TOL,
        trace_residual=trace_residual,
    )
