"""Unital CPTP maps with weighted unitary Kraus factors.

A channel acts as E(M) = sum_s P(s) U(s)† M U(s) with probabilities P(s)
and unitaries U(s); the Kraus factors are A(s) = sqrt(P(s)) U(s). The
Hermitian variant pairs each unitary with its adjoint, U(s + D/2) = U(s)†
with P(s + D/2) = P(s), which makes the map self-adjoint under the
Hilbert-Schmidt inner product.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .matrixcore import (
    PAIRING_TOL,
    UNITARITY_TOL,
    WEIGHT_TOL,
    SeededRng,
    haar_unitary,
    unitarity_residual,
)


@dataclass(frozen=True, eq=False)
class Channel:
    """Immutable weighted unitary-Kraus channel.

    unitaries is a (D, N, N) complex array; weights a length-D probability
    vector. seed records the stream that built the channel (diagnostics
    only; not part of the serialized form).
    """

    dim: int
    kraus_count: int
    weights: np.ndarray
    unitaries: np.ndarray
    hermitian: bool
    seed: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ws = np.array(self.weights, dtype=float)
        us = np.array(self.unitaries, dtype=complex)
        ws.flags.writeable = False
        us.flags.writeable = False
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "unitaries", us)
        n, d = self.dim, self.kraus_count
        if n < 1:
            raise ValidationError(f"invalid dimension N={n}")
        if self.unitaries.shape != (d, n, n):
            raise ValidationError(
                f"unitaries shape {self.unitaries.shape} does not match (D,N,N)=({d},{n},{n})"
            )
        if self.weights.shape != (d,):
            raise ValidationError(f"weights shape {self.weights.shape} does not match D={d}")
        if not np.all(np.isfinite(self.weights)):
            raise ValidationError("weights must be finite")
        if not np.all(np.isfinite(self.unitaries.real)) or not np.all(
            np.isfinite(self.unitaries.imag)
        ):
            raise ValidationError("unitaries must be finite")
        if np.any(self.weights < 0):
            raise ValidationError("weights must be nonnegative")
        wsum = float(np.sum(self.weights))
        if abs(wsum - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"weights sum to {wsum!r}, not 1 within {WEIGHT_TOL:.1e}")
        for s in range(d):
            res = unitarity_residual(self.unitaries[s])
            if res > UNITARITY_TOL:
                raise ValidationError(f"Kraus factor {s} not unitary: residual {res:.3e}")
        if self.hermitian:
            if d % 2 != 0 or d < 4:
                raise ValidationError(f"hermitian channel needs even D >= 4, got D={d}")
            half = d // 2
            for s in range(half):
                pres = float(np.max(np.abs(self.unitaries[s + half] - self.unitaries[s].conj().T)))
                if pres > PAIRING_TOL:
                    raise ValidationError(
                        f"adjoint pairing violated at s={s}: max deviation {pres:.3e}"
                    )
                if abs(self.weights[s + half] - self.weights[s]) > WEIGHT_TOL:
                    raise ValidationError(f"weight pairing violated at s={s}")
        else:
            if d < 2:
                raise ValidationError(f"need D >= 2 Kraus terms, got D={d}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Channel):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.kraus_count == other.kraus_count
            and self.hermitian == other.hermitian
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.unitaries, other.unitaries)
        )


def build_hermitian_random(N: int, D: int, rng: SeededRng) -> Channel:
    """Uniform-weight Hermitian channel: D/2 Haar unitaries plus their adjoints."""
    if D % 2 != 0 or D < 4:
        raise ValidationError(f"hermitian construction needs even D >= 4, got D={D}")
    if N < 2:
        raise ValidationError(f"need N >= 2, got N={N}")
    half = D // 2
    us = np.empty((D, N, N), dtype=complex)
    for s in range(half):
        us[s] = haar_unitary(N, rng)
        us[s + half] = us[s].conj().T
    return Channel(
        dim=N,
        kraus_count=D,
        weights=np.full(D, 1.0 / D),
        unitaries=us,
        hermitian=True,
        seed=(rng.master_seed, rng.stream_index),
    )


def build_nonhermitian_random(N: int, D: int, rng: SeededRng) -> Channel:
    """Uniform-weight channel from D independent Haar unitaries."""
    if D < 2:
        raise ValidationError(f"need D >= 2 independent unitaries, got D={D}")
    if N < 2:
        raise ValidationError(f"need N >= 2, got N={N}")
    us = np.stack([haar_unitary(N, rng) for _ in range(D)])
    return Channel(
        dim=N,
        kraus_count=D,
        weights=np.full(D, 1.0 / D),
        unitaries=us,
        hermitian=False,
        seed=(rng.master_seed, rng.stream_index),
    )


def build_weighted(unitaries, weights, hermitian: bool) -> Channel:
    """Channel from explicit unitaries and probabilities P(s).

    Kraus factors are sqrt(P(s)) U(s); all Channel invariants (weight sum,
    adjoint pairing when hermitian) are enforced by the constructor.
    """
    us = np.asarray(unitaries, dtype=complex)
    ws = np.asarray(weights, dtype=float)
    if us.ndim != 3:
        raise ValidationError(f"unitaries must be a (D,N,N) stack, got shape {us.shape}")
    return Channel(
        dim=us.shape[1],
        kraus_count=us.shape[0],
        weights=ws,
        unitaries=us,
        hermitian=hermitian,
    )


def apply(channel: Channel, m: np.ndarray) -> np.ndarray:
    """E(M) = sum_s P(s) U(s)† M U(s), one triple product per Kraus term."""
    n = channel.dim
    if m.shape != (n, n):
        raise ValidationError(f"matrix shape {m.shape} does not match channel dimension {n}")
    out = np.zeros((n, n), dtype=complex)
    for s in range(channel.kraus_count):
        w = channel.weights[s]
        if w == 0.0:
            continue
        u = channel.unitaries[s]
        out += w * (u.conj().T @ m @ u)
    return out


# ---------------------------------------------------------------------------
# serialization: {dim, kraus_count, hermitian, weights[], unitaries[[re,im]]}
# json emits repr-exact floats, so the round trip is lossless.


def to_json_dict(channel: Channel) -> dict:
    return {
        "dim": channel.dim,
        "kraus_count": channel.kraus_count,
        "hermitian": channel.hermitian,
        "weights": [float(w) for w in channel.weights],
        "unitaries": [
            [[[float(z.real), float(z.imag)] for z in row] for row in u]
            for u in channel.unitaries
        ],
    }


def from_json_dict(doc: dict) -> Channel:
    try:
        us = np.array(
            [[[complex(re, im) for re, im in row] for row in u] for u in doc["unitaries"]],
            dtype=complex,
        )
        ws = np.array(doc["weights"], dtype=float)
        return Channel(
            dim=int(doc["dim"]),
            kraus_count=int(doc["kraus_count"]),
            weights=ws,
            unitaries=us,
            hermitian=bool(doc["hermitian"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed channel document: {exc}") from exc


def dumps(channel: Channel) -> str:
    return json.dumps(to_json_dict(channel))


def loads(text: str) -> Channel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid channel JSON: {exc}") from exc
    return from_json_dict(doc)
