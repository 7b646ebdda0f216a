"""Monte-Carlo oracle: estimate trace-product expectations by direct sampling.

Independent of the symbolic engine on purpose; the tests require both
routes to agree. Unitaries are sampled in stacked batches (one QR per
chunk per generator) and words are evaluated with batched matmuls.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import NumericalError, ValidationError
from ..matrixcore import SeededRng, haar_unitaries
from .words import ExpectationQuery

_CHUNK = 2048


def _batched_adjoint(u: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(u, -1, -2))


def _trace_product(stacks: dict[int, np.ndarray], query: ExpectationQuery) -> np.ndarray:
    chunk = next(iter(stacks.values())).shape[0]
    values = np.ones(chunk, dtype=complex)
    for word in query.traces:
        prod = None
        for s in word:
            mat = stacks[s] if s > 0 else _batched_adjoint(stacks[-s])
            prod = mat if prod is None else prod @ mat
        values *= np.einsum("kii->k", prod)
    return values


def monte_carlo_expectation(
    query: ExpectationQuery, N: int, samples: int, rng: SeededRng
) -> tuple[float, float]:
    """(mean, stderr) of the real part over independent Haar samples.

    The imaginary part must be statistically zero (its mean within 5
    standard errors); a violation points at a broken sampler or query and
    raises rather than returning silently.
    """
    if samples < 100:
        raise ValidationError(f"need at least 100 samples, got {samples}")
    if N < 1:
        raise ValidationError(f"need N >= 1, got N={N}")
    if query.is_empty:
        return 1.0, 0.0

    gens = sorted({abs(s) for t in query.traces for s in t})
    vals = np.empty(samples, dtype=complex)
    done = 0
    while done < samples:
        chunk = min(_CHUNK, samples - done)
        stacks = {g: haar_unitaries(N, chunk, rng) for g in gens}
        vals[done : done + chunk] = _trace_product(stacks, query)
        done += chunk

    mean_re = float(vals.real.mean())
    stderr_re = float(vals.real.std(ddof=1) / math.sqrt(samples))
    mean_im = float(vals.imag.mean())
    stderr_im = float(vals.imag.std(ddof=1) / math.sqrt(samples))
    if abs(mean_im) > 5.0 * stderr_im + 1e-12:
        raise NumericalError(
            f"imaginary part {mean_im:.3e} is {abs(mean_im) / max(stderr_im, 1e-300):.1f} "
            "standard errors from zero"
        )
    return mean_re, stderr_re
