"""Exact word combinatorics on the D-letter alphabet with inverse pairing.

Letters are integers 1..D; letter s and s + D/2 (indices wrapping mod D)
are mutually inverse, so D must be even wherever inverses matter. Index
sequences are walks on the tree with D branches at the root and D - 1 at
every other node; N(l, m) counts length-m sequences whose free reduction
has length l. Everything here is exact integer arithmetic: D^m overflows
64 bits near m = 32 for D = 4, and the spectral lower bound needs exact
ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import ValidationError

MAX_WALK_LENGTH = 64


def inverse_letter(s: int, D: int) -> int:
    return (s - 1 + D // 2) % D + 1


def _check_alphabet(D: int, letters) -> None:
    if D < 2 or D % 2 != 0:
        raise ValidationError(f"inverse pairing needs even D >= 2, got D={D}")
    for s in letters:
        if not 1 <= s <= D:
            raise ValidationError(f"letter {s} out of range 1..{D}")


def reduce_word(D: int, letters) -> tuple[int, ...]:
    """Free reduction: repeatedly delete adjacent inverse pairs.

    Single left-to-right stack pass; the result has no adjacent inverse
    pair and its length has the parity of the input length. This is the
    linear (open-word) reduction; trace words are reduced cyclically by
    the symbolic engine instead.
    """
    seq = tuple(letters)
    _check_alphabet(D, seq)
    stack: list[int] = []
    for s in seq:
        if stack and stack[-1] == inverse_letter(s, D):
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


@dataclass(frozen=True)
class WalkTable:
    """Exact counts N(l, m) for 0 <= m <= m_max."""

    D: int
    m_max: int
    counts: dict[tuple[int, int], int]

    def count(self, l: int, m: int) -> int:
        if m < 0 or m > self.m_max:
            raise ValidationError(f"m={m} outside tabulated range 0..{self.m_max}")
        return self.counts.get((l, m), 0)


def walk_counts(D: int, m_max: int) -> WalkTable:
    """Dynamic program over reduced length l:

    N(l, m+1) = N(l-1, m) * (D-1 if l-1 > 0 else D) + N(l+1, m), N(0, 0) = 1.

    Sequences are counted by where their reduction ends on the tree, so
    row m sums to D^m exactly.
    """
    if D < 2:
        raise ValidationError(f"need D >= 2, got D={D}")
    if not 0 <= m_max <= MAX_WALK_LENGTH:
        raise ValidationError(f"m_max must lie in 0..{MAX_WALK_LENGTH}, got {m_max}")
    counts: dict[tuple[int, int], int] = {(0, 0): 1}
    row = {0: 1}
    for m in range(m_max):
        nxt: dict[int, int] = {}
        for l, c in row.items():
            # step away from the root: D choices at the root, D-1 elsewhere
            away = c * (D if l == 0 else D - 1)
            nxt[l + 1] = nxt.get(l + 1, 0) + away
            if l > 0:
                nxt[l - 1] = nxt.get(l - 1, 0) + c
        row = nxt
        for l, c in row.items():
            counts[(l, m + 1)] = c
    return WalkTable(D=D, m_max=m_max, counts=counts)


def return_count_upper_bound(D: int, m: int) -> int:
    """(D-1)^(m/2) * m! / ((m/2)!)^2, an upper bound on N(0, m) for even m."""
    if m % 2 != 0 or m < 0:
        raise ValidationError(f"bound defined for even m >= 0, got {m}")
    half = m // 2
    return (D - 1) ** half * math.factorial(m) // (math.factorial(half) ** 2)


class AlonBoppanaBound(NamedTuple):
    value: float
    attained_m: int | None  # None when no moment order qualifies


def alon_boppana_lower_bound(N: int, D: int, m_max: int = 20) -> AlonBoppanaBound:
    """Lower bound on |lambda2| for every Hermitian weighted-unitary channel.

    For even m, the m-step return weight of the map is at least the tree
    return probability N(0, m)/D^m, and N^2 times it is at most
    1 + N^2 |lambda2|^m; maximizing over even m <= m_max with
    N^2 N(0, m)/D^m > 1 gives the bound. Ratios are exact Fractions until
    the final real root.
    """
    if D % 2 != 0 or D < 4:
        raise ValidationError(f"need even D >= 4, got D={D}")
    if m_max % 2 != 0 or m_max < 2:
        raise ValidationError(f"need even m_max >= 2, got m_max={m_max}")
    if N < 1:
        raise ValidationError(f"need N >= 1, got N={N}")
    table = walk_counts(D, m_max)
    best = 0.0
    best_m: int | None = None
    for m in range(2, m_max + 1, 2):
        weight = Fraction(N * N * table.count(0, m), D**m)
        if weight <= 1:
            continue
        value = float(Fraction(weight - 1, N * N)) ** (1.0 / m)
        if value > best:
            best = value
            best_m = m
    return AlonBoppanaBound(value=best, attained_m=best_m)


def shift_symmetry_period(letters) -> int:
    """Largest o dividing len(w) with w invariant under cyclic shift by len/o.

    Input must be nonempty and freely reduced; o = 1 means no nontrivial
    symmetry.
    """
    w = tuple(letters)
    if not w:
        raise ValidationError("shift symmetry of the empty word is undefined")
    n = len(w)
    for o in range(n, 0, -1):
        if n % o != 0:
            continue
        k = n // o
        if w == w[k:] + w[:k]:
            return o
    return 1
