"""Moment indices on the torus: symmetries, canonical forms, truncated enumeration.

A moment of a measure on time x Fourier-coefficient space is addressed by a
time exponent ``ell`` and a multiset of signed mode numbers ``(n_1, ..., n_k)``.
Moments are invariant under permutation of the modes and go to their complex
conjugate under global sign flip of the modes, so each moment has a canonical
representative.  Truncations are controlled by three degrees: time (max ell),
algebraic (max k) and harmonic (max |n_j|).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

Frequency = int  # signed Fourier mode number


@dataclass(frozen=True, slots=True)
class MomentIndex:
    """Address of one complex moment: time degree ell plus a mode multiset.

    ``freqs`` is normalized to a sorted tuple so that equal multisets compare
    and hash equal.  ``freqs = ()`` is legal and denotes the pure-time moment.
    """

    time_degree: int
    freqs: tuple[Frequency, ...] = ()

    def __post_init__(self) -> None:
        if self.time_degree < 0:
            raise ValueError(f"time_degree must be nonnegative, got {self.time_degree}")
        freqs = tuple(self.freqs)
        if any(freqs[i] > freqs[i + 1] for i in range(len(freqs) - 1)):
            freqs = tuple(sorted(freqs))
        object.__setattr__(self, "freqs", freqs)

    @property
    def algebraic_degree(self) -> int:
        return len(self.freqs)

    @property
    def harmonic_degree(self) -> int:
        return max((abs(n) for n in self.freqs), default=0)

    def negated(self) -> "MomentIndex":
        """Index of the complex-conjugate moment (all mode signs flipped)."""
        return MomentIndex(self.time_degree, tuple(-n for n in self.freqs))

    def __str__(self) -> str:
        return f"y[{self.time_degree};{','.join(map(str, self.freqs))}]"


@dataclass(frozen=True, slots=True)
class CanonicalIndex:
    """Canonical representative of a conjugate pair of moment indices.

    ``conjugated`` is True when the queried index is the sign-flipped image of
    the stored representative, i.e. its value is the conjugate of the stored
    moment.  Self-conjugate multisets always carry ``conjugated = False``.
    """

    index: MomentIndex
    conjugated: bool


def canonicalize(idx: MomentIndex) -> CanonicalIndex:
    """Resolve permutation and conjugation symmetry to a unique representative.

    The representative is the lexicographically smaller of the sorted multiset
    and its sorted negation.
    """
    neg = tuple(sorted(-n for n in idx.freqs))
    if neg < idx.freqs:
        return CanonicalIndex(MomentIndex(idx.time_degree, neg), True)
    return CanonicalIndex(idx, False)


def is_canonical(idx: MomentIndex) -> bool:
    return not canonicalize(idx).conjugated


def is_self_conjugate(idx: MomentIndex) -> bool:
    """True when the multiset is invariant under negation (moment forced real)."""
    return tuple(sorted(-n for n in idx.freqs)) == idx.freqs


@dataclass(frozen=True, slots=True)
class TruncationDegrees:
    """Truncation triple (time, algebraic, harmonic).

    Time and algebraic degrees must be even so that the half-degree matrix
    bases are well defined.
    """

    time: int
    algebraic: int
    harmonic: int

    def __post_init__(self) -> None:
        for name in ("time", "algebraic", "harmonic"):
            v = getattr(self, name)
            if v < 0:
                raise ValueError(f"{name} degree must be nonnegative, got {v}")
        if self.time % 2 or self.algebraic % 2:
            raise ValueError(
                f"time and algebraic degrees must be even, got "
                f"({self.time}, {self.algebraic})"
            )

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.time, self.algebraic, self.harmonic)


@dataclass(frozen=True, slots=True)
class BasisMonomial:
    """Row/column label of a moment matrix: t^half_degree times a mode multiset."""

    time_half_degree: int
    freqs: tuple[Frequency, ...] = ()

    def __post_init__(self) -> None:
        if self.time_half_degree < 0:
            raise ValueError("time_half_degree must be nonnegative")
        freqs = tuple(self.freqs)
        if any(freqs[i] > freqs[i + 1] for i in range(len(freqs) - 1)):
            freqs = tuple(sorted(freqs))
        object.__setattr__(self, "freqs", freqs)


def _mode_multisets(max_len: int, harmonic: int):
    alphabet = range(-harmonic, harmonic + 1)
    for k in range(max_len + 1):
        yield from itertools.combinations_with_replacement(alphabet, k)


def enumerate_moment_vector(deg: TruncationDegrees) -> list[MomentIndex]:
    """All moment indices inside the truncation, one per mode multiset.

    Conjugate pairs are both listed (the counts reported for the truncation
    sizes do not deduplicate them).  Order is lexicographic in (ell, k,
    multiset) and deterministic across runs.
    """
    return [
        MomentIndex(ell, freqs)
        for ell in range(deg.time + 1)
        for freqs in _mode_multisets(deg.algebraic, deg.harmonic)
    ]


def count_moment_vector(deg: TruncationDegrees) -> int:
    """Closed-form cardinality of ``enumerate_moment_vector`` (exact integers)."""
    per_ell = sum(
        math.comb(2 * deg.harmonic + k, k) for k in range(deg.algebraic + 1)
    )
    return (deg.time + 1) * per_ell


def basis_monomials(
    max_time_half: int, max_alg_half: int, harmonic: int
) -> list[BasisMonomial]:
    """Monomial basis with explicit caps; building block for the matrix bases."""
    if max_time_half < 0:
        return []
    return [
        BasisMonomial(th, freqs)
        for th in range(max_time_half + 1)
        for freqs in _mode_multisets(max_alg_half, harmonic)
    ]


def enumerate_matrix_basis(deg: TruncationDegrees) -> list[BasisMonomial]:
    """Row/column basis of the full moment matrix.

    Time and algebraic degrees are halved (so products of two monomials stay
    inside the moment-vector truncation) while the harmonic degree is kept
    whole; this is the scheme whose sizes match the reported truncation table.
    """
    return basis_monomials(deg.time // 2, deg.algebraic // 2, deg.harmonic)


def count_matrix_basis(deg: TruncationDegrees) -> int:
    per_t = sum(
        math.comb(2 * deg.harmonic + k, k) for k in range(deg.algebraic // 2 + 1)
    )
    return (deg.time // 2 + 1) * per_t


def entry_index(row: BasisMonomial, col: BasisMonomial) -> MomentIndex:
    """Moment index of a matrix entry: row monomial times conjugated column."""
    return MomentIndex(
        row.time_half_degree + col.time_half_degree,
        row.freqs + tuple(-n for n in col.freqs),
    )


def canonical_indices(deg: TruncationDegrees) -> list[MomentIndex]:
    """Canonical representatives of the truncated moment vector, in order."""
    return [idx for idx in enumerate_moment_vector(deg) if is_canonical(idx)]
