"""Residue classes mod 2^k whose generic members do not shrink in k steps.

After j iterations the class r mod 2^j maps affinely with numerator
coefficient 3^o (o = odd steps taken).  A class shrinks generically
exactly when 3^o < 2^j, so a class "survives" level k when the
coefficient test 3^o >= 2^j holds for every prefix j <= k.  The
survivor counts form OEIS A076227.

Levels are grown incrementally: each level-k survivor r has exactly two
lifts r and r + 2^k mod 2^(k+1), and only the one new prefix condition
at step k+1 needs testing.  Carrying the exact iterate T^(k)(r) makes
the parity decision for that step trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Tuple

K_MAX_DEFAULT = 30

#: Abort threshold on states held for one level (k=30 needs ~12.8M).
MAX_STATES_DEFAULT = 20_000_000


class SieveResourceError(RuntimeError):
    """Raised when a sieve run would exceed its configured limits."""


@dataclass(frozen=True)
class SurvivorState:
    """One surviving residue class with its trajectory bookkeeping."""

    residue: int
    odd_count: int
    iterate: int  # exact value of T^(k)(residue) at the state's level


@dataclass(frozen=True)
class SieveLevel:
    k: int
    survivors: List[SurvivorState]


def survives(r: int, k: int) -> bool:
    """Coefficient test on every prefix, computed directly from scratch.

    Only r mod 2^k matters; larger r is reduced (survival is a property
    of the class, and the walk itself only reads r mod 2^k anyway).
    """
    if r < 0 or k < 0:
        raise ValueError("residue and level must be nonnegative")
    v = r & ((1 << k) - 1)
    pow3 = 1
    for j in range(1, k + 1):
        if v & 1:
            v = (3 * v + 1) >> 1
            pow3 *= 3
        else:
            v >>= 1
        if pow3 < (1 << j):
            return False
    return True


def iter_levels(
    k_max: int, max_states: int = MAX_STATES_DEFAULT
) -> Iterator[SieveLevel]:
    """Yield levels 1..k_max, each built from the previous by lifting.

    Survivors are emitted sorted ascending by residue.  Raises
    SieveResourceError before a level that could exceed max_states.
    """
    if not 1 <= k_max <= K_MAX_DEFAULT:
        raise ValueError(f"k_max must be in [1, {K_MAX_DEFAULT}], got {k_max}")
    pow3 = [3**i for i in range(k_max + 2)]
    # level 1: only r=1 survives (odd step, 3 >= 2); r=0 halves at once
    survivors = [SurvivorState(1, 1, 2)]
    yield SieveLevel(1, survivors)
    for k in range(1, k_max):
        if 2 * len(survivors) > max_states:
            raise SieveResourceError(
                f"level {k + 1} could need {2 * len(survivors)} states, "
                f"above the limit of {max_states}"
            )
        bit = 1 << k
        threshold = 1 << (k + 1)
        low: List[SurvivorState] = []
        high: List[SurvivorState] = []
        for s in survivors:
            a = pow3[s.odd_count]
            # lift r: same iterate; lift r + 2^k: iterate shifted by the
            # coefficient, since T^(k) is affine with numerator a
            for out, r, v in ((low, s.residue, s.iterate),
                              (high, s.residue + bit, s.iterate + a)):
                if v & 1:
                    if pow3[s.odd_count + 1] >= threshold:
                        out.append(
                            SurvivorState(r, s.odd_count + 1, (3 * v + 1) >> 1)
                        )
                elif a >= threshold:
                    out.append(SurvivorState(r, s.odd_count, v >> 1))
        # every low residue is below 2^k, every high one above: the
        # concatenation stays sorted
        survivors = low + high
        yield SieveLevel(k + 1, survivors)


def sieve_level(k: int, max_states: int = MAX_STATES_DEFAULT) -> SieveLevel:
    """The full survivor list at level k."""
    level = None
    for level in iter_levels(k, max_states):
        pass
    assert level is not None
    return level


def sieve_counts(
    k_max: int, max_states: int = MAX_STATES_DEFAULT
) -> List[Tuple[int, int]]:
    """(k, survivor count) for k = 1..k_max; levels are discarded as counted."""
    return [(lv.k, len(lv.survivors)) for lv in iter_levels(k_max, max_states)]


def brute_force_residues(k: int) -> List[int]:
    """Independent cross-check: filter all residues below 2^k directly."""
    return [r for r in range(1 << k) if survives(r, k)]
