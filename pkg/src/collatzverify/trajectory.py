"""Verification that a start value reaches 1 under the shortcut Collatz map.

The driver repeatedly condenses about log2(n)/2 iterations into one
affine evaluation (a "hyperstep").  The plain single-step map and an
exact stopping-time routine are kept alongside as the testing oracle.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .affine import BaseTable, affine_eval, poly_fast
from .util import decimal_digits

#: log2(2/sqrt(3)); the average bit-length loss per T-iteration, so the
#: expected stopping time of n is about log2(n) / LOG2_SHRINK.
LOG2_SHRINK = 1.0 - 0.5 * math.log2(3.0)


class BudgetExceededError(RuntimeError):
    """Raised when a verification exceeds its iteration budget.

    Carries the current iterate for forensic inspection: a genuine
    divergent orbit would surface here, never as a silent failure.
    """

    def __init__(self, message: str, iterate: int, condensed_steps: int):
        super().__init__(message)
        self.iterate = iterate
        self.condensed_steps = condensed_steps


@dataclass(frozen=True)
class TrajectoryRecord:
    """Outcome of verifying one start value."""

    start_digits: int
    condensed_steps: int
    hypersteps: int
    reached_one: bool
    elapsed: float


def t_step(n: int) -> int:
    """One application of the shortcut map: n/2 if even, (3n+1)/2 if odd."""
    if n < 1:
        raise ValueError("t_step requires n >= 1")
    return (3 * n + 1) >> 1 if n & 1 else n >> 1


def default_budget(n: int) -> int:
    """Condensed-step budget: ~10x the expected stopping time of n."""
    expected = max(1.0, (n.bit_length() - 1) / LOG2_SHRINK)
    return max(64, math.ceil(10.0 * expected))


def exact_stopping_time(n: int, budget: Optional[int] = None) -> int:
    """Smallest s >= 0 with T^(s)(n) = 1, by literal iteration.

    This is the oracle the condensed driver is tested against; it shares
    no code with the hyperstep path beyond t_step itself.
    """
    if n < 1:
        raise ValueError("exact_stopping_time requires n >= 1")
    if budget is None:
        budget = default_budget(n)
    s = 0
    while n != 1:
        if s >= budget:
            raise BudgetExceededError(
                f"no 1 reached within {budget} iterations", n, s
            )
        n = t_step(n)
        s += 1
    return s


def step_policy(n: int) -> int:
    """Block size for the next hyperstep: max(1, floor(log2 n) // 2).

    Larger blocks make the condensed maps themselves expensive; smaller
    blocks multiply the number of large evaluations.
    """
    if n < 1:
        raise ValueError("step_policy requires n >= 1")
    return max(1, (n.bit_length() - 1) >> 1)


def hyperstep_verify(
    n: int,
    budget: Optional[int] = None,
    progress: Optional[Callable[[int, int, int], None]] = None,
    table: Optional[BaseTable] = None,
) -> TrajectoryRecord:
    """Verify that n reaches 1, condensing iterations into hypersteps.

    Each round picks a block size s from step_policy, builds the
    condensed map for the current iterate's class mod 2^s, and applies
    it.  Blocks may run through 1 and around the 1->2->1 cycle; the
    returned condensed_steps counts those terminal cycle steps too, so
    it can exceed the exact stopping time by at most one block.

    For n = 1 the loop never runs and condensed_steps is 0.

    progress, if given, is called once per hyperstep with
    (hypersteps_so_far, condensed_steps_so_far, current_bit_length).
    """
    if n < 1:
        raise ValueError("hyperstep_verify requires n >= 1")
    if budget is None:
        budget = default_budget(n)
    start = time.perf_counter()
    digits = decimal_digits(n)
    cnt = 0
    hyper = 0
    m = n
    while m != 1:
        s = step_policy(m)
        if cnt + s > budget:
            raise BudgetExceededError(
                f"condensed-step budget {budget} exhausted", m, cnt
            )
        p = poly_fast(m, s, table)
        m = affine_eval(p, m, check=False)
        cnt += s
        hyper += 1
        if progress is not None:
            progress(hyper, cnt, m.bit_length())
    return TrajectoryRecord(
        start_digits=digits,
        condensed_steps=cnt,
        hypersteps=hyper,
        reached_one=True,
        elapsed=time.perf_counter() - start,
    )
