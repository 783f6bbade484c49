"""Exact algebra of condensed Collatz maps of the shape (a*X + b) / 2^c.

Every c consecutive applications of the shortcut Collatz map T restricted
to a residue class r mod 2^c collapse into a single affine map with a
power-of-two denominator.  This module represents such maps as triples,
evaluates and composes them exactly, and builds them either directly
(one T-iteration at a time) or by binary splitting over a cached table
of shallow maps.

All values are plain Python ints; CPython's Karatsuba multiplication
keeps the large composes/evaluations subquadratic.
"""

from __future__ import annotations

from typing import NamedTuple

DEFAULT_CACHE_DEPTH = 8
MAX_CACHE_DEPTH = 16


class AffineStep(NamedTuple):
    """The map x -> (a*x + b) >> c, condensing c iterations of T.

    Invariants for maps arising from the construction: a = 3**o where o
    is the number of odd steps among the c iterations (0 <= o <= c), and
    0 <= b < a * 2**c.
    """

    a: int
    b: int
    c: int


IDENTITY = AffineStep(1, 0, 0)

#: One odd T-step: n -> (3n+1)/2.
ODD_STEP = AffineStep(3, 1, 1)


def affine_eval(p: AffineStep, x: int, check: bool = True) -> int:
    """Evaluate p at x, assuming the result is an integer.

    x must lie in a residue class mod 2^p.c for which p is the condensed
    map; equivalently p.a*x + p.b must be divisible by 2^p.c.  With
    check=True a violation raises ValueError; hot paths that guarantee
    the precondition pass check=False.
    """
    t = p.a * x + p.b
    if check and t & ((1 << p.c) - 1):
        raise ValueError(
            f"map {p!r} applied outside its residue class: "
            f"a*x+b not divisible by 2^{p.c}"
        )
    return t >> p.c


def affine_compose(p: AffineStep, q: AffineStep) -> AffineStep:
    """Return the composition p(q(X)) in triple representation."""
    return AffineStep(p.a * q.a, p.a * q.b + (p.b << q.c), p.c + q.c)


def poly_direct(r: int, k: int) -> AffineStep:
    """Construct the condensed map for the class r mod 2^k, one step at a time.

    Only r mod 2^k is relevant; larger r is reduced implicitly by the
    parity walk.  k = 0 gives the identity.
    """
    if k < 0:
        raise ValueError("iteration count must be nonnegative")
    pol = IDENTITY
    for _ in range(k):
        if r & 1:
            r = (3 * r + 1) >> 1
            pol = affine_compose(ODD_STEP, pol)
        else:
            r >>= 1
            pol = AffineStep(pol.a, pol.b, pol.c + 1)
    return pol


class BaseTable:
    """Cache of all condensed maps for k <= depth, indexed [k][r].

    Built once, then shared read-only.  Memory grows as 2^depth entries;
    the default depth of 8 keeps it at 510 maps.
    """

    __slots__ = ("depth", "levels")

    def __init__(self, depth: int = DEFAULT_CACHE_DEPTH):
        if not 1 <= depth <= MAX_CACHE_DEPTH:
            raise ValueError(
                f"cache depth must be in [1, {MAX_CACHE_DEPTH}], got {depth}"
            )
        self.depth = depth
        self.levels = [
            [poly_direct(r, k) for r in range(1 << k)] for k in range(depth + 1)
        ]

    def __len__(self) -> int:
        # entry count over k >= 1, matching 2^(depth+1) - 2
        return sum(len(lv) for lv in self.levels[1:])


def base_table_init(depth: int = DEFAULT_CACHE_DEPTH) -> BaseTable:
    """Build a fresh base table of the given depth."""
    return BaseTable(depth)


_default_table: BaseTable | None = None


def default_table() -> BaseTable:
    """The lazily built shared table at the default depth."""
    global _default_table
    if _default_table is None:
        _default_table = BaseTable(DEFAULT_CACHE_DEPTH)
    return _default_table


def poly_fast(r: int, k: int, table: BaseTable | None = None) -> AffineStep:
    """Construct the condensed map for r mod 2^k by binary splitting.

    Equal to poly_direct(r mod 2^k, k) but built recursively: split
    k = t1 + t2 with t1 = k//2, build the map for the low t1 iterations,
    push r through it to find the residue class governing the remaining
    t2 iterations, and compose.  Shallow maps come from the cache.

    r may be arbitrarily large (e.g. the full iterate during
    verification); it is reduced mod powers of two internally.
    """
    if k < 0:
        raise ValueError("iteration count must be nonnegative")
    tab = table if table is not None else default_table()
    if k <= tab.depth:
        return tab.levels[k][r & ((1 << k) - 1)]
    t1 = k >> 1
    t2 = k - t1
    p1 = poly_fast(r & ((1 << t1) - 1), t1, tab)
    # image of the residue r mod 2^k under the first t1 iterations;
    # divisibility is guaranteed because r mod 2^k = r mod 2^t1 (mod 2^t1)
    mid = affine_eval(p1, r & ((1 << k) - 1), check=False)
    p2 = poly_fast(mid & ((1 << t2) - 1), t2, tab)
    return affine_compose(p2, p1)
