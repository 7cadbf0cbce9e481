"""Schur subsets of Walsh-Hadamard rows.

Three rows ``a, b, c`` of ``W_nu`` multiply entrywise to the all-plus row
exactly when ``a ^ b ^ c == 0``, i.e. when they form a line of PG(nu-1, 2).
Multi-axis schedules need pairwise disjoint lines (a partial spread), one per
color.  Maximum sizes are ``(2**nu - 1) // 3`` for even ``nu`` and
``(2**nu - 5) // 3`` for odd ``nu``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InputError

__all__ = [
    "SchurPartition",
    "max_triples",
    "partition_even",
    "partition_odd",
    "partition",
    "verify_partition",
    "nu_multi_axis",
    "depth_multi_axis",
]


def max_triples(nu: int) -> int:
    if nu < 2:
        return 0
    if nu % 2 == 0:
        return ((1 << nu) - 1) // 3
    return ((1 << nu) - 5) // 3


@dataclass(frozen=True)
class SchurPartition:
    nu: int
    triples: tuple[tuple[int, int, int], ...]

    def __init__(self, nu: int, triples: Iterable[Sequence[int]]):
        canon = []
        for t in triples:
            t = tuple(sorted(int(x) for x in t))
            if len(t) != 3:
                raise InputError(f"Schur subset {t} does not have three rows")
            canon.append(t)
        object.__setattr__(self, "nu", int(nu))
        object.__setattr__(self, "triples", tuple(canon))

    def __len__(self) -> int:
        return len(self.triples)

    @property
    def uncovered(self) -> tuple[int, ...]:
        used = {x for t in self.triples for x in t}
        return tuple(x for x in range(1, 1 << self.nu) if x not in used)

    def to_dict(self) -> dict:
        return {"nu": self.nu, "triples": [list(t) for t in self.triples]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "SchurPartition":
        try:
            return cls(data["nu"], data["triples"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"partition object needs keys 'nu' and 'triples': {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _gf4_times_omega(x: int, nu: int) -> int:
    # bit pairs 01 -> 1, 10 -> w, 11 -> w^2; multiplication by w cycles 1 -> 2 -> 3 -> 1
    step = (0, 2, 3, 1)
    out = 0
    for k in range(0, nu, 2):
        out |= step[(x >> k) & 3] << k
    return out


def partition_even(nu: int) -> SchurPartition:
    """Full spread of ``W_nu`` (even ``nu``) from the GF(4) structure on bit pairs.

    Each orbit ``{x, w x, w^2 x}`` XORs to zero because ``1 + w + w^2 = 0``.
    """
    if nu < 2 or nu % 2:
        raise InputError(f"partition_even needs an even nu >= 2, got {nu}")
    seen: set[int] = set()
    triples = []
    for x in range(1, 1 << nu):
        if x in seen:
            continue
        y = _gf4_times_omega(x, nu)
        z = _gf4_times_omega(y, nu)
        seen.update((x, y, z))
        triples.append((x, y, z))
    return SchurPartition(nu, sorted(tuple(sorted(t)) for t in triples))


def _gf2_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def _irreducible(m: int) -> int:
    for p in range((1 << m) | 1, 1 << (m + 1), 2):
        if all(_gf2_mod(p, q) for q in range(2, 1 << (m // 2 + 1))):
            return p
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def _construct_odd(nu: int) -> list[tuple[int, int, int]]:
    # Lift a maximum partial spread of nu-2 bits by two leading bits: points whose
    # leading pair is nonzero split into lines (u|01, xu|10, (1+x)u|11), with
    # multiplication by x in GF(2^(nu-2)) keeping both u->xu and u->(1+x)u bijective.
    triples = [(1, 2, 3)]
    for m in range(3, nu - 1, 2):
        poly = _irreducible(m)
        for u in range(1 << m):
            xu = u << 1
            if xu >> m:
                xu ^= poly
            triples.append((u | 1 << m, xu | 2 << m, (u ^ xu) | 3 << m))
    return triples


def _search_odd(nu: int, time_limit: float) -> list[tuple[int, int, int]]:
    n_points = (1 << nu) - 1
    target = max_triples(nu)
    slack = n_points - 3 * target
    deadline = time.monotonic() + time_limit
    covered = 0
    for x in (1, 2, 3):
        covered |= 1 << x
    chosen: list[tuple[int, int, int]] = [(1, 2, 3)]
    skipped = 0

    def options(p: int) -> list[int]:
        return [
            q for q in range(1, n_points + 1)
            if q != p and not covered >> q & 1 and not covered >> (p ^ q) & 1 and q < (p ^ q)
        ]

    def solve() -> bool:
        nonlocal covered, skipped
        if len(chosen) == target:
            return True
        if time.monotonic() > deadline:
            raise TimeoutError
        free = [p for p in range(1, n_points + 1) if not covered >> p & 1]
        best, best_opts = None, None
        for p in free:
            opts = options(p)
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = p, opts
                if len(opts) <= 1:
                    break
        for q in best_opts:
            r = best ^ q
            covered |= (1 << best) | (1 << q) | (1 << r)
            chosen.append(tuple(sorted((best, q, r))))
            if solve():
                return True
            chosen.pop()
            covered &= ~((1 << best) | (1 << q) | (1 << r))
        if skipped < slack:
            skipped += 1
            covered |= 1 << best
            if solve():
                return True
            covered &= ~(1 << best)
            skipped -= 1
        return False

    if not solve():
        raise AssertionError(f"no partial spread of size {target} found for nu={nu}")
    return chosen


def partition_odd(nu: int, method: str = "auto", time_limit: float = 60.0) -> SchurPartition:
    """Maximum partial spread for odd ``nu``; four nonzero rows stay uncovered.

    ``method="search"`` runs a most-constrained-first backtracking search
    seeded with ``{1, 2, 3}``; ``method="construct"`` is the two-bit lifting
    above.  ``"auto"`` searches up to ``nu = 9`` (a few seconds) and constructs
    beyond that.
    """
    if nu < 3 or nu % 2 == 0:
        raise InputError(f"partition_odd needs an odd nu >= 3, got {nu}")
    if method == "auto":
        method = "search" if nu <= 9 else "construct"
    if method == "construct":
        triples = _construct_odd(nu)
    elif method == "search":
        try:
            triples = _search_odd(nu, time_limit)
        except TimeoutError:
            raise InputError(f"backtracking search for nu={nu} exceeded {time_limit}s") from None
    else:
        raise InputError(f"unknown method {method!r}")
    return SchurPartition(nu, sorted(tuple(sorted(t)) for t in triples))


def partition(nu: int) -> SchurPartition:
    return partition_even(nu) if nu % 2 == 0 else partition_odd(nu)


def verify_partition(p: SchurPartition) -> bool:
    n = 1 << p.nu
    seen: set[int] = set()
    for a, b, c in p.triples:
        if len({a, b, c}) != 3 or a ^ b ^ c:
            return False
        if not all(0 < x < n for x in (a, b, c)):
            return False
        if seen & {a, b, c}:
            return False
        seen.update((a, b, c))
    return len(p.triples) == max_triples(p.nu)


def nu_multi_axis(chi: int) -> int:
    """Smallest ``nu`` whose maximum partial spread has at least ``chi`` lines."""
    if chi < 1:
        raise InputError(f"chromatic number must be positive, got {chi}")
    even = 2
    while max_triples(even) < chi:
        even += 2
    odd = 3
    while max_triples(odd) < chi:
        odd += 2
    return min(even, odd)


def depth_multi_axis(chi: int) -> int:
    return 1 << nu_multi_axis(chi)
