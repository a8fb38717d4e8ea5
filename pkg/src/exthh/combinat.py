"""Subsets and multisets of {1..n} with Koszul sign bookkeeping.

Subsets index the basis of an exterior algebra, multisets index the
generators of its small free resolution.  Signs are transposition counts
for moving a single generator across a sorted monomial, so they reduce to
popcounts on the subset bitmask.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Optional


class Subset:
    """A subset of {1..n}, stored both as a bitmask and a sorted tuple.

    Bit i-1 of ``mask`` is set iff i is a member.  Instances are immutable
    and hashable; ordering is lexicographic on the element tuple.
    """

    __slots__ = ("mask", "elems")

    def __init__(self, elems: Iterable[int] = ()):
        es = tuple(sorted(set(elems)))
        if es and es[0] < 1:
            raise ValueError(f"subset elements must be >= 1, got {es}")
        object.__setattr__(self, "elems", es)
        m = 0
        for i in es:
            m |= 1 << (i - 1)
        object.__setattr__(self, "mask", m)

    @classmethod
    def from_mask(cls, mask: int) -> "Subset":
        s = object.__new__(cls)
        object.__setattr__(s, "mask", mask)
        elems = []
        i = 1
        m = mask
        while m:
            if m & 1:
                elems.append(i)
            m >>= 1
            i += 1
        object.__setattr__(s, "elems", tuple(elems))
        return s

    def __setattr__(self, *args):
        raise AttributeError("Subset is immutable")

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> (i - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subset) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __lt__(self, other: "Subset") -> bool:
        return self.elems < other.elems

    def __repr__(self) -> str:
        return f"Subset({list(self.elems)})"

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elems)) + "}"

    def union(self, other: "Subset") -> "Subset":
        return Subset.from_mask(self.mask | other.mask)

    def intersects(self, other: "Subset") -> bool:
        return bool(self.mask & other.mask)

    def with_element(self, i: int) -> "Subset":
        return Subset.from_mask(self.mask | 1 << (i - 1))

    def without_element(self, i: int) -> "Subset":
        return Subset.from_mask(self.mask & ~(1 << (i - 1)))

    def count_below(self, i: int) -> int:
        """Number of members strictly smaller than i."""
        return (self.mask & ((1 << (i - 1)) - 1)).bit_count()

    def count_above(self, i: int) -> int:
        """Number of members strictly greater than i."""
        return (self.mask >> i).bit_count()


EMPTY_SUBSET = Subset()


def full_subset(n: int) -> Subset:
    return Subset.from_mask((1 << n) - 1)


def all_subsets(n: int) -> list[Subset]:
    """All subsets of {1..n}, ordered lexicographically by element tuple."""
    return sorted(Subset.from_mask(m) for m in range(1 << n))


class Multiset:
    """A multiset over {1..n}, stored as a weakly increasing tuple."""

    __slots__ = ("elems",)

    def __init__(self, elems: Iterable[int] = ()):
        es = tuple(sorted(elems))
        if es and es[0] < 1:
            raise ValueError(f"multiset elements must be >= 1, got {es}")
        object.__setattr__(self, "elems", es)

    def __setattr__(self, *args):
        raise AttributeError("Multiset is immutable")

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elems)

    def __eq__(self, other) -> bool:
        return isinstance(other, Multiset) and self.elems == other.elems

    def __hash__(self) -> int:
        return hash(self.elems)

    def __lt__(self, other: "Multiset") -> bool:
        return self.elems < other.elems

    def __repr__(self) -> str:
        return f"Multiset({list(self.elems)})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.elems)) + ")"

    @property
    def support(self) -> tuple[int, ...]:
        """The distinct elements, increasing."""
        return tuple(dict.fromkeys(self.elems))

    def count(self, i: int) -> int:
        return self.elems.count(i)

    def remove_one(self, i: int) -> "Multiset":
        if i not in self.elems:
            raise ValueError(f"{i} not in {self}")
        es = list(self.elems)
        es.remove(i)
        m = object.__new__(Multiset)
        object.__setattr__(m, "elems", tuple(es))
        return m

    def add_one(self, i: int) -> "Multiset":
        return Multiset(self.elems + (i,))

    def union(self, other: "Multiset") -> "Multiset":
        return Multiset(self.elems + other.elems)


def left_mul_sign(i: int, sigma: Subset) -> Optional[tuple[int, Subset]]:
    """Sign and result of multiplying a single generator on the left.

    Returns (sign, union) where sign counts the transpositions needed to
    move the new factor into sorted position past the smaller members of
    ``sigma``; None when i is already a member (the product is zero).
    """
    if i in sigma:
        return None
    sign = -1 if sigma.count_below(i) & 1 else 1
    return sign, sigma.with_element(i)


def right_mul_sign(i: int, sigma: Subset) -> Optional[tuple[int, Subset]]:
    """Like left_mul_sign but for multiplication on the right, so the new
    factor crosses the members greater than i."""
    if i in sigma:
        return None
    sign = -1 if sigma.count_above(i) & 1 else 1
    return sign, sigma.with_element(i)


def subset_mul_sign(a: Subset, b: Subset) -> Optional[tuple[int, Subset]]:
    """Sign and result of multiplying two sorted monomials.

    The sign is the parity of the number of transpositions sorting the
    concatenation of the two element sequences, i.e. the number of pairs
    (x in a, y in b) with x > y.  None when the subsets intersect.
    """
    if a.mask & b.mask:
        return None
    inv = 0
    for y in b.elems:
        inv += a.count_above(y)
    return (-1 if inv & 1 else 1), Subset.from_mask(a.mask | b.mask)


def enumerate_multisets(n: int, k: int) -> list[Multiset]:
    """All k-element multisets over {1..n}, lexicographically ordered."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [Multiset(c) for c in combinations_with_replacement(range(1, n + 1), k)]


def multiset_coefficient(n: int, k: int) -> int:
    """Number of k-element multisets over {1..n}: C(n+k-1, k)."""
    from math import comb

    return comb(n + k - 1, k)


def multiset_permutations(tau: Multiset) -> list[tuple[int, ...]]:
    """All distinct rearrangements of a multiset, lexicographically ordered."""

    def gen(pool: list[int]) -> Iterator[tuple[int, ...]]:
        if not pool:
            yield ()
            return
        seen = set()
        for idx, v in enumerate(pool):
            if v in seen:
                continue
            seen.add(v)
            rest = pool[:idx] + pool[idx + 1 :]
            for tail in gen(rest):
                yield (v,) + tail

    return list(gen(list(tau.elems)))
