"""Shared test utilities: independent oracles and random generators.

The oracles here deliberately avoid the package's own elimination paths:
signs come from bubble sorting, counts from recursions, minors from
cofactor expansion, and group orders from explicit coset enumeration.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from random import Random

from exthh.complexes import BasedComplex, CHAIN
from exthh.hochschild import (
    build_bar_hochschild_chain,
    build_bar_hochschild_cochain,
    build_reduced_chain,
    build_reduced_cochain,
)
from exthh.linalg import HomologyGroup, SparseMatrix, integer_kernel_basis, normalize_divisor_chain
from exthh.morse import Matching
from exthh.rings import ZZ, Domain


# ---------------------------------------------------------------------------
# brute-force oracles


def bubble_sort_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``, by counting swaps."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign


def count_multisets_recursive(n: int, k: int) -> int:
    """Number of k-element multisets over {1..n}, by direct recursion."""
    if k == 0:
        return 1
    if n == 0:
        return 0
    return count_multisets_recursive(n - 1, k) + count_multisets_recursive(n, k - 1)


def det_cofactor(rows: list[list[int]]) -> int:
    """Determinant by cofactor expansion (tiny matrices only)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def gcd_of_minors(rows: list[list[int]], size: int) -> int:
    """gcd of all size x size minors (0 when none are nonzero)."""
    from math import gcd

    m, n = len(rows), len(rows[0]) if rows else 0
    g = 0
    for ri in combinations(range(m), size):
        for ci in combinations(range(n), size):
            sub = [[rows[r][c] for c in ci] for r in ri]
            g = gcd(g, abs(det_cofactor(sub)))
    return g


def coset_count(beta: SparseMatrix, exponent: int) -> int:
    """Order of Z^m / Im(beta) by explicit coset enumeration.

    Requires a multiple of the group exponent; classes are connected
    components of the residue grid under adding the image columns.
    """
    m = beta.rows
    cols = beta.by_cols()
    gens = []
    for col in cols.values():
        vec = [0] * m
        for r, v in col.items():
            vec[r] = v % exponent
        gens.append(tuple(vec))
    points = list(product(range(exponent), repeat=m))
    parent = {p: p for p in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in points:
        for g in gens:
            q = tuple((a + b) % exponent for a, b in zip(p, g))
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[rp] = rq
    return len({find(p) for p in points})


# ---------------------------------------------------------------------------
# random exact pairs with known homology


def _apply_row_op(rows, op, rng: Random):
    m = len(rows)
    if m < 1:
        return
    kind = op % 3
    i = rng.randrange(m)
    if kind == 0:
        rows[i] = [-x for x in rows[i]]
    elif m >= 2:
        j = rng.randrange(m - 1)
        j = j + 1 if j >= i else j
        if kind == 1:
            rows[i], rows[j] = rows[j], rows[i]
        else:
            c = rng.choice((-2, -1, 1, 2))
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]


def _transpose(rows):
    return [list(r) for r in zip(*rows)] if rows else []


def random_exact_pair(rng: Random, max_dim: int = 5):
    """A random pair (alpha, beta) with alpha . beta = 0 and known
    homology, built from diagonal prototypes and unimodular scrambles.

    Returns (alpha, beta, expected_group, beta_divisors) where
    beta_divisors lists all invariant factors of beta including ones.
    """
    m = rng.randint(1, max_dim)
    r = rng.randint(0, m)
    s = rng.randint(0, m - r)
    l = max(r, rng.randint(0, max_dim))
    nn = max(s, rng.randint(0, max_dim))
    a_vals = [rng.choice((1, 1, 2, 3)) for _ in range(r)]
    b_vals = [rng.choice((1, 1, 2, 2, 3, 4)) for _ in range(s)]
    alpha_rows = [[0] * m for _ in range(l)]
    for i, v in enumerate(a_vals):
        alpha_rows[i][i] = v
    beta_rows = [[0] * nn for _ in range(m)]
    for i, v in enumerate(b_vals):
        beta_rows[r + i][i] = v
    for _ in range(4 * (l + m + nn)):
        which = rng.randrange(3)
        if which == 0 and l:
            _apply_row_op(alpha_rows, rng.randrange(3), rng)
        elif which == 1 and nn:
            cols = _transpose(beta_rows)
            _apply_row_op(cols, rng.randrange(3), rng)
            beta_rows = _transpose(cols)
        else:
            # coupled middle operation: columns of alpha, inverse rows of beta
            kind = rng.randrange(3)
            i = rng.randrange(m)
            if kind == 0:
                for row in alpha_rows:
                    row[i] = -row[i]
                beta_rows[i] = [-x for x in beta_rows[i]]
            elif m >= 2:
                j = rng.randrange(m - 1)
                j = j + 1 if j >= i else j
                if kind == 1:
                    for row in alpha_rows:
                        row[i], row[j] = row[j], row[i]
                    beta_rows[i], beta_rows[j] = beta_rows[j], beta_rows[i]
                else:
                    c = rng.choice((-2, -1, 1, 2))
                    for row in alpha_rows:
                        row[i] += c * row[j]
                    beta_rows[j] = [a - c * b for a, b in zip(beta_rows[j], beta_rows[i])]
    alpha = SparseMatrix.from_dense(alpha_rows) if l else SparseMatrix.zero(0, m)
    beta = SparseMatrix.from_dense(beta_rows) if nn else SparseMatrix.zero(m, 0)
    torsion = tuple(
        d for d in normalize_divisor_chain([d for d in b_vals if d > 1]) if d > 1
    )
    expected = HomologyGroup(m - r - s, torsion)
    return alpha, beta, expected, sorted(b_vals)


# ---------------------------------------------------------------------------
# random toy complexes and matchings


def random_three_term_complex(rng: Random, max_dim: int = 5) -> BasedComplex:
    """A random integer chain complex on three degrees with d.d = 0: the
    top differential is random, the bottom one is built from its left
    kernel."""
    m = rng.randint(1, max_dim)
    n2 = rng.randint(1, max_dim)
    entries = {}
    for r in range(m):
        for c in range(n2):
            if rng.random() < 0.5:
                entries[(r, c)] = rng.choice((-2, -1, 1, 1, 2))
    top = SparseMatrix(m, n2, entries, ZZ)
    left_kernel = integer_kernel_basis(top.transpose())
    l = rng.randint(1, max(1, len(left_kernel))) if left_kernel else 1
    bottom_entries = {}
    if left_kernel:
        for r in range(l):
            combo = [0] * m
            for vec in rng.sample(left_kernel, rng.randint(1, len(left_kernel))):
                c = rng.choice((-1, 1, 2))
                combo = [a + c * b for a, b in zip(combo, vec)]
            for i, v in enumerate(combo):
                if v:
                    bottom_entries[(r, i)] = v
    bottom = SparseMatrix(l, m, bottom_entries, ZZ)
    bases = {
        0: tuple(f"a{i}" for i in range(l)),
        1: tuple(f"b{i}" for i in range(m)),
        2: tuple(f"c{i}" for i in range(n2)),
    }
    return BasedComplex(ZZ, CHAIN, bases, {1: bottom, 2: top})


def random_matching(rng: Random, c: BasedComplex) -> Matching:
    """A random partial matching along unit entries, each label used once
    (acyclicity not guaranteed; filter through check_matching)."""
    used = set()
    edges = []
    candidates = []
    for k in sorted(c.diffs):
        mat = c.diffs[k]
        src, dst = c.basis(k), c.basis(k + c.direction)
        for (r, col), v in sorted(mat.entries.items()):
            if v in (1, -1):
                candidates.append((src[col], dst[r]))
    rng.shuffle(candidates)
    for u, v in candidates:
        if u in used or v in used or rng.random() < 0.3:
            continue
        used.update((u, v))
        edges.append((u, v))
    return Matching.of(edges)


# ---------------------------------------------------------------------------
# cached builders shared across test modules


@lru_cache(maxsize=None)
def oracle_chain(n: int, max_degree: int, ring: Domain = ZZ) -> BasedComplex:
    return build_bar_hochschild_chain(n, max_degree, ring)


@lru_cache(maxsize=None)
def oracle_cochain(n: int, max_degree: int, ring: Domain = ZZ) -> BasedComplex:
    return build_bar_hochschild_cochain(n, max_degree, ring)


@lru_cache(maxsize=None)
def small_chain(n: int, max_degree: int, ring: Domain = ZZ) -> BasedComplex:
    return build_reduced_chain(n, max_degree, ring)


@lru_cache(maxsize=None)
def small_cochain(n: int, max_degree: int, ring: Domain = ZZ) -> BasedComplex:
    return build_reduced_cochain(n, max_degree, ring)
