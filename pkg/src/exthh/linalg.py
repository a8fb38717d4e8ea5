"""Exact sparse linear algebra over Z and fields.

Smith normal form drives every integer homology computation; column
reduction over a field drives ranks, kernels and membership solves.  The
matrices coming out of bar complexes are sparse with tiny entries, so the
elimination picks minimal-absolute-value pivots with a Markowitz fill
tie-break and works on dict-of-dict copies.

``homology_pair`` computes Ker(alpha)/Im(beta) for a composable pair with
alpha . beta = 0.  It first splits the middle basis into connected
components of the two support graphs; the pair is block diagonal over
that partition, so ranks and divisors combine additively.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping, Optional, Sequence

from .rings import Domain, IntegerRing, PrimeField, RationalField, ZZ


class CompositionNonzero(Exception):
    """Raised when a supposedly composable pair has alpha . beta != 0."""


class SparseMatrix:
    """An immutable sparse matrix over a coefficient domain."""

    __slots__ = ("rows", "cols", "entries", "domain")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object], domain: Domain):
        clean = {}
        for (r, c), v in dict(entries).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) out of range {rows}x{cols}")
            if not domain.is_zero(v):
                clean[(r, c)] = v
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, *args):
        raise AttributeError("SparseMatrix is immutable")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], domain: Domain = ZZ) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                entries[(r, c)] = domain.coerce(v)
        return cls(rows, cols, entries, domain)

    @classmethod
    def zero(cls, rows: int, cols: int, domain: Domain = ZZ) -> "SparseMatrix":
        return cls(rows, cols, {}, domain)

    def entry(self, r: int, c: int):
        return self.entries.get((r, c), self.domain.zero)

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}, self.domain
        )

    def by_rows(self) -> dict[int, dict[int, object]]:
        out: dict[int, dict[int, object]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(r, {})[c] = v
        return out

    def by_cols(self) -> dict[int, dict[int, object]]:
        out: dict[int, dict[int, object]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(c, {})[r] = v
        return out

    def to_dense(self) -> list[list]:
        out = [[self.domain.zero] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def map_domain(self, domain: Domain) -> "SparseMatrix":
        """Reinterpret the entries in another domain (e.g. reduce mod p)."""
        return SparseMatrix(
            self.rows, self.cols, {k: domain.coerce(v) for k, v in self.entries.items()}, domain
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.domain == other.domain
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()}, {self.domain.name})"


def compose(second: SparseMatrix, first: SparseMatrix) -> SparseMatrix:
    """Matrix of the composite map (apply ``first``, then ``second``).

    Entries are treated as right-multiplication coefficients of maps
    between free left modules, so the product of a path of weights keeps
    the earlier factor on the left.  For commutative domains this is the
    ordinary product second * first.
    """
    if first.rows != second.cols:
        raise ValueError(f"shape mismatch: {second.cols} vs {first.rows}")
    dom = second.domain
    first_cols = first.by_cols()
    second_cols = second.by_cols()
    out: dict[tuple[int, int], object] = {}
    for j, col in first_cols.items():
        for i, v1 in col.items():
            scol = second_cols.get(i)
            if not scol:
                continue
            for l, v2 in scol.items():
                key = (l, j)
                prod = dom.mul(v1, v2)
                if key in out:
                    out[key] = dom.add(out[key], prod)
                else:
                    out[key] = prod
    return SparseMatrix(second.rows, first.cols, out, dom)


@dataclass(frozen=True)
class HomologyGroup:
    """Free rank plus elementary divisors (each > 1, each dividing the next)."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        prev = None
        for d in self.torsion:
            if d <= 1:
                raise ValueError(f"torsion divisor {d} must be > 1")
            if prev is not None and d % prev:
                raise ValueError(f"broken divisibility chain {self.torsion}")
            prev = d

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        for d in self.torsion:
            parts.append(f"Z_{d}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free": self.free_rank, "torsion": list(self.torsion)}


def normalize_divisor_chain(divisors: Sequence[int]) -> tuple[int, ...]:
    """Turn a multiset of nonzero diagonal entries into the equivalent
    divisibility chain d1 | d2 | ... by repeated gcd/lcm exchanges."""
    ds = sorted(abs(d) for d in divisors)
    if any(d == 0 for d in ds):
        raise ValueError("divisors must be nonzero")
    changed = True
    while changed:
        changed = False
        ds.sort()
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if ds[j] % ds[i]:
                    g = gcd(ds[i], ds[j])
                    ds[i], ds[j] = g, ds[i] * ds[j] // g
                    changed = True
    return tuple(ds)


def _nearest_quot(a: int, v: int) -> int:
    """Quotient rounding a/v to nearest, so |a - q v| <= |v| / 2."""
    q, r = divmod(a, v)
    if 2 * abs(r) > abs(v):
        q += 1
    return q


class _IntElim:
    """Mutable sparse integer elimination shared by SNF variants."""

    def __init__(self, m: SparseMatrix, with_transforms: bool = False):
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, set[int]] = {}
        for (r, c), v in m.entries.items():
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, set()).add(r)
        self.pivots: list[tuple[int, int, int]] = []
        self.with_transforms = with_transforms
        if with_transforms:
            self.S = [[int(i == j) for j in range(m.rows)] for i in range(m.rows)]
            self.T = [[int(i == j) for j in range(m.cols)] for i in range(m.cols)]

    def _row_addmul(self, dst: int, src: int, factor: int):
        """row_dst += factor * row_src"""
        if factor == 0:
            return
        drow = self.rows.setdefault(dst, {})
        for c, v in self.rows.get(src, {}).items():
            nv = drow.get(c, 0) + factor * v
            if nv:
                drow[c] = nv
                self.cols.setdefault(c, set()).add(dst)
            elif c in drow:
                del drow[c]
                self.cols[c].discard(dst)
                if not self.cols[c]:
                    del self.cols[c]
        if not drow:
            del self.rows[dst]
        if self.with_transforms:
            Sd, Ss = self.S[dst], self.S[src]
            for j in range(len(Sd)):
                Sd[j] += factor * Ss[j]

    def _col_addmul(self, dst: int, src: int, factor: int):
        """col_dst += factor * col_src"""
        if factor == 0:
            return
        for r in list(self.cols.get(src, ())):
            v = self.rows[r][src]
            nv = self.rows[r].get(dst, 0) + factor * v
            if nv:
                self.rows[r][dst] = nv
                self.cols.setdefault(dst, set()).add(r)
            elif dst in self.rows[r]:
                del self.rows[r][dst]
                self.cols[dst].discard(r)
                if not self.cols[dst]:
                    del self.cols[dst]
        if self.with_transforms:
            for Trow in self.T:
                Trow[dst] += factor * Trow[src]

    def _pick_pivot(self) -> tuple[int, int]:
        best_key = None
        best = None
        for r, row in self.rows.items():
            rfill = len(row) - 1
            for c, v in row.items():
                key = (abs(v), rfill * (len(self.cols[c]) - 1), r, c)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (r, c)
                    if key[0] == 1 and key[1] == 0:
                        return best
        return best

    def run(self):
        while self.rows:
            r, c = self._pick_pivot()
            while True:
                v = self.rows[r][c]
                # shrink column entries; a nonzero remainder becomes a better pivot
                moved = False
                for s in sorted(self.cols[c]):
                    if s == r:
                        continue
                    a = self.rows[s][c]
                    self._row_addmul(s, r, -_nearest_quot(a, v))
                    if c in self.rows.get(s, {}):
                        r = s
                        moved = True
                        break
                if moved:
                    continue
                # column clean; shrink row entries the same way
                for t in sorted(self.rows[r]):
                    if t == c:
                        continue
                    a = self.rows[r][t]
                    self._col_addmul(t, c, -_nearest_quot(a, v))
                    if t in self.rows[r]:
                        c = t
                        moved = True
                        break
                if moved:
                    continue
                break
            self.pivots.append((r, c, self.rows[r][c]))
            del self.rows[r]
            self.cols[c].discard(r)
            if not self.cols[c]:
                del self.cols[c]


def smith_normal_form(m: SparseMatrix) -> tuple[tuple[int, ...], int]:
    """Invariant factors and rank of an integer matrix.

    Returns (divisors, rank) with d1 | d2 | ... | dr, all positive.
    """
    if not isinstance(m.domain, IntegerRing):
        raise ValueError("smith_normal_form needs integer coefficients")
    elim = _IntElim(m)
    elim.run()
    divisors = normalize_divisor_chain([d for (_, _, d) in elim.pivots])
    return divisors, len(divisors)


def smith_with_transforms(m: SparseMatrix):
    """Elimination with row/col transform bookkeeping.

    Returns (pivots, S, T) where pivots is a list of (row, col, value)
    and S * m * T has exactly those entries and zeros elsewhere.
    """
    if not isinstance(m.domain, IntegerRing):
        raise ValueError("integer coefficients required")
    elim = _IntElim(m, with_transforms=True)
    elim.run()
    return elim.pivots, elim.S, elim.T


def integer_rank(m: SparseMatrix) -> int:
    return smith_normal_form(m)[1]


def integer_kernel_basis(m: SparseMatrix) -> list[list[int]]:
    """A basis of the integer kernel, as column vectors."""
    pivots, _, T = smith_with_transforms(m)
    pivot_cols = {c for (_, c, _) in pivots}
    return [[T[i][j] for i in range(m.cols)] for j in range(m.cols) if j not in pivot_cols]


def _field_column_reduce(m: SparseMatrix, extra: Optional[dict[int, object]] = None):
    """Left-to-right column reduction over a field.

    Returns (reduced, combos, low) where reduced[j] is the reduced j-th
    column (dict row->coeff), combos[j] expresses it as a combination of
    original columns, and low maps a pivot row to the column owning it.
    When ``extra`` is given it is reduced as a virtual last column.
    """
    dom = m.domain
    if not dom.is_field:
        raise ValueError("field coefficients required")
    cols = m.by_cols()
    reduced: dict[int, dict[int, object]] = {}
    combos: dict[int, dict[int, object]] = {}
    low: dict[int, int] = {}
    order = list(range(m.cols))
    if extra is not None:
        order.append(m.cols)
    for j in order:
        col = dict(extra) if (extra is not None and j == m.cols) else dict(cols.get(j, {}))
        combo = {j: dom.one}
        while col:
            r = max(col)
            if r not in low:
                low[r] = j
                break
            jj = low[r]
            factor = dom.mul(col[r], dom.inv(reduced[jj][r]))
            for rr, v in reduced[jj].items():
                nv = dom.sub(col.get(rr, dom.zero), dom.mul(factor, v))
                if dom.is_zero(nv):
                    col.pop(rr, None)
                else:
                    col[rr] = nv
            for cc, v in combos[jj].items():
                nv = dom.sub(combo.get(cc, dom.zero), dom.mul(factor, v))
                if dom.is_zero(nv):
                    combo.pop(cc, None)
                else:
                    combo[cc] = nv
        reduced[j] = col
        combos[j] = combo
    return reduced, combos, low


def field_rank(m: SparseMatrix) -> int:
    reduced, _, _ = _field_column_reduce(m)
    return sum(1 for col in reduced.values() if col)


def field_kernel_basis(m: SparseMatrix) -> list[list]:
    """Kernel basis over the matrix's own field."""
    dom = m.domain
    reduced, combos, _ = _field_column_reduce(m)
    out = []
    for j in range(m.cols):
        if not reduced[j]:
            vec = [dom.zero] * m.cols
            for c, v in combos[j].items():
                vec[c] = v
            out.append(vec)
    return out


def rank_over_field(m: SparseMatrix, characteristic: int) -> int:
    """Rank of an integer (or field) matrix with entries reduced into the
    field of the given characteristic (0 means the rationals)."""
    dom = RationalField() if characteristic == 0 else PrimeField(characteristic)
    return field_rank(m.map_domain(dom))


def solve_in_image(m: SparseMatrix, v: Sequence) -> Optional[list]:
    """A witness w with m * w = v over the matrix's domain, else None."""
    if len(v) != m.rows:
        raise ValueError(f"vector length {len(v)} != rows {m.rows}")
    dom = m.domain
    if dom.is_field:
        target = {r: dom.coerce(x) for r, x in enumerate(v) if not dom.is_zero(dom.coerce(x))}
        reduced, combos, _ = _field_column_reduce(m, extra=target)
        if reduced[m.cols]:
            return None
        combo = combos[m.cols]
        scale = combo.pop(m.cols)  # combo includes the virtual column itself
        witness = [dom.zero] * m.cols
        inv = dom.inv(scale)
        for c, coeff in combo.items():
            witness[c] = dom.neg(dom.mul(inv, coeff))
        return witness
    if isinstance(dom, IntegerRing):
        pivots, S, T = smith_with_transforms(m)
        sv = [sum(S[i][j] * v[j] for j in range(m.rows)) for i in range(m.rows)]
        u = [0] * m.cols
        pivot_rows = set()
        for (r, c, d) in pivots:
            pivot_rows.add(r)
            if sv[r] % d:
                return None
            u[c] = sv[r] // d
        if any(sv[r] for r in range(m.rows) if r not in pivot_rows):
            return None
        return [sum(T[i][j] * u[j] for j in range(m.cols)) for i in range(m.cols)]
    raise ValueError(f"solve_in_image unsupported over {dom.name}")


def _middle_components(alpha: SparseMatrix, beta: SparseMatrix) -> list[list[int]]:
    """Partition the middle indices by the connected components of the
    union of alpha's row-sharing and beta's column-sharing graphs."""
    m = alpha.cols
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for row in alpha.by_rows().values():
        idx = sorted(row)
        for other in idx[1:]:
            union(idx[0], other)
    for col in beta.by_cols().values():
        idx = sorted(col)
        for other in idx[1:]:
            union(idx[0], other)
    groups: dict[int, list[int]] = {}
    for x in range(m):
        groups.setdefault(find(x), []).append(x)
    return [groups[root] for root in sorted(groups)]


def _restrict_pair(alpha: SparseMatrix, beta: SparseMatrix, mids: list[int]):
    """Submatrices of the pair touching the given middle indices."""
    mid_pos = {g: i for i, g in enumerate(mids)}
    arow_ids: dict[int, int] = {}
    a_entries = {}
    for (r, c), v in alpha.entries.items():
        if c in mid_pos:
            ri = arow_ids.setdefault(r, len(arow_ids))
            a_entries[(ri, mid_pos[c])] = v
    bcol_ids: dict[int, int] = {}
    b_entries = {}
    for (r, c), v in beta.entries.items():
        if r in mid_pos:
            ci = bcol_ids.setdefault(c, len(bcol_ids))
            b_entries[(mid_pos[r], ci)] = v
    a = SparseMatrix(len(arow_ids), len(mids), a_entries, alpha.domain)
    b = SparseMatrix(len(mids), len(bcol_ids), b_entries, beta.domain)
    return a, b


def homology_pair(alpha: SparseMatrix, beta: SparseMatrix) -> HomologyGroup:
    """Ker(alpha)/Im(beta) for integer matrices with alpha . beta = 0.

    Free rank is m - rank(alpha) - rank(beta); the torsion is the list of
    elementary divisors of beta exceeding 1.
    """
    if alpha.cols != beta.rows:
        raise ValueError(f"shape mismatch: alpha is ?x{alpha.cols}, beta is {beta.rows}x?")
    if not isinstance(alpha.domain, IntegerRing) or not isinstance(beta.domain, IntegerRing):
        raise ValueError("homology_pair needs integer coefficients")
    if not compose(alpha, beta).is_zero():
        raise CompositionNonzero("alpha . beta != 0")
    free = 0
    all_divisors: list[int] = []
    for mids in _middle_components(alpha, beta):
        a, b = _restrict_pair(alpha, beta, mids)
        div_b, rank_b = smith_normal_form(b)
        _, rank_a = smith_normal_form(a)
        free += len(mids) - rank_a - rank_b
        all_divisors.extend(d for d in div_b if d > 1)
    # gcd/lcm renormalization across blocks can introduce trivial divisors
    chain = tuple(d for d in normalize_divisor_chain(all_divisors) if d > 1)
    return HomologyGroup(free, chain)


def homology_pair_field(alpha: SparseMatrix, beta: SparseMatrix) -> HomologyGroup:
    """dim Ker(alpha) - dim Im(beta) over a field, as a torsion-free group."""
    if alpha.cols != beta.rows:
        raise ValueError("shape mismatch")
    dom = alpha.domain
    if not dom.is_field:
        raise ValueError("field coefficients required")
    if not compose(alpha, beta).is_zero():
        raise CompositionNonzero("alpha . beta != 0")
    free = 0
    for mids in _middle_components(alpha, beta):
        a, b = _restrict_pair(alpha, beta, mids)
        free += len(mids) - field_rank(a) - field_rank(b)
    return HomologyGroup(free)
