"""Based (co)chain complexes with labeled bases and sparse differentials.

A ``BasedComplex`` stores, per degree, an ordered basis of hashable
labels and a sparse differential matrix.  The ``direction`` flag selects
chain (degree-lowering) or cochain (degree-raising) orientation; one
homology driver serves both.  Complexes are truncated at a maximal
degree, and homology at the truncation edge raises ``OutOfRange`` rather
than silently computing with a missing differential.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Optional, Sequence

from .linalg import (
    HomologyGroup,
    SparseMatrix,
    compose,
    homology_pair,
    homology_pair_field,
)
from .rings import Domain, IntegerRing

Label = Hashable

CHAIN = -1
COCHAIN = +1


class OutOfRange(Exception):
    """Homology requested at a degree whose differentials are not built."""


class UnsupportedRing(Exception):
    """Operation not available over the given coefficient domain."""


class BasedComplex:
    """Graded ordered bases plus sparse differentials over one domain.

    ``diffs[k]`` is the matrix of the differential leaving degree k; its
    columns are indexed by ``bases[k]`` and its rows by
    ``bases[k + direction]``.
    """

    __slots__ = ("domain", "direction", "bases", "diffs", "_index")

    def __init__(
        self,
        domain: Domain,
        direction: int,
        bases: Mapping[int, Sequence[Label]],
        diffs: Mapping[int, SparseMatrix],
    ):
        if direction not in (CHAIN, COCHAIN):
            raise ValueError("direction must be -1 (chain) or +1 (cochain)")
        self.domain = domain
        self.direction = direction
        self.bases = {k: tuple(v) for k, v in bases.items()}
        self.diffs = dict(diffs)
        self._index: dict[int, dict[Label, int]] = {}
        for k, mat in self.diffs.items():
            src = len(self.bases.get(k, ()))
            dst = len(self.bases.get(k + direction, ()))
            if (mat.rows, mat.cols) != (dst, src):
                raise ValueError(
                    f"differential at degree {k} is {mat.rows}x{mat.cols}, "
                    f"expected {dst}x{src}"
                )
            if mat.domain != domain:
                raise ValueError("differential domain mismatch")

    @property
    def degrees(self) -> list[int]:
        return sorted(self.bases)

    @property
    def max_degree(self) -> int:
        return max(self.bases) if self.bases else -1

    def basis(self, k: int) -> tuple[Label, ...]:
        return self.bases.get(k, ())

    def dim(self, k: int) -> int:
        return len(self.bases.get(k, ()))

    def diff(self, k: int) -> SparseMatrix:
        """The differential leaving degree k (zero matrix if absent)."""
        if k in self.diffs:
            return self.diffs[k]
        return SparseMatrix.zero(self.dim(k + self.direction), self.dim(k), self.domain)

    def index(self, k: int) -> dict[Label, int]:
        if k not in self._index:
            self._index[k] = {lab: i for i, lab in enumerate(self.bases.get(k, ()))}
        return self._index[k]

    def label_degree(self, label: Label) -> Optional[int]:
        for k in self.bases:
            if label in self.index(k):
                return k
        return None

    def map_domain(self, domain: Domain) -> "BasedComplex":
        """The same complex with entries coerced into another domain."""
        return BasedComplex(
            domain,
            self.direction,
            self.bases,
            {k: m.map_domain(domain) for k, m in self.diffs.items()},
        )

    def __repr__(self):
        dims = ", ".join(f"{k}:{self.dim(k)}" for k in self.degrees)
        kind = "chain" if self.direction == CHAIN else "cochain"
        return f"BasedComplex({kind}, {self.domain.name}, dims {{{dims}}})"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[tuple[int, int], ...] = ()  # (degree, nonzero entries in composite)

    def __str__(self):
        if self.ok:
            return "complex valid: all composites vanish"
        parts = ", ".join(f"degree {k} ({n} nonzero)" for k, n in self.failures)
        return f"complex INVALID: composite differential nonzero at {parts}"


def validate_complex(c: BasedComplex) -> ValidationReport:
    """Check that consecutive differentials compose to zero."""
    failures = []
    for k in sorted(c.diffs):
        k2 = k + c.direction
        if k2 in c.diffs:
            comp = compose(c.diffs[k2], c.diffs[k])
            if not comp.is_zero():
                failures.append((k, comp.nnz()))
    return ValidationReport(not failures, tuple(failures))


def homology(c: BasedComplex, degree: int) -> HomologyGroup:
    """Homology of the complex at one degree.

    For chains this is Ker d_k / Im d_{k+1}; for cochains
    Ker d^k / Im d^{k-1}.  Complexes are truncations, so the degree above
    must have been built: homology at the truncation edge raises
    OutOfRange ("needs one more degree").  A complex that genuinely ends
    can say so with an explicit empty basis above its top degree.
    Degrees below zero are genuinely zero.
    """
    k = degree
    if k not in c.bases:
        raise OutOfRange(f"no basis at degree {k}")
    if k + 1 not in c.bases:
        raise OutOfRange(
            f"homology at degree {k} needs degree {k + 1}; build one more degree"
        )
    out = c.diff(k)
    inc = c.diff(k + 1) if c.direction == CHAIN else c.diff(k - 1)
    if isinstance(c.domain, IntegerRing):
        return homology_pair(out, inc)
    if c.domain.is_field:
        return homology_pair_field(out, inc)
    raise UnsupportedRing(f"homology over {c.domain.name} is not supported")


def halve_differentials(c: BasedComplex) -> BasedComplex:
    """Divide every differential entry by two (entries must all be even).

    Used for the integer form of the doubled-weight subcomplexes, where
    the halved differential admits a unit-weight matching.
    """
    if not isinstance(c.domain, IntegerRing):
        raise UnsupportedRing("halving is an integer-complex operation")
    halved = {}
    for k, m in c.diffs.items():
        entries = {}
        for key, v in m.entries.items():
            if v % 2:
                raise ValueError(f"odd entry {v} at {key} in degree {k}")
            entries[key] = v // 2
        halved[k] = SparseMatrix(m.rows, m.cols, entries, c.domain)
    return BasedComplex(c.domain, c.direction, c.bases, halved)


def permute_basis(c: BasedComplex, perms: Mapping[int, Sequence[int]]) -> BasedComplex:
    """Reorder the bases by per-degree permutations and conjugate the
    differentials accordingly (handy for invariance tests)."""
    new_bases = {}
    for k, basis in c.bases.items():
        p = perms.get(k)
        new_bases[k] = tuple(basis[i] for i in p) if p else basis
    new_diffs = {}
    for k, m in c.diffs.items():
        src = perms.get(k, range(m.cols))
        dst = perms.get(k + c.direction, range(m.rows))
        src_pos = {old: new for new, old in enumerate(src)}
        dst_pos = {old: new for new, old in enumerate(dst)}
        new_diffs[k] = SparseMatrix(
            m.rows,
            m.cols,
            {(dst_pos[r], src_pos[c2]): v for (r, c2), v in m.entries.items()},
            m.domain,
        )
    return BasedComplex(c.domain, c.direction, new_bases, new_diffs)


def label_to_json(label: Label):
    to_json = getattr(label, "to_json", None)
    if to_json is not None:
        return to_json()
    return str(label)


def complex_to_json(c: BasedComplex) -> dict:
    """Structured dump: bases plus differential entries per degree."""
    out = {
        "direction": "chain" if c.direction == CHAIN else "cochain",
        "ring": c.domain.name,
        "degrees": {},
    }
    for k in c.degrees:
        mat = c.diffs.get(k)
        entries = []
        if mat is not None:
            for (r, cc), v in sorted(mat.entries.items()):
                entries.append([r, cc, c.domain.to_json(v)])
        out["degrees"][str(k)] = {
            "basis": [label_to_json(lab) for lab in c.basis(k)],
            "differential": entries,
        }
    return out


def render_complex_text(c: BasedComplex, coeff_str: Callable[[object], str] = str) -> str:
    """Line-oriented human-readable dump of bases and differentials."""
    lines = []
    arrow = "d" if c.direction == CHAIN else "δ"
    for k in c.degrees:
        lines.append(f"degree {k}: {c.dim(k)} generators")
        for lab in c.basis(k):
            lines.append(f"  {lab}")
        mat = c.diffs.get(k)
        if mat is None or not mat.entries:
            if k in c.diffs:
                lines.append(f"  {arrow}[{k}] = 0")
            continue
        cols = mat.by_cols()
        target = c.basis(k + c.direction)
        for j, lab in enumerate(c.basis(k)):
            col = cols.get(j)
            if not col:
                continue
            terms = " + ".join(f"({coeff_str(col[r])})*{target[r]}" for r in sorted(col))
            lines.append(f"  {arrow}[{k}] {lab} = {terms}")
    return "\n".join(lines)
