"""Generic algebraic Morse theory on based complexes.

A matching pairs basis labels along invertible differential entries.
Reversing the matched edges must leave the two-degree digraphs acyclic;
then the unmatched (critical) labels span a homotopy equivalent complex
whose differential is the sum of weights of zig-zag paths, a reversed
matched edge of weight w contributing -w^{-1}.  Path weights multiply in
traversal order with the earliest step leftmost, which is the right
convention for maps of free left modules whose entries act by right
multiplication.

Complexes may also be supplied lazily through neighbor callbacks, so a
single path enumeration or a matching certification does not require
materializing a full degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Optional

from .complexes import BasedComplex
from .linalg import SparseMatrix
from .rings import Domain

Label = Hashable


class NotAMatching(Exception):
    """A label occurs in more than one matching edge."""


class NonInvertibleWeight(Exception):
    """A matched edge carries a weight that is not a unit."""


class EdgeNotInDifferential(Exception):
    """A matched edge has no corresponding nonzero differential entry."""


class CycleDetected(Exception):
    """Reversing the matching creates a directed cycle."""

    def __init__(self, message: str, cycle: tuple[Label, ...] = ()):
        super().__init__(message)
        self.cycle = cycle


@dataclass(frozen=True)
class Matching:
    """A set of (source, target) label pairs, target appearing in d(source)."""

    edges: frozenset[tuple[Label, Label]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[Label, Label]]) -> "Matching":
        return cls(frozenset(pairs))

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class MatchingReport:
    """Successful validation: critical labels per degree plus edge count."""

    critical: dict[int, tuple[Label, ...]]
    n_edges: int


def _matching_maps(m: Matching):
    by_source: dict[Label, Label] = {}
    by_target: dict[Label, Label] = {}
    used: set[Label] = set()
    for u, v in sorted(m.edges, key=repr):
        for lab in (u, v):
            if lab in used:
                raise NotAMatching(f"label {lab!r} occurs in more than one edge")
            used.add(lab)
        by_source[u] = v
        by_target[v] = u
    return by_source, by_target


# A walk alternates "down" steps (differential components, excluding the
# reversed matched edge of the current label) and "up" steps (the reversed
# matched edge of the current label, if any).  Roles keep the two degrees
# of the window apart.
_SRC, _DST = 0, 1


def _walk_sums(
    start: Label,
    down_moves: Callable[[Label], Iterable[tuple[Label, object]]],
    up_move: Callable[[Label], Optional[tuple[Label, object]]],
    combine: Callable[[object, object], object],
    add: Callable[[object, object], object],
    one: object,
):
    """Sum over all directed walks from ``start`` (a source-degree label).

    Returns {(label, role): value} where the value accumulates, over every
    walk from start ending at that label, the product of edge values
    combined left to right.  The empty walk contributes ``one`` at start.
    Raises CycleDetected if the walk digraph has a cycle.
    """
    memo: dict[tuple[Label, int], dict[tuple[Label, int], object]] = {}
    GRAY = object()

    def children(node: tuple[Label, int]):
        lab, role = node
        if role == _SRC:
            return [((v, _DST), w) for v, w in down_moves(lab)]
        up = up_move(lab)
        return [((up[0], _SRC), up[1])] if up else []

    stack: list[tuple[tuple[Label, int], bool]] = [((start, _SRC), False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            state = memo.get(node)
            if state is GRAY:
                raise CycleDetected(f"cycle through {node[0]!r}", (node[0],))
            if state is not None:
                continue
            memo[node] = GRAY
            stack.append((node, True))
            for child, _w in children(node):
                if memo.get(child) is GRAY:
                    raise CycleDetected(f"cycle through {child[0]!r}", (child[0],))
                if child not in memo:
                    stack.append((child, False))
        else:
            acc: dict[tuple[Label, int], object] = {node: one}
            for child, w in children(node):
                for end, val in memo[child].items():
                    term = combine(w, val)
                    if end in acc:
                        acc[end] = add(acc[end], term)
                    else:
                        acc[end] = term
            memo[node] = acc
    return memo[(start, _SRC)]


def _complex_callbacks(c: BasedComplex, by_source: dict, by_target: dict, k: int):
    """Down/up move callbacks for the degree window (k, k + direction)."""
    mat = c.diff(k)
    cols = mat.by_cols()
    src_index = c.index(k)
    dst_basis = c.basis(k + c.direction)
    dst_index = c.index(k + c.direction)
    dom = c.domain

    def down_moves(lab: Label):
        j = src_index[lab]
        partner = by_source.get(lab)
        out = []
        for r, w in sorted(cols.get(j, {}).items()):
            tgt = dst_basis[r]
            if tgt != partner:
                out.append((tgt, w))
        return out

    def up_move(lab: Label):
        u = by_target.get(lab)
        if u is None or u not in src_index:
            return None
        w = mat.entries.get((dst_index[lab], src_index[u]))
        return (u, dom.neg(dom.inv(w)))

    return down_moves, up_move


def check_matching(c: BasedComplex, m: Matching) -> MatchingReport:
    """Validate a matching on a materialized complex.

    Checks that every label occurs in at most one edge, that each edge is
    an actual differential entry with invertible weight, and that the
    partially reversed digraph is acyclic within every adjacent degree
    pair.  Raises NotAMatching, EdgeNotInDifferential, NonInvertibleWeight
    or CycleDetected accordingly.
    """
    by_source, by_target = _matching_maps(m)
    dom = c.domain
    edges_by_degree: dict[int, list[tuple[Label, Label, object]]] = {}
    for u, v in sorted(m.edges, key=repr):
        ku = c.label_degree(u)
        if ku is None:
            raise EdgeNotInDifferential(f"source label {u!r} not in complex")
        kv = ku + c.direction
        idx_v = c.index(kv).get(v)
        if idx_v is None:
            raise EdgeNotInDifferential(f"target label {v!r} not in degree {kv}")
        w = c.diff(ku).entries.get((idx_v, c.index(ku)[u]))
        if w is None:
            raise EdgeNotInDifferential(f"no differential entry from {u!r} to {v!r}")
        if not dom.is_unit(w):
            raise NonInvertibleWeight(f"edge {u!r} -> {v!r} has non-unit weight {w!r}")
        edges_by_degree.setdefault(ku, []).append((u, v, w))

    for k, edges in sorted(edges_by_degree.items()):
        down_moves, _ = _complex_callbacks(c, by_source, by_target, k)
        _check_pair_acyclic((v for (_u, v, _w) in edges), by_source, by_target, down_moves)

    matched = set(by_source) | set(by_target)
    critical = {
        k: tuple(lab for lab in c.basis(k) if lab not in matched) for k in c.degrees
    }
    return MatchingReport(critical, len(m.edges))


def _check_pair_acyclic(
    targets: Iterable[Label],
    by_source: dict,
    by_target: dict,
    down_moves: Callable[[Label], Iterable[tuple[Label, object]]],
):
    """DFS for directed cycles among the matched pairs of one degree window.

    Any cycle in the partially reversed digraph alternates matched pairs,
    so it suffices to walk the relation: pair (u, v) reaches pair (u', v')
    when d(u) hits v'.  Nodes are keyed by the target label.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[Label, int] = {}
    parent: dict[Label, Label] = {}
    for v0 in targets:
        if color.get(v0, WHITE) is not WHITE:
            continue
        stack: list[tuple[Label, bool]] = [(v0, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                color[v] = BLACK
                continue
            if color.get(v, WHITE) == BLACK:
                continue
            color[v] = GRAY
            stack.append((v, True))
            u = by_target[v]
            for v2, _w in down_moves(u):
                if v2 == v or v2 not in by_target:
                    continue
                cv2 = color.get(v2, WHITE)
                if cv2 == GRAY:
                    cycle = [v2, v]
                    node = v
                    while node != v2 and node in parent:
                        node = parent[node]
                        cycle.append(node)
                    cycle.reverse()
                    raise CycleDetected(
                        f"reversed digraph has a cycle through {v2!r}", tuple(cycle)
                    )
                if cv2 == WHITE:
                    parent[v2] = v
                    stack.append((v2, False))


def reduce(c: BasedComplex, m: Matching, up_to: Optional[int] = None) -> BasedComplex:
    """The Morse-reduced complex on the critical (unmatched) labels.

    The reduced differential entry from a critical label to a critical
    label one step along the differential direction is the sum, over all
    zig-zag paths between them, of the products of step weights; forward
    steps contribute their differential entry and reversed matched steps
    contribute -w^{-1}.  Validates the matching first and propagates its
    errors.

    ``up_to`` truncates the output: only degrees up to the bound are
    kept, which avoids the spurious critical labels a truncated matching
    leaves at the top degree of the input.
    """
    report = check_matching(c, m)
    by_source, by_target = _matching_maps(m)
    dom = c.domain
    critical = report.critical
    if up_to is not None:
        critical = {k: labs for k, labs in critical.items() if k <= up_to}
    crit_index = {k: {lab: i for i, lab in enumerate(labs)} for k, labs in critical.items()}

    new_diffs: dict[int, SparseMatrix] = {}
    for k in sorted(c.diffs):
        if k not in critical:
            continue
        k2 = k + c.direction
        if k2 not in critical:
            continue
        entries: dict[tuple[int, int], object] = {}
        down_moves, up_move = _complex_callbacks(c, by_source, by_target, k)
        tgt_index = crit_index.get(k2, {})
        for j, lab in enumerate(critical.get(k, ())):
            sums = _walk_sums(lab, down_moves, up_move, dom.mul, dom.add, dom.one)
            for (end, role), val in sums.items():
                if role == _DST and end in tgt_index and not dom.is_zero(val):
                    entries[(tgt_index[end], j)] = val
        new_diffs[k] = SparseMatrix(
            len(critical.get(k2, ())), len(critical.get(k, ())), entries, dom
        )
    return BasedComplex(dom, c.direction, critical, new_diffs)


def transfer_h(c: BasedComplex, m: Matching, label: Label) -> dict[Label, object]:
    """Image of a critical label under the homotopy equivalence into the
    original complex: the sum of path weights to every same-degree label
    (the empty path contributes the label itself with weight one)."""
    check_matching(c, m)
    by_source, by_target = _matching_maps(m)
    if label in by_source or label in by_target:
        raise ValueError(f"{label!r} is not critical")
    k = c.label_degree(label)
    if k is None:
        raise ValueError(f"{label!r} not in complex")
    dom = c.domain
    down_moves, up_move = _complex_callbacks(c, by_source, by_target, k)
    sums = _walk_sums(label, down_moves, up_move, dom.mul, dom.add, dom.one)
    return {end: val for (end, role), val in sums.items() if role == _SRC}


def lazy_transfer(
    start: Label,
    down_moves: Callable[[Label], Iterable[tuple[Label, object]]],
    up_move: Callable[[Label], Optional[tuple[Label, object]]],
    domain: Domain,
) -> dict[Label, object]:
    """transfer_h against neighbor callbacks instead of a materialized
    complex; ``up_move`` must already include the -w^{-1} reversal."""
    sums = _walk_sums(start, down_moves, up_move, domain.mul, domain.add, domain.one)
    return {end: val for (end, role), val in sums.items() if role == _SRC}


def lazy_path_counts(
    start: Label,
    down_moves: Callable[[Label], Iterable[tuple[Label, object]]],
    up_move: Callable[[Label], Optional[tuple[Label, object]]],
) -> dict[Label, int]:
    """Number of directed walks from ``start`` to each reachable
    same-degree label (weights ignored)."""
    sums = _walk_sums(
        start,
        down_moves,
        up_move,
        combine=lambda _w, v: v,
        add=lambda a, b: a + b,
        one=1,
    )
    return {end: val for (end, role), val in sums.items() if role == _SRC}


# Streaming certification for rule-defined matchings on complexes too
# large to materialize.  The classify callback must implement a genuine
# involution; this is verified cell by cell.

ROLE_CRITICAL = "critical"
ROLE_SOURCE = "source"
ROLE_TARGET = "target"


@dataclass(frozen=True)
class StreamingReport:
    cells: dict[int, int]
    matched_pairs: dict[int, int]  # keyed by source degree
    critical: dict[int, tuple[Label, ...]]


def check_matching_streaming(
    degrees: Iterable[int],
    labels_of_degree: Callable[[int], Iterator[Label]],
    down_edges: Callable[[Label, int], list[tuple[Label, object]]],
    classify: Callable[[Label, int], tuple[str, Optional[Label]]],
    domain: Domain,
    direction: int = -1,
) -> StreamingReport:
    """Certify a rule-defined matching degree by degree without
    materializing bases or matrices.

    For every cell the classification is checked to be involutive, every
    matched edge is located inside the actual differential of its source
    with a unit weight, and each two-degree window is checked for cycles.
    Critical labels are collected and returned.
    """
    degrees = sorted(degrees)
    degree_set = set(degrees)
    cells: dict[int, int] = {}
    pairs: dict[int, int] = {}
    critical: dict[int, list[Label]] = {k: [] for k in degrees}
    targets_by_srcdeg: dict[int, list[Label]] = {}

    for k in degrees:
        count = 0
        for lab in labels_of_degree(k):
            count += 1
            role, partner = classify(lab, k)
            if role == ROLE_CRITICAL:
                critical[k].append(lab)
                continue
            if role == ROLE_SOURCE:
                pk = k + direction
                back_role, back = classify(partner, pk)
                if back_role != ROLE_TARGET or back != lab:
                    raise NotAMatching(
                        f"classification not involutive at {lab!r} -> {partner!r}"
                    )
                weight = None
                for tgt, w in down_edges(lab, k):
                    if tgt == partner:
                        weight = w
                        break
                if weight is None or domain.is_zero(weight):
                    raise EdgeNotInDifferential(f"no entry from {lab!r} to {partner!r}")
                if not domain.is_unit(weight):
                    raise NonInvertibleWeight(f"{lab!r} -> {partner!r} weight {weight!r}")
                if pk in degree_set:
                    pairs[k] = pairs.get(k, 0) + 1
                    targets_by_srcdeg.setdefault(k, []).append(partner)
            elif role == ROLE_TARGET:
                pk = k - direction
                back_role, back = classify(partner, pk)
                if back_role != ROLE_SOURCE or back != lab:
                    raise NotAMatching(
                        f"classification not involutive at {lab!r} <- {partner!r}"
                    )
            else:
                raise ValueError(f"bad role {role!r}")
        cells[k] = count

    for k, targets in sorted(targets_by_srcdeg.items()):
        by_target = {}
        for v in targets:
            role, partner = classify(v, k + direction)
            by_target[v] = partner

        def moves(u, _k=k):
            return down_edges(u, _k)

        _check_pair_acyclic(targets, {}, by_target, moves)

    return StreamingReport(cells, pairs, {k: tuple(v) for k, v in critical.items()})
