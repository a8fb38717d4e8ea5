import pytest

from exthh.complexes import (
    CHAIN,
    COCHAIN,
    BasedComplex,
    OutOfRange,
    UnsupportedRing,
    complex_to_json,
    halve_differentials,
    homology,
    permute_basis,
    render_complex_text,
    validate_complex,
)
from exthh.hochschild import build_reduced_chain, build_reduced_resolution
from exthh.linalg import HomologyGroup, SparseMatrix
from exthh.rings import F2, QQ, ZZ


def toy(entries_by_degree, dims, direction=CHAIN, domain=ZZ):
    bases = {k: tuple(f"e{k}_{i}" for i in range(d)) for k, d in dims.items()}
    diffs = {}
    for k, entries in entries_by_degree.items():
        diffs[k] = SparseMatrix(
            dims[k + direction], dims[k], {kk: domain.coerce(v) for kk, v in entries.items()}, domain
        )
    return BasedComplex(domain, direction, bases, diffs)


def test_validate_complex_examples():
    good = build_reduced_resolution(2, 3)
    assert validate_complex(good).ok
    bad = toy({1: {(0, 0): 1}, 2: {(0, 0): 1}}, {0: 1, 1: 1, 2: 1})
    report = validate_complex(bad)
    assert not report.ok and report.failures == ((2, 1),)
    empty = BasedComplex(ZZ, CHAIN, {}, {})
    assert validate_complex(empty).ok


def test_shape_validation():
    with pytest.raises(ValueError):
        toy({1: {(0, 0): 1}}, {0: 0, 1: 1})


def test_homology_examples():
    # one-variable reduced chain complex: Z Z/2 pattern
    c = build_reduced_chain(1, 3, ZZ)
    assert homology(c, 1) == HomologyGroup(1, (2,))
    assert homology(c, 0) == HomologyGroup(2)
    c2 = build_reduced_chain(2, 2, F2)
    assert homology(c2, 1) == HomologyGroup(8)


def test_homology_out_of_range():
    c = build_reduced_chain(1, 3, ZZ)
    with pytest.raises(OutOfRange):
        homology(c, 3)  # needs the differential from degree 4
    with pytest.raises(OutOfRange):
        homology(c, 7)


def test_homology_rejects_bimodule_coefficients():
    res = build_reduced_resolution(1, 2)
    with pytest.raises(UnsupportedRing):
        homology(res, 1)


def test_homology_invariant_under_basis_permutation():
    c = build_reduced_chain(2, 4, ZZ)
    perms = {0: [3, 0, 2, 1], 1: [7, 2, 1, 0, 5, 4, 3, 6], 2: list(reversed(range(c.dim(2))))}
    shuffled = permute_basis(c, perms)
    assert validate_complex(shuffled).ok
    for k in range(3):
        assert homology(shuffled, k) == homology(c, k)


def test_cochain_orientation_homology():
    # 0 -> Z -x2-> Z -> 0 in cochain orientation: H^0 = 0, H^1 = Z/2;
    # the explicit empty degree marks a genuine end, not a truncation
    c = toy({0: {(0, 0): 2}}, {0: 1, 1: 1, 2: 0}, direction=COCHAIN)
    assert homology(c, 0) == HomologyGroup(0)
    assert homology(c, 1) == HomologyGroup(0, (2,))


def test_halve_differentials():
    c = toy({1: {(0, 0): 4}}, {0: 1, 1: 1})
    assert halve_differentials(c).diff(1).entry(0, 0) == 2
    odd = toy({1: {(0, 0): 3}}, {0: 1, 1: 1})
    with pytest.raises(ValueError):
        halve_differentials(odd)
    with pytest.raises(UnsupportedRing):
        halve_differentials(toy({1: {(0, 0): 4}}, {0: 1, 1: 1}, domain=QQ))


def test_map_domain_drops_vanishing_entries():
    c = toy({1: {(0, 0): 2}}, {0: 1, 1: 1})
    assert c.map_domain(F2).diff(1).is_zero()


def test_serialization_roundtrip_shapes():
    c = build_reduced_resolution(1, 2)
    payload = complex_to_json(c)
    assert payload["direction"] == "chain"
    assert payload["degrees"]["1"]["basis"] == [{"tau": [1]}]
    assert payload["degrees"]["1"]["differential"]
    text = render_complex_text(c)
    assert "degree 2" in text and "x(1,1)" in text
