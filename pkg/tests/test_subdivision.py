"""Subdivision maps: validation, restriction, skeletal decomposition, and
the cd-index decomposition."""
import pytest

import cdindex as cd
from cdindex.errors import InvalidChain
from cdindex.ncpoly import CdPolynomial, coefficientwise_leq
from conftest import (hexagon_over_triangle, square_lattice,
                      tetra_subdivision)


def test_validate_strong_eulerian_fixtures(subdivision_fixtures):
    for name, m in subdivision_fixtures:
        report = cd.validate_strong_eulerian(m)
        assert report.ok, (name, report.failures[:3])


def test_validate_identity():
    m = cd.identity_subdivision(square_lattice())
    assert cd.validate_strong_eulerian(m).ok
    assert cd.validate_strong_formal(m).ok


def test_validate_rejects_rank_collapse():
    # collapse an edge of the square onto a vertex
    sq = square_lattice()
    carrier = {e: e for e in sq.elements}
    carrier["{0,1}"] = "{0}"
    m = cd.SubdivisionMap(sq, sq, carrier)
    report = cd.validate_strong_eulerian(m)
    assert not report.ok
    assert any("{0" in str(f[0]) or "order" in f[1] for f in report.failures)


def test_validate_strong_formal_fixtures(subdivision_fixtures):
    for name, m in subdivision_fixtures:
        report = cd.validate_strong_formal(m)
        assert report.ok, (name, report.failures[:3])


def test_strong_formal_catches_broken_carrier():
    m = tetra_subdivision()
    carrier = dict(m.carrier)
    # send an interior edge of the split facet to the wrong face
    carrier["{3,5}"] = "{1,2,3}"
    carrier["{1,5,3}"] = "{1,2,3}"
    carrier["{5,2,3}"] = "{1,2,3}"
    carrier["{5}"] = "{1,2,3}"
    broken = cd.SubdivisionMap(m.source, m.target, carrier)
    assert not cd.validate_strong_formal(broken).ok


def test_restrict_to_edge_is_path():
    m = tetra_subdivision()
    r = cd.restrict(m, "{1,2}")
    path = cd.face_poset(cd.SimplicialComplex([["1", "5"], ["5", "2"]]))
    assert cd.is_isomorphic(r.source, path)
    assert cd.validate_strong_eulerian(r).ok
    # restriction to a vertex is trivial; restriction to the top is the map
    rv = cd.restrict(m, "{3}")
    assert len(rv.source.elements) == 2
    rt = cd.restrict(m, m.target.max_elt)
    assert len(rt.source.elements) == len(m.source.elements)


def test_skeletal_family_tetra():
    m = tetra_subdivision()
    fam = cd.skeletal_family(m)
    assert fam.n == 4
    assert cd.is_isomorphic(fam.posets[0], m.target)
    assert cd.is_isomorphic(fam.posets[1], m.target)
    assert not cd.is_isomorphic(fam.posets[2], m.target)
    assert not cd.is_isomorphic(fam.posets[2], m.source)
    assert cd.is_isomorphic(fam.posets[3], m.source)
    assert cd.is_isomorphic(fam.posets[4], m.source)
    # level 2 has the new vertex and the split edge, nothing else new
    assert len(fam.posets[2].elements) == len(m.target.elements) + 2


def test_skeletal_family_identity():
    m = cd.identity_subdivision(square_lattice())
    fam = cd.skeletal_family(m)
    for p in fam.posets:
        assert cd.is_isomorphic(p, m.target)


def test_skeletal_family_hexagon():
    m = hexagon_over_triangle()
    fam = cd.skeletal_family(m)
    # vertices are untouched, edges triple in count at level 2
    assert cd.is_isomorphic(fam.posets[1], m.target)
    lvl2 = fam.posets[2]
    assert len(lvl2.level(2)) == 6
    assert len(lvl2.level(1)) == 6


def test_skeletal_composition_is_carrier(subdivision_fixtures):
    for name, m in subdivision_fixtures:
        fam = cd.skeletal_family(m)
        assert fam.composed_carrier() == m.carrier, name


def test_classify_flags_example():
    fam = cd.skeletal_family(tetra_subdivision())
    assert cd.classify_flag(fam, 2, ["new:{5}", "new:{2,5}"]) == ("new", 2)
    assert cd.classify_flag(
        fam, 2, ["new:{5}", "new:{2,5}", "old:{1,2,4}"]) == ("mixed", 2)
    assert cd.classify_flag(fam, 2, ["old:{1,3,4}"]) == ("old", None)
    assert cd.classify_flag(fam, 2, ["new:{1,3}", "old:{1,3,4}"]) \
        == ("mixed", 2)
    with pytest.raises(InvalidChain):
        cd.classify_flag(fam, 2, ["old:{1,3,4}", "old:{2,3,4}"])
    with pytest.raises(InvalidChain):
        cd.classify_flag(fam, 1, ["new:{5}"])


def test_mixed_flags_switch_at_most_i(subdivision_fixtures):
    for name, m in subdivision_fixtures[:4]:
        if m.target.max_elt is None or m.source.max_elt is None:
            continue
        fam = cd.skeletal_family(m)
        for i in (1, 2):
            if i > fam.n:
                continue
            p = fam.posets[i]
            for chain in p.enumerate_chains():
                if not chain:
                    continue
                kind, switch = cd.classify_flag(fam, i, list(chain))
                if kind != "old":
                    assert switch <= i, (name, i, chain)


def test_decompose_tetra_example():
    dec = cd.decompose_cd(tetra_subdivision())
    rows = {r.sigma: r for r in dec.nonzero_rows()}
    assert set(rows) == {"{}", "{1,2}", "{1,2,3}", "{1,2,4}"}
    assert rows["{1,2}"].local_cd == CdPolynomial.monomial("d")
    assert rows["{1,2}"].upper_cd == CdPolynomial.monomial("c")
    for face in ("{1,2,3}", "{1,2,4}"):
        assert rows[face].local_cd == CdPolynomial.monomial("cd")
        assert rows[face].upper_cd == CdPolynomial.one()
    assert dec.total == CdPolynomial({"ccc": 1, "dc": 3, "cd": 4})


def test_decompose_identity():
    m = cd.identity_subdivision(square_lattice())
    dec = cd.decompose_cd(m)
    nz = dec.nonzero_rows()
    assert len(nz) == 1 and nz[0].sigma == m.target.min_elt
    assert nz[0].local_cd == CdPolynomial.one()
    assert dec.total == cd.cd_index(square_lattice())


def test_decompose_hexagon_over_triangle():
    dec = cd.decompose_cd(hexagon_over_triangle())
    assert dec.total == cd.polygon_cd(6)


def test_decompose_jobs_param_matches():
    m = tetra_subdivision()
    assert cd.decompose_cd(m, jobs=3).total == cd.decompose_cd(m).total


def test_decompose_refuses_unvalidated():
    sq = square_lattice()
    carrier = {e: e for e in sq.elements}
    carrier["{0,1}"] = "{0}"
    broken = cd.SubdivisionMap(sq, sq, carrier)
    with pytest.raises(cd.CdindexError):
        cd.decompose_cd(broken)


def test_rank_telescoping_tetra_and_hexagon():
    for m in (tetra_subdivision(), hexagon_over_triangle()):
        fam = cd.skeletal_family(m)
        for i in range(1, fam.n + 1):
            assert cd.verify_rank_telescoping(fam, i), i


def test_rank_telescoping_detects_mutation():
    m = tetra_subdivision()
    carrier = dict(m.carrier)
    # recarry the new vertex onto a face instead of its edge
    carrier["{5}"] = "{1,2,3}"
    carrier["{1,5}"] = "{1,2,3}"
    carrier["{2,5}"] = "{1,2,3}"
    broken = cd.SubdivisionMap(m.source, m.target, carrier)
    fam = cd.SkeletalFamily(broken)
    good = cd.skeletal_family(m)
    fam.posets = good.posets
    fam.maps = good.maps
    assert not cd.verify_rank_telescoping(fam, 2)


def test_telescoping_sums_to_total_difference():
    from cdindex.flagcd import flag_polynomial
    m = tetra_subdivision()
    fam = cd.skeletal_family(m)
    total = flag_polynomial(fam.posets[fam.n]) - flag_polynomial(
        fam.posets[0])
    assert total == flag_polynomial(m.source) - flag_polynomial(m.target)


def test_restriction_squares_commute():
    """Restricting then skeletalizing agrees with skeletalizing then
    restricting, up to isomorphism of the skeletal posets."""
    m = tetra_subdivision()
    fam = cd.skeletal_family(m)
    for face in ("{1,2}", "{1,2,3}", "{1,2,4}", "{1,3,4}"):
        rfam = cd.skeletal_family(cd.restrict(m, face))
        k = m.target.rank(face)
        # faces of the restricted skeletal poset at each level match the
        # ideal of the big skeletal poset below the old face
        for i in range(k + 1):
            big = fam.posets[i]
            small = rfam.posets[i]
            ideal_ids = [e for e in big.elements
                         if _below_face(fam, e, face)]
            got = big.induced(ideal_ids)
            assert cd.is_isomorphic(small, got), (face, i)


def _below_face(fam, e, face):
    kind, _, raw = e.partition(":")
    tgt = fam.subdivision.target
    if kind == "old":
        return tgt.le(raw, face)
    return tgt.le(fam.subdivision(raw), face)


def test_monotonicity_sphere_fixtures():
    for m in (tetra_subdivision(), hexagon_over_triangle(),
              cd.identity_subdivision(square_lattice())):
        phi_hat = cd.cd_index(m.source)
        phi = cd.cd_index(m.target)
        assert coefficientwise_leq(phi, phi_hat)


def test_top_row_local_index_vanishes():
    dec = cd.decompose_cd(tetra_subdivision())
    top = [r for r in dec.rows if r.sigma == "TOP"]
    assert top and not top[0].local_cd


def test_subdivision_json_roundtrip():
    m = tetra_subdivision()
    text = m.to_json()
    again = cd.SubdivisionMap.from_json(text)
    assert again.carrier == m.carrier
    assert again.to_json() == text
    assert cd.decompose_cd(again).total == cd.decompose_cd(m).total


def test_subdivision_json_from_complexes():
    import json
    source = {"facets": [["1", "3", "4"], ["2", "3", "4"], ["1", "5", "3"],
                         ["5", "2", "3"], ["1", "5", "4"], ["5", "2", "4"]]}
    target = {"facets": [["1", "3", "4"], ["2", "3", "4"], ["1", "2", "3"],
                         ["1", "2", "4"]]}
    m0 = tetra_subdivision()
    carrier = {k: v for k, v in m0.carrier.items() if k != "TOP"}
    obj = {"source": source, "target": target, "carrier": carrier}
    m = cd.SubdivisionMap.from_json(json.dumps(obj))
    assert cd.decompose_cd(m).total == CdPolynomial(
        {"ccc": 1, "dc": 3, "cd": 4})


def test_barycentric_sphere_of_tetra_boundary():
    """Heavier fixture: the barycentric sphere over the tetrahedron
    boundary, cross-checked against the 3-polytope closed form."""
    oc, m = cd.barycentric_subdivision(cd.make_boundary_simplex(3))
    assert cd.f_vector(oc) == [1, 14, 36, 24]
    mt = cd.with_adjoined_tops(m)
    dec = cd.decompose_cd(mt)
    assert dec.total == cd.three_polytope_cd(14, 24)
    rows = {r.sigma: r for r in dec.nonzero_rows()}
    edges = [s for s in rows if rows[s].local_cd == CdPolynomial.monomial("d")]
    assert len(edges) == 6
    facet_local = CdPolynomial({"cd": 5, "dc": 1})
    facets = [s for s in rows if rows[s].local_cd == facet_local]
    assert len(facets) == 4
    fam = cd.skeletal_family(mt)
    for i in range(1, fam.n + 1):
        assert cd.verify_rank_telescoping(fam, i), i


def test_polygon_edge_split_family():
    """Splitting one edge of an n-gon at a new vertex is a subdivision of
    spheres with total cd-index of the (n+1)-gon."""
    for n in range(3, 9):
        target = cd.make_polygon(n)
        facets = [[str(i), str((i + 1) % n)] for i in range(n - 1)]
        facets += [[str(n - 1), "m"], ["m", "0"]]
        source = cd.SimplicialComplex(facets)
        carriers = {str(i): [str(i)] for i in range(n)}
        carriers["m"] = [str(n - 1), "0"]
        m = cd.with_adjoined_tops(
            cd.from_vertex_carriers(source, target, carriers))
        dec = cd.decompose_cd(m)
        assert dec.total == cd.polygon_cd(n + 1), n
        nz = {r.sigma: r.local_cd for r in dec.nonzero_rows()}
        split_edge = "{0,%d}" % (n - 1)
        assert nz[split_edge] == CdPolynomial.monomial("d"), n
        assert set(nz) == {"{}", split_edge}, n
        rep = cd.verify_local_correspondence(m)
        assert rep.ok(), n


def test_one_facet_barycentric_sphere():
    """Subdividing one facet of the tetrahedron boundary barycentrically
    forces the three neighbors to split in half; every row is pinned."""
    target = cd.make_boundary_simplex(3)
    source = cd.SimplicialComplex([
        ["0", "m01", "c"], ["m01", "1", "c"], ["1", "m12", "c"],
        ["m12", "2", "c"], ["2", "m02", "c"], ["m02", "0", "c"],
        ["0", "m01", "3"], ["m01", "1", "3"], ["1", "m12", "3"],
        ["m12", "2", "3"], ["2", "m02", "3"], ["m02", "0", "3"]])
    carriers = {v: [v] for v in "0123"}
    carriers.update({"m01": ["0", "1"], "m12": ["1", "2"],
                     "m02": ["0", "2"], "c": ["0", "1", "2"]})
    m = cd.with_adjoined_tops(
        cd.from_vertex_carriers(source, target, carriers))
    dec = cd.decompose_cd(m)
    assert dec.total == cd.three_polytope_cd(8, 12)
    rows = {r.sigma: r.local_cd for r in dec.nonzero_rows()}
    assert rows["{0,1,2}"] == CdPolynomial({"cd": 5, "dc": 1})
    for half in ("{0,1,3}", "{0,2,3}", "{1,2,3}"):
        assert rows[half] == CdPolynomial.monomial("cd")
    for edge in ("{0,1}", "{0,2}", "{1,2}"):
        assert rows[edge] == CdPolynomial.monomial("d")
    assert cd.verify_local_correspondence(m).ok()


def test_random_polygon_subdivisions_match_closed_form(rng):
    """Scatter interior points on the edges of random polygons; the
    decomposition total must be the larger polygon's cd-index."""
    for _ in range(25):
        n = rng.randint(3, 7)
        points = {i: rng.randint(0, 3) for i in range(n)}
        facets = []
        carriers = {str(i): [str(i)] for i in range(n)}
        for i in range(n):
            j = (i + 1) % n
            chain = [str(i)]
            for t in range(points[i]):
                name = "p%d_%d" % (i, t)
                carriers[name] = [str(i), str(j)]
                chain.append(name)
            chain.append(str(j))
            facets.extend([a, b] for a, b in zip(chain, chain[1:]))
        source = cd.SimplicialComplex(facets)
        m = cd.with_adjoined_tops(cd.from_vertex_carriers(
            source, cd.make_polygon(n), carriers))
        total_points = sum(points.values())
        dec = cd.decompose_cd(m)
        assert dec.total == cd.polygon_cd(n + total_points), (n, points)


def test_local_h_rows_are_local():
    """A row of the global table equals the top row of the restriction."""
    m = tetra_subdivision()
    table = cd.local_h(m)
    for face in ("{1,2}", "{1,2,3}", "{3}"):
        sub = cd.restrict(m, face)
        assert cd.local_h(sub).row(face) == table.row(face), face


def test_duality_reverses_index_words(eulerian_fixtures):
    for name, p in eulerian_fixtures[:10]:
        phi = cd.cd_index(p)
        want = CdPolynomial({w[::-1]: c for w, c in phi.terms.items()})
        assert cd.cd_index(cd.dual(p)) == want, name


def test_restrict_unknown_face():
    from cdindex.errors import FaceNotFound
    with pytest.raises(FaceNotFound):
        cd.restrict(tetra_subdivision(), "{9,9}")


def test_carrier_must_cover_source():
    from cdindex.errors import DomainError
    sq = square_lattice()
    with pytest.raises(DomainError):
        cd.SubdivisionMap(sq, sq, {"{0}": "{0}"})
