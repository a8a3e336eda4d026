"""Shared fixtures: standard posets, subdivision maps, and test oracles."""
from __future__ import annotations

import random

import pytest
from hypothesis import settings

import cdindex as cd

settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")


# -- independent oracles ------------------------------------------------------


def mobius_table(p):
    """Mobius function on all ordered pairs, by the defining recursion."""
    els = sorted(p.elements, key=lambda e: (p.rank(e), e))
    mu = {}
    for a in els:
        mu[(a, a)] = 1
        for b in els:
            if a == b or not p.lt(a, b):
                continue
            total = 0
            for z in els:
                if p.le(a, z) and p.lt(z, b):
                    total += mu[(a, z)]
            mu[(a, b)] = -total
    return mu


def eulerian_by_mobius(p):
    """mu(s, t) = (-1)^(rank difference) on every interval."""
    mu = mobius_table(p)
    for (a, b), value in mu.items():
        if value != (-1) ** (p.rank(b) - p.rank(a)):
            return False
    return True


def random_graded_poset(rng, max_levels=4, max_width=4):
    """Random graded poset with bounds: levels with covers between
    consecutive levels only, every element covered both ways."""
    height = rng.randint(1, max_levels)
    levels = [["r%de%d" % (r, i) for i in range(rng.randint(1, max_width))]
              for r in range(height)]
    elements = ["bot"] + [e for lvl in levels for e in lvl] + ["top"]
    covers = [("bot", e) for e in levels[0]]
    for low, high in zip(levels, levels[1:]):
        for e in high:
            picks = rng.sample(low, rng.randint(1, len(low)))
            covers.extend((x, e) for x in picks)
        for x in low:
            if not any(c[0] == x for c in covers if c[1] in high):
                covers.append((x, rng.choice(high)))
    covers += [(e, "top") for e in levels[-1]]
    return cd.build_poset(elements, covers)


# -- named fixtures ------------------------------------------------------------


def square_lattice():
    return cd.face_poset(cd.make_polygon(4), with_max=True)


def polygon_lattice(n):
    return cd.face_poset(cd.make_polygon(n), with_max=True)


def tetra_lattice():
    return cd.face_poset(cd.make_boundary_simplex(3), with_max=True)


def bipyramid_lattice():
    return cd.face_poset(cd.make_stacked(3, 2).boundary, with_max=True)


def octahedron_complex():
    """Boundary of the cross-polytope on vertex pairs 1/-1, 2/-2, 3/-3."""
    facets = []
    for s1 in ("1", "-1"):
        for s2 in ("2", "-2"):
            for s3 in ("3", "-3"):
                facets.append([s1, s2, s3])
    return cd.SimplicialComplex(facets)


def eulerian_pool():
    """Named Eulerian posets covering ranks 1 through 5."""
    pool = [("B1", cd.boolean_poset(1)),
            ("B2", cd.boolean_poset(2)),
            ("B3", cd.boolean_poset(3)),
            ("B4", cd.boolean_poset(4)),
            ("B5", cd.boolean_poset(5)),
            ("square", square_lattice()),
            ("pentagon", polygon_lattice(5)),
            ("hexagon", polygon_lattice(6)),
            ("tetrahedron", tetra_lattice()),
            ("cube", cd.make_cube3()),
            ("bipyramid", bipyramid_lattice()),
            ("octahedron", cd.face_poset(octahedron_complex(), with_max=True)),
            ("stacked33", cd.face_poset(cd.make_stacked(3, 3).boundary,
                                        with_max=True)),
            ("susp_square", cd.suspension(square_lattice())),
            ("pyr_pentagon", cd.pyramid(polygon_lattice(5))),
            ("join_B2_square", cd.join(cd.boolean_poset(2), square_lattice())),
            ("dual_cube", cd.dual(cd.make_cube3()))]
    return pool


def random_eulerian(rng, pool=None):
    """One random Eulerian poset built from pool members and closure ops."""
    if pool is None:
        pool = [cd.boolean_poset(k) for k in (1, 2, 3)]
        pool += [polygon_lattice(n) for n in (3, 4, 5, 6)]
    p = rng.choice(pool)
    op = rng.randrange(4)
    if op == 0:
        q = rng.choice(pool)
        if len(p.elements) * len(q.elements) <= 400:
            return cd.join(p, q)
        return p
    if op == 1:
        return cd.suspension(p)
    if op == 2 and len(p.elements) <= 40:
        return cd.pyramid(p)
    if op == 3:
        return cd.dual(p)
    return p


# -- subdivision fixtures --------------------------------------------------------


def tetra_subdivision():
    """Boundary of the tetrahedron with one edge split at a new vertex 5,
    the two adjacent facets halved; formal tops adjoined."""
    target = cd.SimplicialComplex(
        [["1", "3", "4"], ["2", "3", "4"], ["1", "2", "3"], ["1", "2", "4"]])
    source = cd.SimplicialComplex(
        [["1", "3", "4"], ["2", "3", "4"], ["1", "5", "3"], ["5", "2", "3"],
         ["1", "5", "4"], ["5", "2", "4"]])
    carriers = {v: [v] for v in "1234"}
    carriers["5"] = ["1", "2"]
    return cd.with_adjoined_tops(
        cd.from_vertex_carriers(source, target, carriers))


def hexagon_over_triangle():
    """Barycentric subdivision of the triangle boundary, tops adjoined."""
    _, m = cd.barycentric_subdivision(cd.make_boundary_simplex(2))
    return cd.with_adjoined_tops(m)


def edge_with_points(t):
    """A segment subdivided by t interior points."""
    verts = ["0"] + ["m%d" % i for i in range(1, t + 1)] + ["1"]
    source = cd.SimplicialComplex(
        [[a, b] for a, b in zip(verts, verts[1:])])
    target = cd.SimplicialComplex([["0", "1"]])
    carriers = {"0": ["0"], "1": ["1"]}
    carriers.update({v: ["0", "1"] for v in verts[1:-1]})
    return cd.from_vertex_carriers(source, target, carriers)


def barycentric_solid_triangle():
    _, m = cd.barycentric_subdivision(cd.make_simplex(2))
    return m


def half_split_triangle():
    """Solid triangle with one edge midpoint, split into two triangles."""
    target = cd.make_simplex(2)
    source = cd.SimplicialComplex([["0", "m", "2"], ["m", "1", "2"]])
    carriers = {"0": ["0"], "1": ["1"], "2": ["2"], "m": ["0", "1"]}
    return cd.from_vertex_carriers(source, target, carriers)


def subdivision_pool():
    """Named valid strong Eulerian subdivision fixtures."""
    return [("tetra66", tetra_subdivision()),
            ("hexagon", hexagon_over_triangle()),
            ("bary_triangle", barycentric_solid_triangle()),
            ("half_triangle", half_split_triangle()),
            ("edge1", edge_with_points(1)),
            ("edge3", edge_with_points(3)),
            ("identity_square", cd.identity_subdivision(square_lattice())),
            ("bary_square", cd.barycentric_subdivision(
                cd.SimplicialComplex([["0", "1", "2"], ["0", "2", "3"]]))[1])]


@pytest.fixture(scope="session")
def eulerian_fixtures():
    return eulerian_pool()


@pytest.fixture(scope="session")
def subdivision_fixtures():
    return subdivision_pool()


@pytest.fixture
def rng():
    return random.Random(20160825)
