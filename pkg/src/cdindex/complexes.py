"""Simplicial complexes: face posets, order complexes, star/link, classical
f/h-vectors, rational reduced homology, Gorenstein predicates, shelling
verification, and the standard generators.

Homology is computed over the exact rationals (Fraction-based elimination);
the Gorenstein definitions are about real homology, so torsion never
matters here and floats would only add noise.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import poset as ps
from .errors import (DomainError, FaceNotFound, NotPure, RequiresBounds,
                     SearchCutoff)
from .ncpoly import UniPolynomial


def _escape(name):
    out = []
    for ch in name:
        if ch in "\\,{}":
            out.append("\\")
        out.append(ch)
    return "".join(out)


def face_id(face):
    """Canonical string id of a face: sorted vertex names in braces."""
    return "{%s}" % ",".join(_escape(v) for v in sorted(face))


class SimplicialComplex:
    """Abstract simplicial complex given by its facet list.

    The face set is closed downward and always contains the empty face.
    Vertex names are strings; faces are frozensets of them.
    """

    __slots__ = ("facets", "vertices", "_faces")

    def __init__(self, facets):
        norm = {frozenset(str(v) for v in f) for f in facets}
        norm.discard(frozenset())
        # drop faces contained in other facets
        norm = {f for f in norm if not any(f < g for g in norm)}
        self.facets = tuple(sorted(norm, key=lambda f: (len(f), sorted(f))))
        faces = {frozenset()}
        for f in self.facets:
            for k in range(1, len(f) + 1):
                faces.update(frozenset(c) for c in combinations(sorted(f), k))
        self._faces = frozenset(faces)
        self.vertices = tuple(sorted({v for f in self.facets for v in f}))

    @property
    def dim(self):
        """Dimension; -1 for the empty complex (only the empty face)."""
        return max((len(f) for f in self.facets), default=0) - 1

    def faces(self, dim=None):
        if dim is None:
            return self._faces
        return {f for f in self._faces if len(f) == dim + 1}

    def has_face(self, face):
        return frozenset(str(v) for v in face) in self._faces

    def is_pure(self):
        return len({len(f) for f in self.facets}) <= 1

    def __contains__(self, face):
        return self.has_face(face)

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex)
                and self.facets == other.facets)

    def __hash__(self):
        return hash(self.facets)

    def __repr__(self):
        return "SimplicialComplex(%d vertices, %d facets, dim %d)" % (
            len(self.vertices), len(self.facets), self.dim)

    def to_json_obj(self):
        return {"facets": [sorted(f) for f in self.facets]}

    def to_json(self):
        return json.dumps(self.to_json_obj(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["facets"])

    @classmethod
    def from_json(cls, text):
        return cls.from_json_obj(json.loads(text))


def face_poset(k, with_max=False):
    """Face poset of a complex; empty face at the bottom, rank = dim + 1."""
    faces = sorted(k.faces(), key=lambda f: (len(f), sorted(f)))
    ids = {f: face_id(f) for f in faces}
    covers = []
    for f in faces:
        if not f:
            continue
        for v in f:
            covers.append((ids[f - {v}], ids[f]))
    p = ps.GradedPoset([ids[f] for f in faces], covers)
    if with_max:
        p = ps.adjoin_max(p)
    return p


def poset_face(eid):
    """Inverse of face_id for ids produced by this module."""
    if not (eid.startswith("{") and eid.endswith("}")):
        raise FaceNotFound("id %r is not a face id" % eid)
    body = eid[1:-1]
    if not body:
        return frozenset()
    out, cur, i = [], [], 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            cur.append(body[i + 1])
            i += 2
        elif ch == ",":
            out.append("".join(cur))
            cur = []
            i += 1
        else:
            cur.append(ch)
            i += 1
    out.append("".join(cur))
    return frozenset(out)


def order_complex(p):
    """The complex of nondegenerate chains of a bounded graded poset."""
    p.require_graded()
    if p.min_elt is None or p.max_elt is None:
        raise RequiresBounds("order complex needs both bounds")
    return SimplicialComplex(p.maximal_chains())


def star(k, face):
    """Subcomplex of all faces lying in a facet that contains ``face``."""
    face = frozenset(str(v) for v in face)
    if face not in k.faces():
        raise FaceNotFound("face %s not in complex" % sorted(face))
    return SimplicialComplex([f for f in k.facets if face <= f])


def link(k, face):
    """Faces of the star that do not intersect ``face``."""
    face = frozenset(str(v) for v in face)
    if face not in k.faces():
        raise FaceNotFound("face %s not in complex" % sorted(face))
    facets = [f - face for f in k.facets if face <= f]
    return SimplicialComplex(facets)


def f_vector(k):
    """[f_-1, f_0, ..., f_{d}] including the empty face count."""
    d = k.dim
    return [len(k.faces(i)) for i in range(-1, d + 1)]


@dataclass(frozen=True)
class HVector:
    """Classical h-vector of a pure (d-1)-dimensional complex."""

    d: int
    h: tuple

    def polynomial(self):
        return UniPolynomial(self.h)

    def __iter__(self):
        return iter(self.h)


def h_vector(k):
    """h-vector via sum f_{i-1} (x-1)^{d-i} = sum h_i x^{d-i}."""
    if not k.is_pure():
        raise NotPure("h-vector needs a pure complex")
    d = k.dim + 1
    f = f_vector(k)
    poly = UniPolynomial.zero()
    for i in range(d + 1):
        poly = poly + UniPolynomial((-1, 1)) ** (d - i) * f[i]
    # poly = sum h_i x^{d-i}; read coefficients back off
    h = tuple(poly[d - i] for i in range(d + 1))
    return HVector(d, h)


def flag_to_h(p):
    """h-vector of the order complex from the flag h-vector of the poset."""
    from .flagcd import flag_h
    p.require_bounds()
    d = p.top_rank - 1
    if d < 0:
        raise DomainError("rank-0 poset has no order complex h-vector")
    if d == 0:
        return HVector(0, (1,))
    fh = flag_h(p)
    h = [0] * (d + 1)
    for mask, value in fh.values.items():
        h[mask.bit_count()] += value
    return HVector(d, tuple(h))


# -- rational homology -------------------------------------------------------


def _rank_rational(rows, width):
    """Rank of an integer matrix, by exact fraction elimination."""
    mat = [list(map(Fraction, row)) for row in rows if any(row)]
    rank = 0
    col = 0
    while mat and col < width:
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            if mat[r][col]:
                factor = mat[r][col] / pv
                for c in range(col, width):
                    mat[r][c] -= factor * mat[rank][c]
        rank += 1
        col += 1
    return rank


def _boundary_rank(k, i, faces_by_dim):
    """Rank of the reduced boundary map C_i -> C_{i-1}."""
    lower = {f: j for j, f in enumerate(faces_by_dim.get(i - 1, []))}
    upper = faces_by_dim.get(i, [])
    if not upper or not lower:
        return 0
    rows = []
    for f in upper:
        row = [0] * len(lower)
        verts = sorted(f)
        for j, v in enumerate(verts):
            row[lower[frozenset(verts) - {v}]] = (-1) ** j
        rows.append(row)
    return _rank_rational(rows, len(lower))


def _reduced_betti_all(k):
    """Reduced rational Betti numbers as a dict over dims -1..dim."""
    d = k.dim
    faces_by_dim = {i: sorted(k.faces(i), key=sorted)
                    for i in range(-1, d + 1)}
    ranks = {i: _boundary_rank(k, i, faces_by_dim) for i in range(0, d + 1)}
    ranks[d + 1] = 0
    betti = {}
    for i in range(-1, d + 1):
        dim_ci = len(faces_by_dim.get(i, []))
        betti[i] = dim_ci - ranks.get(i, 0) - ranks.get(i + 1, 0)
    return betti


def reduced_betti(k):
    """Reduced rational Betti numbers in dimensions 0..dim."""
    betti = _reduced_betti_all(k)
    return [betti[i] for i in range(0, k.dim + 1)]


def _is_homology_sphere(k, n):
    """k has the reduced rational homology of an n-sphere (n >= -1)."""
    if k.dim != n:
        return False
    betti = _reduced_betti_all(k)
    return all(v == (1 if i == n else 0) for i, v in betti.items())


def _is_homology_trivial(k):
    betti = _reduced_betti_all(k)
    return all(v == 0 for v in betti.values())


def is_gorenstein(k):
    """k is a rational homology sphere, link by link."""
    if not k.is_pure():
        raise NotPure("Gorenstein test needs a pure complex")
    n = k.dim
    for face in sorted(k.faces(), key=lambda f: (len(f), sorted(f))):
        m = len(face) - 1
        if not _is_homology_sphere(link(k, face), n - m - 1):
            return False
    return True


def is_near_gorenstein(k, bd):
    """(k, bd) is a rational homology ball with boundary bd."""
    if not k.is_pure():
        raise NotPure("near-Gorenstein test needs a pure complex")
    n = k.dim
    if bd.dim != n - 1 or not is_gorenstein(bd):
        return False
    bd_faces = bd.faces()
    for face in sorted(k.faces(), key=lambda f: (len(f), sorted(f))):
        m = len(face) - 1
        lk = link(k, face)
        if face in bd_faces:
            if not _is_homology_trivial(lk):
                return False
        elif not _is_homology_sphere(lk, n - m - 1):
            return False
    return True


# -- shelling ----------------------------------------------------------------


def _shelling_step_ok(prev_faces, facet):
    """The new facet must meet the old complex in a nonempty union of its
    boundary facets; any such union is a star of a face of the simplex."""
    d = len(facet) - 1
    inter = [f for f in _closure_of(facet) if f in prev_faces]
    ridges = {f for f in inter if len(f) == d}
    if not ridges:
        return False
    return all(any(f <= r for r in ridges) for f in inter if f)


def _closure_of(facet):
    out = [frozenset()]
    verts = sorted(facet)
    for k in range(1, len(verts) + 1):
        out.extend(frozenset(c) for c in combinations(verts, k))
    return out


def verify_shelling(k, order):
    """Check that the facet order is a shelling of the pure complex k."""
    if not k.is_pure():
        raise NotPure("shelling is defined for pure complexes")
    order = [frozenset(str(v) for v in f) for f in order]
    if sorted(order, key=sorted) != sorted(k.facets, key=sorted):
        raise DomainError("order is not a permutation of the facets")
    if not order:
        return True
    prev = set(_closure_of(order[0]))
    for facet in order[1:]:
        if not _shelling_step_ok(prev, facet):
            return False
        prev.update(_closure_of(facet))
    return True


def find_shelling(k, max_nodes=10 ** 6):
    """Backtracking shelling search.

    Returns a facet order, or None when the search space is exhausted.
    Raises SearchCutoff when the node budget runs out, so an aborted search
    is never mistaken for a proof that no shelling exists.
    """
    if not k.is_pure():
        raise NotPure("shelling is defined for pure complexes")
    facets = list(k.facets)
    if len(facets) <= 1:
        return facets
    d = k.dim
    budget = [max_nodes]

    def ridge_count(f, used_faces):
        return sum(1 for v in f if (f - {v}) in used_faces)

    def backtrack(chosen, used, faces):
        if budget[0] <= 0:
            raise SearchCutoff("shelling search exceeded %d nodes" % max_nodes)
        budget[0] -= 1
        if len(chosen) == len(facets):
            return list(chosen)
        ranked = sorted(
            (f for f in facets if f not in used),
            key=lambda f: (-ridge_count(f, faces), sorted(f)))
        for f in ranked:
            if not _shelling_step_ok(faces, f):
                continue
            added = [x for x in _closure_of(f) if x not in faces]
            chosen.append(f)
            used.add(f)
            faces.update(added)
            out = backtrack(chosen, used, faces)
            if out is not None:
                return out
            chosen.pop()
            used.remove(f)
            faces.difference_update(added)
        return None

    for first in facets:
        faces = set(_closure_of(first))
        out = backtrack([first], {first}, faces)
        if out is not None:
            return out
    return None


# -- generators --------------------------------------------------------------


def make_simplex(d):
    """The full d-simplex on vertices 0..d."""
    if d < 0:
        raise DomainError("dimension must be >= 0")
    return SimplicialComplex([[str(i) for i in range(d + 1)]])


def make_boundary_simplex(d):
    """Boundary of the d-simplex: all proper faces."""
    if d < 1:
        raise DomainError("boundary needs dimension >= 1")
    verts = [str(i) for i in range(d + 1)]
    return SimplicialComplex(list(combinations(verts, d)))


def make_polygon(n):
    """The n-gon as a 1-dimensional complex."""
    if n < 3:
        raise DomainError("a polygon needs at least 3 vertices")
    return SimplicialComplex([[str(i), str((i + 1) % n)] for i in range(n)])


def make_cube3():
    """Face lattice of the 3-cube (vertices are coordinate strings)."""
    verts = ["%d%d%d" % (x, y, z)
             for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    faces = [frozenset()]
    faces += [frozenset([v]) for v in verts]
    for axis in range(3):
        for a in (0, 1):
            for b in (0, 1):
                edge = [v for v in verts
                        if int(v[(axis + 1) % 3]) == a
                        and int(v[(axis + 2) % 3]) == b]
                faces.append(frozenset(edge))
    for axis in range(3):
        for a in (0, 1):
            faces.append(frozenset(v for v in verts if int(v[axis]) == a))
    ids = {f: face_id(f) for f in faces}
    covers = []
    for f in faces:
        for g in faces:
            if f < g and not any(f < h < g for h in faces):
                covers.append((ids[f], ids[g]))
    p = ps.GradedPoset(sorted(ids.values()), covers)
    return ps.adjoin_max(p)


def make_boolean(n):
    """The boolean algebra B_n."""
    return ps.boolean_poset(n)


@dataclass(frozen=True)
class StackedPolytope:
    """A combinatorial stacked polytope with its stack triangulation."""

    boundary: SimplicialComplex
    triangulation: SimplicialComplex
    order: tuple


def make_stacked(d, k, seed=0):
    """Stack k d-simplices, each glued to one facet of the previous shape.

    Purely combinatorial: the next facet to stack onto is drawn from the
    facets created by the previous step (seeded choice), which keeps the
    construction deterministic while allowing different shapes per seed.
    """
    if d < 2:
        raise DomainError("stacked polytopes need dimension >= 2")
    if k < 1:
        raise DomainError("need at least one simplex in the stack")
    rng = random.Random(seed)
    base = frozenset(str(i) for i in range(d + 1))
    simplices = [base]
    sphere = {frozenset(c) for c in combinations(sorted(base), d)}
    recent = sorted(sphere, key=sorted)
    next_vertex = d + 1
    for _ in range(k - 1):
        target = recent[rng.randrange(len(recent))]
        v = str(next_vertex)
        next_vertex += 1
        new_simplex = target | {v}
        simplices.append(new_simplex)
        sphere.remove(target)
        created = [frozenset(t | {v})
                   for t in (target - {u} for u in sorted(target))]
        sphere.update(created)
        recent = created
    return StackedPolytope(
        boundary=SimplicialComplex(sorted(sphere, key=sorted)),
        triangulation=SimplicialComplex(simplices),
        order=tuple(simplices))


def barycentric_subdivision(k):
    """Barycentric subdivision with its carrier map onto the base complex.

    Vertices of the subdivision are the nonempty faces of k; the carrier of
    a chain is its maximal element.  Returns (complex, SubdivisionMap); the
    map runs between the bare face posets.  For a sphere-style base, adjoin
    formal maxima with subdivision.with_adjoined_tops before decomposing.
    """
    from .subdivision import SubdivisionMap
    base = face_poset(k, with_max=False)
    oc = order_complex(ps.adjoin_max(face_poset(k)))
    sub = face_poset(oc, with_max=False)
    carrier = {}
    for f in oc.faces():
        names = sorted(f, key=lambda eid: len(poset_face(eid)))
        carrier[face_id(f)] = names[-1] if names else face_id(frozenset())
    return oc, SubdivisionMap(sub, base, carrier)
