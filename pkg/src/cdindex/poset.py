"""Finite graded posets and their constructive operators.

A poset is stored as a cover DAG over opaque string ids.  The full order
relation is cached as one bitmask row per element (elements of the strict
up-set / down-set), which makes comparability queries and interval
extraction cheap; chain counting downstream is a popcount loop over these
rows.  Values are immutable after construction: every operator builds a
fresh poset.

Gradedness is verified eagerly but a failure is recorded, not raised;
non-graded posets stay usable for order-only operations and reject
rank-dependent ones.
"""
from __future__ import annotations

import json

from .errors import (CycleDetected, DomainError, MissingBounds, NotALattice,
                     NotGraded, NotNearEulerian, RequiresBounds, RequiresMin)


class GradedPoset:
    """Finite poset with cached reachability and (when possible) ranks."""

    __slots__ = ("elements", "_idx", "cover_pairs", "_up", "_dn",
                 "_ranks", "is_ranked", "is_graded", "min_elt", "max_elt")

    def __init__(self, elements, covers):
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise DomainError("element ids are not unique")
        self.elements = elements
        self._idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)

        up_adj = [[] for _ in range(n)]
        dn_adj = [[] for _ in range(n)]
        seen = set()
        pairs = []
        for lo, hi in covers:
            lo, hi = str(lo), str(hi)
            if lo not in self._idx or hi not in self._idx:
                raise DomainError("cover (%s, %s) references unknown id" % (lo, hi))
            if lo == hi:
                raise CycleDetected("cover loop at %s" % lo)
            key = (self._idx[lo], self._idx[hi])
            if key in seen:
                continue
            seen.add(key)
            pairs.append(key)
            up_adj[key[0]].append(key[1])
            dn_adj[key[1]].append(key[0])
        self.cover_pairs = tuple(sorted(pairs))

        order = self._topo_order(up_adj, dn_adj)

        # strict up/down closures as bitmasks, filled in topological order
        up = [0] * n
        for i in reversed(order):
            mask = 0
            for j in up_adj[i]:
                mask |= up[j] | (1 << j)
            up[i] = mask
        dn = [0] * n
        for i in order:
            mask = 0
            for j in dn_adj[i]:
                mask |= dn[j] | (1 << j)
            dn[i] = mask
        self._up = up
        self._dn = dn

        # rank = longest chain from a minimal element; this is the unique
        # candidate rank function, valid when every cover raises it by one
        ranks = [0] * n
        for i in order:
            if dn_adj[i]:
                ranks[i] = 1 + max(ranks[j] for j in dn_adj[i])
        self._ranks = tuple(ranks)
        self.is_ranked = all(ranks[hi] == ranks[lo] + 1
                             for lo, hi in self.cover_pairs)
        maximal = [i for i in range(n) if not up_adj[i]]
        minimal = [i for i in range(n) if not dn_adj[i]]
        self.is_graded = (self.is_ranked
                          and len({ranks[i] for i in maximal}) <= 1)
        self.min_elt = elements[minimal[0]] if len(minimal) == 1 else None
        self.max_elt = elements[maximal[0]] if len(maximal) == 1 else None

    def _topo_order(self, up_adj, dn_adj):
        n = len(self.elements)
        indeg = [len(dn_adj[i]) for i in range(n)]
        stack = [i for i in range(n) if not indeg[i]]
        order = []
        while stack:
            i = stack.pop()
            order.append(i)
            for j in up_adj[i]:
                indeg[j] -= 1
                if not indeg[j]:
                    stack.append(j)
        if len(order) != n:
            raise CycleDetected("cover relation contains a cycle")
        return order

    # -- basic queries ---------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self._idx

    def index(self, e):
        try:
            return self._idx[e]
        except KeyError:
            raise DomainError("unknown element %r" % (e,))

    def le(self, a, b):
        """a <= b in the order closure."""
        ia, ib = self.index(a), self.index(b)
        return ia == ib or bool(self._up[ia] >> ib & 1)

    def lt(self, a, b):
        return a != b and self.le(a, b)

    def comparable(self, a, b):
        return self.le(a, b) or self.le(b, a)

    def covers(self, a, b):
        """b covers a."""
        return (self.index(a), self.index(b)) in set(self.cover_pairs)

    def up_set(self, a, strict=True):
        """Elements above a, as ids."""
        mask = self._up[self.index(a)]
        if not strict:
            mask |= 1 << self.index(a)
        return self._ids(mask)

    def down_set(self, a, strict=True):
        mask = self._dn[self.index(a)]
        if not strict:
            mask |= 1 << self.index(a)
        return self._ids(mask)

    def _ids(self, mask):
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.elements[i])
            mask >>= 1
            i += 1
        return out

    def rank(self, e):
        self._need_ranked()
        return self._ranks[self.index(e)]

    @property
    def top_rank(self):
        """Largest rank present; -1 for an empty poset."""
        self._need_ranked()
        return max(self._ranks, default=-1)

    def level(self, r):
        """Ids at rank r, in element order."""
        self._need_ranked()
        return [e for e, rk in zip(self.elements, self._ranks) if rk == r]

    def _need_ranked(self):
        if not self.is_ranked:
            raise NotGraded("poset has no consistent rank function")

    def require_graded(self):
        if not self.is_graded:
            raise NotGraded("operation needs a graded poset")

    def require_bounds(self):
        self.require_graded()
        if self.min_elt is None or self.max_elt is None:
            raise RequiresBounds("operation needs both a 0 and a 1 element")

    def atoms(self):
        self.require_bounds()
        return self.level(1)

    def coatoms(self):
        self.require_bounds()
        return self.level(self.top_rank - 1)

    def maximal_elements(self):
        up = self._up
        return [e for i, e in enumerate(self.elements) if not up[i]]

    def minimal_elements(self):
        dn = self._dn
        return [e for i, e in enumerate(self.elements) if not dn[i]]

    # -- subposets ---------------------------------------------------------

    def induced(self, ids):
        """Induced subposet; covers are recomputed from the order closure."""
        wanted = set(ids)
        ids = [e for e in self.elements if e in wanted]
        keep = 0
        for e in ids:
            keep |= 1 << self.index(e)
        covers = []
        for a in ids:
            ia = self.index(a)
            for b in ids:
                ib = self.index(b)
                if not (self._up[ia] >> ib & 1):
                    continue
                if self._up[ia] & self._dn[ib] & keep:
                    continue
                covers.append((a, b))
        return GradedPoset(ids, covers)

    def interval(self, lo, hi):
        """The closed interval [lo, hi] as a fresh poset."""
        ilo, ihi = self.index(lo), self.index(hi)
        if not (ilo == ihi or self._up[ilo] >> ihi & 1):
            raise DomainError("%s is not below %s" % (lo, hi))
        mask = ((self._up[ilo] | 1 << ilo)
                & (self._dn[ihi] | 1 << ihi))
        return self.induced(self._ids(mask))

    def proper_part(self):
        """The poset minus its bounds."""
        self.require_bounds()
        keep = [e for e in self.elements if e not in (self.min_elt, self.max_elt)]
        return self.induced(keep)

    def without_max(self):
        if self.max_elt is None:
            raise MissingBounds("poset has no maximum")
        return self.induced([e for e in self.elements if e != self.max_elt])

    # -- chains ------------------------------------------------------------

    def enumerate_chains(self):
        """Yield every nondegenerate chain (as an id tuple), empty chain first.

        Requires a graded poset with both bounds; the bounds never appear in
        the chains.
        """
        self.require_bounds()
        proper = [e for e in self.elements
                  if e not in (self.min_elt, self.max_elt)]
        proper.sort(key=lambda e: (self._ranks[self.index(e)], e))
        up = self._up
        idx = self._idx

        def extend(chain, above_mask, start):
            yield tuple(chain)
            for k in range(start, len(proper)):
                e = proper[k]
                i = idx[e]
                if chain and not (above_mask >> i & 1):
                    continue
                chain.append(e)
                yield from extend(chain, up[i], k + 1)
                chain.pop()

        yield from extend([], 0, 0)

    def maximal_chains(self):
        """Inclusion-maximal chains of the proper part (graded, bounded)."""
        self.require_bounds()
        bounds = {self.min_elt, self.max_elt}
        up_adj = {e: [] for e in self.elements}
        for lo, hi in self.cover_pairs:
            a, b = self.elements[lo], self.elements[hi]
            if a not in bounds and b not in bounds:
                up_adj[a].append(b)
        out = []

        def walk(e, chain):
            if not up_adj[e]:
                out.append(tuple(chain))
                return
            for f in up_adj[e]:
                chain.append(f)
                walk(f, chain)
                chain.pop()

        starts = [e for e in self.elements
                  if e not in bounds
                  and all(f in bounds for f in self.down_set(e))]
        for e in starts:
            walk(e, [e])
        if not starts:
            out.append(())
        return out

    # -- predicates ----------------------------------------------------------

    def is_eulerian(self):
        """Every interval [s, t] with s < t has equally many elements of odd
        and even rank."""
        self.require_graded()
        if self.min_elt is None or self.max_elt is None:
            raise RequiresBounds("Eulerian test needs both bounds")
        return self._intervals_eulerian()

    def is_lower_eulerian(self):
        """All closed intervals are Eulerian and a minimum exists."""
        if self.min_elt is None:
            raise RequiresMin("lower Eulerian test needs a minimum")
        self._need_ranked()
        return self._intervals_eulerian()

    def _intervals_eulerian(self):
        n = len(self.elements)
        even = 0
        for i in range(n):
            if self._ranks[i] % 2 == 0:
                even |= 1 << i
        odd = ((1 << n) - 1) ^ even
        for s in range(n):
            above = self._up[s]
            for t in range(n):
                if not (above >> t & 1):
                    continue
                mask = ((self._up[s] | 1 << s) & (self._dn[t] | 1 << t))
                e = (mask & even).bit_count()
                o = (mask & odd).bit_count()
                if e != o:
                    return False
        return True

    def is_lattice(self):
        """Any two elements have a least upper and greatest lower bound."""
        self.require_bounds()
        n = len(self.elements)
        for a in range(n):
            for b in range(a + 1, n):
                if self._bound(a, b, upper=True) is None:
                    return False
                if self._bound(a, b, upper=False) is None:
                    return False
        return True

    def _bound(self, ia, ib, upper):
        if upper:
            mask = ((self._up[ia] | 1 << ia) & (self._up[ib] | 1 << ib))
            rows = self._dn
        else:
            mask = ((self._dn[ia] | 1 << ia) & (self._dn[ib] | 1 << ib))
            rows = self._up
        best = [i for i in self._bits(mask) if not (rows[i] & mask)]
        if len(best) == 1:
            return best[0]
        return None

    @staticmethod
    def _bits(mask):
        i = 0
        while mask:
            if mask & 1:
                yield i
            mask >>= 1
            i += 1

    def lattice_join(self, x, y):
        """Least upper bound, or NotALattice if it is not unique."""
        self.require_bounds()
        i = self._bound(self.index(x), self.index(y), upper=True)
        if i is None:
            raise NotALattice("join of %s and %s is not unique" % (x, y))
        return self.elements[i]

    def lattice_meet(self, x, y):
        self.require_bounds()
        i = self._bound(self.index(x), self.index(y), upper=False)
        if i is None:
            raise NotALattice("meet of %s and %s is not unique" % (x, y))
        return self.elements[i]

    # -- serialization ---------------------------------------------------------

    def to_json_obj(self):
        covers = sorted((self.elements[lo], self.elements[hi])
                        for lo, hi in self.cover_pairs)
        return {"elements": sorted(self.elements),
                "covers": [list(c) for c in covers]}

    def to_json(self):
        """Canonical byte-stable JSON text."""
        return json.dumps(self.to_json_obj(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj):
        return cls(obj["elements"], [tuple(c) for c in obj["covers"]])

    @classmethod
    def from_json(cls, text):
        return cls.from_json_obj(json.loads(text))

    def __repr__(self):
        return "GradedPoset(%d elements, %d covers)" % (
            len(self.elements), len(self.cover_pairs))


def build_poset(elements, covers):
    """Construct a poset from element ids and cover pairs."""
    return GradedPoset(elements, covers)


# -- fresh-id helpers -------------------------------------------------------


def _fresh(taken, base):
    name = base
    while name in taken:
        name += "'"
    return name


# -- constructive operators -------------------------------------------------


def adjoin_max(p):
    """Adjoin a new maximum above every maximal element (the P_1 operator)."""
    top = _fresh(set(p.elements), "TOP")
    covers = [(p.elements[lo], p.elements[hi]) for lo, hi in p.cover_pairs]
    covers += [(m, top) for m in p.maximal_elements()]
    if not p.elements:
        return GradedPoset([top], [])
    return GradedPoset(list(p.elements) + [top], covers)


def join(p, q):
    """The join P * Q: remove 1 of P and 0 of Q, put Q on top of P."""
    if p.max_elt is None:
        raise MissingBounds("left factor needs a maximum")
    if q.min_elt is None:
        raise MissingBounds("right factor needs a minimum")
    p_els = [e for e in p.elements if e != p.max_elt]
    q_els = [e for e in q.elements if e != q.min_elt]
    clash = set(p_els) & set(q_els)
    p_name = (lambda e: e) if not clash else (lambda e: "L:" + e)
    q_name = (lambda e: e) if not clash else (lambda e: "R:" + e)

    covers = []
    for lo, hi in p.cover_pairs:
        a, b = p.elements[lo], p.elements[hi]
        if a != p.max_elt and b != p.max_elt:
            covers.append((p_name(a), p_name(b)))
    for lo, hi in q.cover_pairs:
        a, b = q.elements[lo], q.elements[hi]
        if a != q.min_elt and b != q.min_elt:
            covers.append((q_name(a), q_name(b)))
    p_top = [e for e in p_els
             if all(f == p.max_elt or not p.lt(e, f) for f in p.elements)]
    q_bot = [e for e in q_els
             if all(f == q.min_elt or not q.lt(f, e) for f in q.elements)]
    covers += [(p_name(a), q_name(b)) for a in p_top for b in q_bot]
    return GradedPoset([p_name(e) for e in p_els] + [q_name(e) for e in q_els],
                       covers)


def suspension(p):
    """P * B_2; adds two incomparable coatoms below a new maximum."""
    if p.max_elt is None or p.min_elt is None:
        raise MissingBounds("suspension needs both bounds")
    taken = set(p.elements)
    u = _fresh(taken, "SUSP0")
    v = _fresh(taken | {u}, "SUSP1")
    top = _fresh(taken | {u, v}, "TOP")
    b2 = GradedPoset(["0", u, v, top],
                     [("0", u), ("0", v), (u, top), (v, top)])
    return join(p, b2)


def pyramid(p):
    """Pyr(P) = P x {0,1}, ordered componentwise."""
    if not p.is_ranked:
        raise NotGraded("pyramid needs a ranked poset")
    name = lambda e, t: "%s:%s" % (t, e)
    elements = [name(e, 0) for e in p.elements] + [name(e, 1) for e in p.elements]
    covers = []
    for lo, hi in p.cover_pairs:
        a, b = p.elements[lo], p.elements[hi]
        covers.append((name(a, 0), name(b, 0)))
        covers.append((name(a, 1), name(b, 1)))
    for e in p.elements:
        covers.append((name(e, 0), name(e, 1)))
    return GradedPoset(elements, covers)


def dual(p):
    """Order-reversal of P."""
    covers = [(p.elements[hi], p.elements[lo]) for lo, hi in p.cover_pairs]
    return GradedPoset(p.elements, covers)


def _semisuspend(p):
    """Adjoin the missing coatom; return (poset, coatom id).

    The new coatom covers exactly the elements y whose upper interval
    [y, 1] has three elements, and is covered by the maximum.  Raises
    NotNearEulerian unless the result is an Eulerian poset.
    """
    if p.max_elt is None or p.min_elt is None:
        raise NotNearEulerian("semisuspension needs both bounds")
    if not p.is_graded:
        raise NotNearEulerian("semisuspension needs a graded poset")
    tau = _fresh(set(p.elements), "TAU")
    itop = p.index(p.max_elt)
    qualify = [e for i, e in enumerate(p.elements)
               if (p._up[i] | 1 << i).bit_count() == 3 and p._up[i] >> itop & 1]
    covers = [(p.elements[lo], p.elements[hi]) for lo, hi in p.cover_pairs]
    covers += [(y, tau) for y in qualify]
    covers.append((tau, p.max_elt))
    q = GradedPoset(list(p.elements) + [tau], covers)
    if not (q.is_graded and q.min_elt is not None and q.max_elt is not None
            and q.is_eulerian()):
        raise NotNearEulerian("adjoining the missing coatom is not Eulerian")
    return q, tau


def semisuspension(p):
    """The unique Eulerian poset obtained by restoring the deleted coatom."""
    return _semisuspend(p)[0]


def is_near_eulerian(p):
    """Operational test: the semisuspension construction succeeds."""
    try:
        _semisuspend(p)
        return True
    except NotNearEulerian:
        return False


def boundary(p):
    """Boundary poset: P minus its maximum when P is Eulerian, else the
    ideal below the restored coatom with a fresh maximum adjoined."""
    try:
        eulerian = p.is_eulerian()
    except (RequiresBounds, NotGraded):
        eulerian = False
    if eulerian:
        return p.without_max()
    q, tau = _semisuspend(p)
    below = q.down_set(tau, strict=True)
    return adjoin_max(q.induced(below))


def interior_elements(p):
    """Elements of a near-Eulerian poset not lying in its boundary."""
    q, tau = _semisuspend(p)
    below = set(q.down_set(tau, strict=True))
    return [e for e in p.elements if e not in below]


# -- isomorphism (small instances) -------------------------------------------


def _refine_colors(p):
    n = len(p.elements)
    up_adj = [[] for _ in range(n)]
    dn_adj = [[] for _ in range(n)]
    for lo, hi in p.cover_pairs:
        up_adj[lo].append(hi)
        dn_adj[hi].append(lo)
    colors = [(len(up_adj[i]), len(dn_adj[i]),
               p._up[i].bit_count(), p._dn[i].bit_count())
              for i in range(n)]
    for _ in range(n):
        palette = {c: k for k, c in enumerate(sorted(set(colors)))}
        coded = [palette[c] for c in colors]
        new = [(coded[i],
                tuple(sorted(coded[j] for j in up_adj[i])),
                tuple(sorted(coded[j] for j in dn_adj[i])))
               for i in range(n)]
        if len(set(new)) == len(set(colors)):
            colors = new
            break
        colors = new
    palette = {c: k for k, c in enumerate(sorted(set(colors)))}
    return [palette[c] for c in colors]


def is_isomorphic(p, q):
    """Backtracking poset isomorphism with color refinement pruning."""
    if len(p.elements) != len(q.elements):
        return False
    if len(p.cover_pairs) != len(q.cover_pairs):
        return False
    pc = _refine_colors(p)
    qc = _refine_colors(q)
    if sorted(pc) != sorted(qc):
        return False
    n = len(p.elements)
    q_by_color = {}
    for j in range(n):
        q_by_color.setdefault(qc[j], []).append(j)
    order = sorted(range(n), key=lambda i: (len(q_by_color[pc[i]]), i))
    mapping = [-1] * n
    used = [False] * n

    def ok(i, j):
        # all covers between already-mapped vertices must transfer
        for lo, hi in p.cover_pairs:
            if lo == i and mapping[hi] != -1:
                if (j, mapping[hi]) not in q_covers:
                    return False
            if hi == i and mapping[lo] != -1:
                if (mapping[lo], j) not in q_covers:
                    return False
        return True

    q_covers = set(q.cover_pairs)

    def backtrack(k):
        if k == n:
            return True
        i = order[k]
        for j in q_by_color.get(pc[i], []):
            if used[j]:
                continue
            if not ok(i, j):
                continue
            mapping[i] = j
            used[j] = True
            if backtrack(k + 1):
                return True
            mapping[i] = -1
            used[j] = False
        return False

    return backtrack(0)


# -- standard small posets ----------------------------------------------------


def boolean_poset(n):
    """The boolean algebra B_n on subsets of {1..n}."""
    if n < 0:
        raise DomainError("boolean rank must be >= 0")
    subsets = []
    for mask in range(1 << n):
        name = "{%s}" % ",".join(str(i + 1) for i in range(n) if mask >> i & 1)
        subsets.append((mask, name))
    covers = []
    for mask, name in subsets:
        for i in range(n):
            if not (mask >> i & 1):
                other = mask | 1 << i
                covers.append((name, subsets[other][1]))
    # subsets list is indexed by mask already
    return GradedPoset([name for _, name in subsets], covers)


def chain_poset(n):
    """A chain with n+1 elements (rank n)."""
    if n < 0:
        raise DomainError("chain length must be >= 0")
    els = ["c%d" % i for i in range(n + 1)]
    return GradedPoset(els, list(zip(els, els[1:])))
