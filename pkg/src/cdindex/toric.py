"""Toric g/h-polynomials, local h-polynomials of strong formal subdivisions,
and the coproduct morphisms from ab-polynomials to Z[x].

Conventions pinned here (and enforced by always-on identity assertions):
the g-polynomial is a function of a closed Eulerian interval, computed from
the symmetric toric h of the interval minus its top by first differences up
to half degree; the defining recursion for h sums g over closed lower
intervals.  The anchors g(B_n) = 1, h(B_{d+1} minus top) = 1 + x + ... +
x^d, and agreement with the classical simplicial h-vector all follow.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import (ConventionMismatch, IdentityViolated, NotLowerEulerian,
                     RequiresBounds)
from .ncpoly import UniPolynomial, coproduct, kappa, tensor_collapse
from . import poset as ps
from .subdivision import require_valid

_X_MINUS_1 = UniPolynomial((-1, 1))


def _require_lower_eulerian(p):
    if p.min_elt is None:
        raise NotLowerEulerian("toric h needs a poset with a minimum")
    if not p.is_lower_eulerian():
        raise NotLowerEulerian("some closed interval is not Eulerian")


class _ToricMemo:
    """g-polynomials of the closed intervals of one fixed poset."""

    __slots__ = ("p", "g_memo")

    def __init__(self, p):
        self.p = p
        self.g_memo = {}

    def g(self, lo, hi):
        key = (lo, hi)
        if key in self.g_memo:
            return self.g_memo[key]
        r = self.p.rank(hi) - self.p.rank(lo)
        if r == 0:
            out = UniPolynomial.one()
        else:
            heavy = self.toric_h(lo, hi)
            if not heavy.is_palindrome(r - 1):
                raise IdentityViolated(
                    "toric h of [%s, %s] is not symmetric; interval is not "
                    "Eulerian" % (lo, hi))
            half = (r - 1) // 2
            coeffs = [heavy[i] - heavy[i - 1] for i in range(half + 1)]
            out = UniPolynomial(coeffs)
            # the defining identity, with the toric h of the open part
            lhs = out.reverse(r) - out
            rhs = _X_MINUS_1 * heavy.reverse(r - 1)
            if lhs != rhs:
                raise IdentityViolated(
                    "g of [%s, %s] fails its defining identity" % (lo, hi))
        self.g_memo[key] = out
        return out

    def toric_h(self, lo, hi):
        """h of the half-open interval [lo, hi) as a rank r-1 poset."""
        r = self.p.rank(hi) - self.p.rank(lo)
        m = r - 1
        acc = UniPolynomial.zero()
        ilo, ihi = self.p.index(lo), self.p.index(hi)
        inside = ((self.p._up[ilo] | 1 << ilo)
                  & self.p._dn[ihi])
        for i in ps.GradedPoset._bits(inside):
            sigma = self.p.elements[i]
            rel = self.p.rank(sigma) - self.p.rank(lo)
            acc = acc + self.g(lo, sigma) * _X_MINUS_1 ** (m - rel)
        return acc.reverse(m)


def h_poly(p):
    """Toric h-polynomial of a lower Eulerian poset (all elements count)."""
    if not p.elements:
        return UniPolynomial.zero()
    _require_lower_eulerian(p)
    memo = _ToricMemo(p)
    n = p.top_rank
    lo = p.min_elt
    acc = UniPolynomial.zero()
    for sigma in p.elements:
        acc = acc + memo.g(lo, sigma) * _X_MINUS_1 ** (n - p.rank(sigma))
    return acc.reverse(n)


def g_poly(p):
    """Toric g-polynomial of an Eulerian poset."""
    p.require_bounds()
    _require_lower_eulerian(p)
    if not p.is_eulerian():
        raise NotLowerEulerian("g-polynomial needs an Eulerian poset")
    memo = _ToricMemo(p)
    return memo.g(p.min_elt, p.max_elt)


class _GeneralToric:
    """The h/g pair for arbitrary bounded graded posets.

    Same recursion as the Eulerian case, except g is read off by truncating
    (1 - x) h at half degree instead of by first differences; on Eulerian
    input the two agree.  This is the poset-side mirror of the coproduct
    morphisms, and is what makes f(Psi_P) = toric_h(P) hold with no
    Eulerian hypothesis.
    """

    __slots__ = ("p", "h_memo")

    def __init__(self, p):
        self.p = p
        self.h_memo = {}

    def h(self, lo, hi):
        key = (lo, hi)
        if key in self.h_memo:
            return self.h_memo[key]
        r = self.p.rank(hi) - self.p.rank(lo)
        acc = UniPolynomial.zero()
        if r >= 1:
            ilo, ihi = self.p.index(lo), self.p.index(hi)
            inside = (self.p._up[ilo] | 1 << ilo) & self.p._dn[ihi]
            for i in ps.GradedPoset._bits(inside):
                sigma = self.p.elements[i]
                rel = self.p.rank(sigma) - self.p.rank(lo)
                acc = acc + self.g(lo, sigma) * _X_MINUS_1 ** (r - 1 - rel)
        self.h_memo[key] = acc
        return acc

    def g(self, lo, hi):
        r = self.p.rank(hi) - self.p.rank(lo)
        if r == 0:
            return UniPolynomial.one()
        return ((UniPolynomial((1, -1)) * self.h(lo, hi))
                .truncate((r - 1) // 2))


def toric_h(p):
    """h of the poset minus its maximum; symmetric for Eulerian input.

    Defined for every graded poset with both bounds; coincides with the
    lower-Eulerian h of the poset minus its top whenever that applies.
    """
    p.require_bounds()
    if len(p.elements) == 1:
        return UniPolynomial.zero()
    return _GeneralToric(p).h(p.min_elt, p.max_elt)


@dataclass(frozen=True)
class ToricPair:
    """g and h of one Eulerian poset."""

    g: UniPolynomial
    h: UniPolynomial
    source: object
    rank: int


def toric_pair(p):
    p.require_bounds()
    return ToricPair(g=g_poly(p), h=toric_h(p), source=p, rank=p.top_rank)


# -- local h ------------------------------------------------------------------


@dataclass(frozen=True)
class LocalHTable:
    """Per-face local h-polynomials of a strong formal subdivision."""

    rows: tuple  # (sigma, UniPolynomial) pairs in (rank, id) order
    total: UniPolynomial

    def row(self, sigma):
        for s, poly in self.rows:
            if s == sigma:
                return poly
        raise KeyError(sigma)

    def nonzero_rows(self):
        return [(s, poly) for s, poly in self.rows if poly]


def local_h(m, jobs=1):
    """Local h-polynomials of every target face, two independent ways.

    The explicit alternating sum with dual-interval g-polynomials is
    computed per face and checked against solving the defining recursion
    bottom-up; a disagreement raises ConventionMismatch.
    """
    require_valid(m, "strong_formal")
    src, tgt = m.source, m.target
    if tgt.max_elt is None or tgt.min_elt is None:
        raise RequiresBounds("local h needs a bounded target")
    if not tgt.is_eulerian():
        raise NotLowerEulerian("local h needs an Eulerian target")
    _require_lower_eulerian(src)
    tmemo = _ToricMemo(tgt)
    sigmas = sorted(tgt.elements, key=lambda s: (tgt.rank(s), s))

    def restricted_h(sigma):
        return sigma, h_poly(src.induced(m.preimage_ideal_ids(sigma)))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            h_of = dict(pool.map(restricted_h, sigmas))
    else:
        h_of = dict(restricted_h(s) for s in sigmas)

    explicit = {}
    for sigma in sigmas:
        acc = UniPolynomial.zero()
        for tau in tgt.down_set(sigma, strict=False):
            sign = (-1) ** (tgt.rank(sigma) - tgt.rank(tau))
            gdual = g_poly(ps.dual(tgt.interval(tau, sigma)))
            acc = acc + h_of[tau] * gdual * sign
        explicit[sigma] = acc

    solved = {}
    for sigma in sigmas:
        acc = h_of[sigma]
        for tau in tgt.down_set(sigma, strict=True):
            acc = acc - solved[tau] * tmemo.g(tau, sigma)
        solved[sigma] = acc
        if solved[sigma] != explicit[sigma]:
            raise ConventionMismatch(
                "local h at %s: recursion gives %s, explicit form gives %s"
                % (sigma, solved[sigma], explicit[sigma]))

    rows = tuple((s, solved[s]) for s in sigmas)
    return LocalHTable(rows=rows, total=h_of[tgt.max_elt])


# -- the ab -> Z[x] morphisms ---------------------------------------------------


_F_MEMO = {"": UniPolynomial.one()}
_G_MEMO = {"": UniPolynomial.one()}


def _f_word(word):
    if word in _F_MEMO:
        return _F_MEMO[word]
    out = kappa_word(word)
    for i in range(len(word)):
        out = out + _g_word(word[:i]) * kappa_word(word[i + 1:])
    _F_MEMO[word] = out
    return out


def _g_word(word):
    if word in _G_MEMO:
        return _G_MEMO[word]
    out = ((1 - UniPolynomial.x()) * _f_word(word)).truncate(len(word) // 2)
    _G_MEMO[word] = out
    return out


def kappa_word(word):
    if "b" in word:
        return UniPolynomial.zero()
    return _X_MINUS_1 ** len(word)


def morphism_f(p):
    """Linear map with f(Psi_P) = toric h of P, via the coproduct recursion."""
    out = UniPolynomial.zero()
    for word, coeff in p.terms.items():
        out = out + _f_word(word) * coeff
    return out


def morphism_g(p):
    """Companion map with g(Psi_P) = toric g of P."""
    out = UniPolynomial.zero()
    for word, coeff in p.terms.items():
        out = out + _g_word(word) * coeff
    return out


def morphism_f_by_coproduct(p):
    """Oracle form of morphism_f written through the tensor machinery."""
    return kappa(p) + tensor_collapse(
        coproduct(p), lambda w: _g_word(w), kappa_word)


# -- correspondence with the cd decomposition ------------------------------------


@dataclass(frozen=True)
class CorrespondenceReport:
    rows: tuple          # (sigma, f(local ab), local h) triples
    rows_agree: bool
    top_identity: object   # Psi(source) = sum local-ab * Psi(upper); None
    bottom_identity: object  # toric h version; None when source unbounded

    def ok(self):
        return (self.rows_agree and self.top_identity is not False
                and self.bottom_identity is not False)


def verify_local_correspondence(m):
    """Check that the ab-level decomposition maps onto the local h one.

    Row by row, f applied to the local ab-index of the capped preimage must
    reproduce the local h-polynomial.  When both posets carry a formal
    maximum (sphere-style maps), the maximum's row is reported but excluded
    from the verdict: the ab-side local index of a capped identity is zero
    while the h-side row absorbs the balance of the defining recursion, and
    the two only cancel inside the summed identities.  When the source
    poset is bounded the summed decomposition identities are checked on
    both levels too (they need an ab-index of the source, hence a maximum).
    """
    from .flagcd import ab_index, local_index
    from .subdivision import _sigma_hat
    require_valid(m, "strong_eulerian")
    src, tgt = m.source, m.target
    table = local_h(m)
    formal_top = tgt.max_elt if src.max_elt is not None else None
    rows = []
    agree = True
    for sigma, ell in table.rows:
        li = local_index(_sigma_hat(m, sigma))
        image = morphism_f(li.ab)
        rows.append((sigma, image, ell))
        if sigma != formal_top:
            agree = agree and image == ell

    top = bottom = None
    if src.max_elt is not None and src.min_elt is not None:
        psi_total = 0
        h_total = UniPolynomial.zero()
        for sigma, _ in table.rows:
            li = local_index(_sigma_hat(m, sigma))
            upper = tgt.interval(sigma, tgt.max_elt)
            psi_total = li.ab * ab_index(upper) + psi_total
            if sigma != tgt.max_elt:
                h_total = h_total + table.row(sigma) * toric_h(upper)
        top = psi_total == ab_index(src)
        bottom = h_total == toric_h(src)
    return CorrespondenceReport(tuple(rows), agree, top, bottom)
