"""Exact-integer polynomial kernels.

Noncommutative polynomials over the alphabets {a,b} and {c,d} are stored as
word -> coefficient dicts with arbitrary-precision integers.  The canonical
term order used everywhere (printing, equality of output, reduction pivots)
is total degree ascending, then lexicographic with a < b and c < d.  The
commutative side is a dense integer polynomial in x.
"""
from __future__ import annotations

import re

from .errors import DegreeTooHigh, DomainError, NotCdExpressible


class _WordPolynomial:
    """Shared arithmetic for word-indexed integer polynomials."""

    alphabet = ""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for word, coeff in terms.items():
                if any(ch not in self.alphabet for ch in word):
                    raise DomainError(
                        "word %r not over alphabet %r" % (word, self.alphabet))
                if coeff:
                    data[word] = data.get(word, 0) + coeff
                    if not data[word]:
                        del data[word]
        self.terms = data

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({"": 1})

    @classmethod
    def monomial(cls, word, coeff=1):
        return cls({word: coeff})

    # -- ring structure ------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        data = dict(self.terms)
        for word, coeff in other.terms.items():
            new = data.get(word, 0) + coeff
            if new:
                data[word] = new
            else:
                data.pop(word, None)
        return type(self)(data)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return type(self)({w: c * other for w, c in self.terms.items()})
        other = self._coerce(other)
        data = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                word = w1 + w2
                data[word] = data.get(word, 0) + c1 * c2
        return type(self)(data)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return self._coerce(other) * self

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, int):
            return type(self)({"": other})
        raise TypeError("cannot combine %r with %r" % (type(self), type(other)))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({"": other} if other else {})
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, tuple(self.sorted_terms())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ----------------------------------------------------

    @classmethod
    def word_degree(cls, word):
        return len(word)

    def _key(self, word):
        return (self.word_degree(word), word)

    def sorted_terms(self):
        """Terms in canonical order: degree ascending, then lex."""
        return sorted(self.terms.items(), key=lambda it: self._key(it[0]))

    @property
    def degree(self):
        """Largest word degree present, or -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(self.word_degree(w) for w in self.terms)

    def coefficient(self, word):
        return self.terms.get(word, 0)

    def homogeneous_part(self, degree):
        return type(self)({w: c for w, c in self.terms.items()
                           if self.word_degree(w) == degree})

    def is_homogeneous(self):
        degrees = {self.word_degree(w) for w in self.terms}
        return len(degrees) <= 1

    def map_words(self, images):
        """Apply the algebra map sending each letter to ``images[letter]``.

        ``images`` values may live in a different word algebra; the result is
        built in the class of the image polynomials.
        """
        target = type(next(iter(images.values())))
        out = target.zero()
        for word, coeff in self.terms.items():
            prod = target.one()
            for letter in word:
                prod = prod * images[letter]
            out = out + prod * coeff
        return out

    # -- text ------------------------------------------------------------

    def __str__(self):
        return format_word_poly(self)

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, format_word_poly(self))

    def to_json_obj(self):
        return {w: str(c) for w, c in self.sorted_terms()}

    @classmethod
    def from_json_obj(cls, obj):
        return cls({w: int(c) for w, c in obj.items()})


class AbPolynomial(_WordPolynomial):
    """Integer polynomial in the noncommuting letters a, b."""

    alphabet = "ab"
    __slots__ = ()


class CdPolynomial(_WordPolynomial):
    """Integer polynomial in the noncommuting letters c, d; deg d = 2."""

    alphabet = "cd"
    __slots__ = ()

    @classmethod
    def word_degree(cls, word):
        return word.count("c") + 2 * word.count("d")


def substitute(p, image_of_a, image_of_b):
    """Homomorphic substitution a -> image_of_a, b -> image_of_b."""
    if not p.terms:
        return AbPolynomial.zero()
    return p.map_words({"a": image_of_a, "b": image_of_b})


AB_A = AbPolynomial.monomial("a")
AB_B = AbPolynomial.monomial("b")
AB_C = AB_A + AB_B                       # a + b, the image of c
AB_D = AbPolynomial({"ab": 1, "ba": 1})  # ab + ba, the image of d


def expand_cd(p):
    """Expand a cd-polynomial into ab-letters via c -> a+b, d -> ab+ba."""
    if not p.terms:
        return AbPolynomial.zero()
    return p.map_words({"c": AB_C, "d": AB_D})


def _parse_least_word(word):
    """Parse an ab-word as the lex-least expansion of a cd-word.

    c expands lex-least to "a" and d to "ab", so reading left to right an
    "a" followed by "b" came from d and any other "a" from c.  A bare "b"
    cannot occur; returns None in that case.
    """
    out = []
    i = 0
    while i < len(word):
        if word[i] == "b":
            return None
        if i + 1 < len(word) and word[i + 1] == "b":
            out.append("d")
            i += 2
        else:
            out.append("c")
            i += 1
    return "".join(out)


def to_cd(p):
    """Rewrite an ab-polynomial in c = a+b, d = ab+ba.

    Triangular reduction on the lex-least surviving word.  Raises
    NotCdExpressible with the offending residual when no rewriting exists.
    """
    residual = AbPolynomial(dict(p.terms))
    out = {}
    while residual.terms:
        word, coeff = residual.sorted_terms()[0]
        cd_word = _parse_least_word(word)
        if cd_word is None:
            raise NotCdExpressible(residual)
        out[cd_word] = out.get(cd_word, 0) + coeff
        residual = residual - expand_cd(CdPolynomial.monomial(cd_word)) * coeff
    return CdPolynomial(out)


class TensorSum:
    """Integer combination of word (x) word tensors in normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            for pair, coeff in terms.items():
                if coeff:
                    data[pair] = data.get(pair, 0) + coeff
                    if not data[pair]:
                        del data[pair]
        self.terms = data

    def __add__(self, other):
        data = dict(self.terms)
        for pair, coeff in other.terms.items():
            new = data.get(pair, 0) + coeff
            if new:
                data[pair] = new
            else:
                data.pop(pair, None)
        return TensorSum(data)

    def __eq__(self, other):
        return isinstance(other, TensorSum) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "TensorSum(0)"
        bits = []
        for (w1, w2), coeff in self.sorted_terms():
            lhs = w1 or "1"
            rhs = w2 or "1"
            bits.append("%+d*%s(x)%s" % (coeff, lhs, rhs))
        return "TensorSum(%s)" % " ".join(bits)


def coproduct(p):
    """Deletion-of-one-letter coproduct, extended linearly.

    C(w_1...w_n) = sum_i w_1...w_{i-1} (x) w_{i+1}...w_n; C(1) = 0.
    """
    data = {}
    for word, coeff in p.terms.items():
        for i in range(len(word)):
            pair = (word[:i], word[i + 1:])
            data[pair] = data.get(pair, 0) + coeff
            if not data[pair]:
                del data[pair]
    return TensorSum(data)


def tensor_collapse(t, left, right):
    """Apply linear maps to both tensor legs and multiply in Z[x].

    ``left`` and ``right`` take a word to a UniPolynomial.
    """
    out = UniPolynomial.zero()
    for (w1, w2), coeff in t.terms.items():
        out = out + left(w1) * right(w2) * coeff
    return out


class UniPolynomial:
    """Dense integer polynomial in x; index = power."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def x_power(cls, k, coeff=1):
        return cls((0,) * k + (coeff,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPolynomial([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return UniPolynomial([c * other for c in self.coeffs])
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            if not ci:
                continue
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return UniPolynomial(out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k):
        out = UniPolynomial.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, UniPolynomial):
            return other
        if isinstance(other, int):
            return UniPolynomial((other,))
        raise TypeError("cannot combine UniPolynomial with %r" % type(other))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == ((other,) if other else ())
        if not isinstance(other, UniPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def truncate(self, m):
        """Drop all terms of degree larger than m."""
        return UniPolynomial(self.coeffs[:m + 1])

    def reverse(self, n):
        """x^n * p(1/x); requires deg p <= n."""
        if self.degree > n:
            raise DegreeTooHigh("degree %d exceeds reversal bound %d"
                                % (self.degree, n))
        padded = list(self.coeffs) + [0] * (n + 1 - len(self.coeffs))
        return UniPolynomial(padded[::-1])

    def is_palindrome(self, n):
        """True when p equals its own degree-n reversal."""
        if self.degree > n:
            return False
        return self == self.reverse(n)

    def __str__(self):
        return format_unipoly(self)

    def __repr__(self):
        return "UniPolynomial(%s)" % format_unipoly(self)

    def to_json_obj(self):
        return list(self.coeffs)

    @classmethod
    def from_json_obj(cls, obj):
        return cls(int(c) for c in obj)


def coefficientwise_leq(p, q):
    """True when every coefficient of p is <= the matching one of q.

    Works for word polynomials of the same class and for UniPolynomials;
    missing terms count as zero.
    """
    if isinstance(p, UniPolynomial):
        n = max(len(p.coeffs), len(q.coeffs))
        return all(p[i] <= q[i] for i in range(n))
    words = set(p.terms) | set(q.terms)
    return all(p.coefficient(w) <= q.coefficient(w) for w in words)


def is_nonnegative(p):
    """Every stored coefficient is >= 0."""
    if isinstance(p, UniPolynomial):
        return all(c >= 0 for c in p.coeffs)
    return all(c >= 0 for c in p.terms.values())


# -- text formats --------------------------------------------------------

def _format_word(word):
    """Compress single-letter runs with carets: "ccd" -> "c^2d"."""
    if not word:
        return "1"
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        out.append(word[i] if run == 1 else "%s^%d" % (word[i], run))
        i = j
    return "".join(out)


def _join_terms(bits):
    if not bits:
        return "0"
    head, *rest = bits
    text = head if not head.startswith("+") else head[1:].lstrip()
    for bit in rest:
        text += " " + bit[0] + " " + bit[1:].lstrip()
    return text


def format_word_poly(p):
    bits = []
    for word, coeff in p.sorted_terms():
        mag = abs(coeff)
        body = _format_word(word)
        if body == "1":
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = "%d*%s" % (mag, body)
        bits.append(("-" if coeff < 0 else "+") + piece)
    return _join_terms(bits)


def format_unipoly(p):
    bits = []
    for k, coeff in enumerate(p.coeffs):
        if not coeff:
            continue
        mag = abs(coeff)
        if k == 0:
            piece = str(mag)
        else:
            xpow = "x" if k == 1 else "x^%d" % k
            piece = xpow if mag == 1 else "%d*%s" % (mag, xpow)
        bits.append(("-" if coeff < 0 else "+") + piece)
    return _join_terms(bits)


_TERM_RE = re.compile(r"^(\d+)?(?:\s*\*\s*)?([a-zA-Z^0-9]*)$")


def _parse_word(body, alphabet):
    """Parse "c^2d" style word text; carets apply to single letters."""
    word = []
    i = 0
    while i < len(body):
        letter = body[i]
        if letter not in alphabet:
            raise DomainError("unexpected letter %r in %r" % (letter, body))
        i += 1
        power = 1
        if i < len(body) and body[i] == "^":
            i += 1
            j = i
            while j < len(body) and body[j].isdigit():
                j += 1
            if j == i:
                raise DomainError("missing exponent in %r" % body)
            power = int(body[i:j])
            i = j
        word.append(letter * power)
    return "".join(word)


def parse_word_poly(text, cls):
    """Parse the text format back into an Ab/CdPolynomial."""
    text = text.strip()
    if not text or text == "0":
        return cls.zero()
    chunks = re.split(r"(?=[+-])", text.replace(" ", ""))
    terms = {}
    for chunk in chunks:
        if not chunk:
            continue
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:]
        m = _TERM_RE.match(chunk)
        if not m:
            raise DomainError("cannot parse term %r" % chunk)
        coeff_text, body = m.groups()
        if body == "1" and coeff_text is None:
            coeff, word = 1, ""
        else:
            coeff = int(coeff_text) if coeff_text else 1
            word = _parse_word(body, cls.alphabet)
        terms[word] = terms.get(word, 0) + sign * coeff
    return cls(terms)


def parse_unipoly(text):
    """Parse "1 + 4*x + x^2" style text into a UniPolynomial."""
    text = text.strip()
    if not text or text == "0":
        return UniPolynomial.zero()
    chunks = re.split(r"(?=[+-])", text.replace(" ", ""))
    coeffs = {}
    for chunk in chunks:
        if not chunk:
            continue
        sign = 1
        if chunk[0] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:]
        m = re.match(r"^(\d+)?(?:\*)?(?:x(?:\^(\d+))?)?$", chunk)
        if not m or not chunk:
            raise DomainError("cannot parse term %r" % chunk)
        coeff_text, pow_text = m.groups()
        has_x = "x" in chunk
        coeff = int(coeff_text) if coeff_text else 1
        power = 0 if not has_x else (int(pow_text) if pow_text else 1)
        coeffs[power] = coeffs.get(power, 0) + sign * coeff
    size = max(coeffs) + 1 if coeffs else 0
    return UniPolynomial([coeffs.get(i, 0) for i in range(size)])


def kappa(p):
    """The algebra map with kappa(a) = x - 1, kappa(b) = 0."""
    out = UniPolynomial.zero()
    xm1 = UniPolynomial((-1, 1))
    for word, coeff in p.terms.items():
        if "b" in word:
            continue
        out = out + xm1 ** len(word) * coeff
    return out


def ab_words(degree):
    """All ab-words of the given length, lex order."""
    if degree < 0:
        return []
    words = [""]
    for _ in range(degree):
        words = [w + letter for w in words for letter in "ab"]
    return sorted(words)


def cd_words(degree):
    """All cd-words of the given degree (c counts 1, d counts 2)."""
    if degree < 0:
        return []
    if degree == 0:
        return [""]
    if degree == 1:
        return ["c"]
    return sorted(["c" + w for w in cd_words(degree - 1)]
                  + ["d" + w for w in cd_words(degree - 2)])
