"""Polynomial differential forms on standard simplices.

A form on the n-simplex is stored in the coordinates t_1..t_n (t_0 = 1 - sum
is eliminated) as ``{(exponents, word): coeff}`` where ``word`` is a strictly
increasing tuple of indices of dt_i. Every operation that would produce a
polynomial of degree above the bound ``D`` raises :class:`DegreeOverflow`.

Face i omits vertex i: its pullback sets barycentric coordinate t_i to zero
and renumbers the rest.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, Mapping, Sequence, Tuple

from . import sparse
from .errors import DegreeOverflow
from .exactla import q

DEFAULT_DEGREE_BOUND = 8

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _merge_words(u: Tuple[int, ...], w: Tuple[int, ...]):
    """Sign and sorted concatenation of two dt-words, or (0, None) if they overlap."""
    if set(u) & set(w):
        return 0, None
    inversions = sum(1 for a in u for b in w if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(u + w))


def mul_monomials(a: Monomial, b: Monomial, bound: int):
    (ea, wa), (eb, wb) = a, b
    sign, word = _merge_words(wa, wb)
    if not sign:
        return None, 0
    exps = tuple(x + y for x, y in zip(ea, eb))
    if sum(exps) > bound:
        raise DegreeOverflow(f"product has polynomial degree {sum(exps)} > bound {bound}")
    return (exps, word), sign


def d_monomial(a: Monomial) -> Dict[Monomial, Fraction]:
    exps, word = a
    out = {}
    for i, e in enumerate(exps):
        if not e:
            continue
        sign, w = _merge_words((i + 1,), word)
        if not sign:
            continue
        lowered = exps[:i] + (e - 1,) + exps[i + 1:]
        out[(lowered, w)] = Fraction(sign * e)
    return out


class SullivanForm:
    """An element of Omega_n with polynomial degree at most ``bound``."""

    __slots__ = ("n", "bound", "terms")

    def __init__(self, n: int, terms: Mapping = None, bound: int = DEFAULT_DEGREE_BOUND):
        self.n = n
        self.bound = bound
        clean = {}
        for (exps, word), c in (terms or {}).items():
            exps, word = tuple(exps), tuple(word)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not have length {n}")
            if list(word) != sorted(set(word)) or any(not 1 <= i <= n for i in word):
                raise ValueError(f"dt-word {word} must be strictly increasing in 1..{n}")
            if sum(exps) > bound:
                raise DegreeOverflow(f"term of polynomial degree {sum(exps)} exceeds bound {bound}")
            c = q(c)
            if c:
                clean[(exps, word)] = clean.get((exps, word), 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    # constructors
    @classmethod
    def constant(cls, n, c=1, bound=DEFAULT_DEGREE_BOUND):
        return cls(n, {((0,) * n, ()): c}, bound)

    @classmethod
    def coordinate(cls, n, i, bound=DEFAULT_DEGREE_BOUND):
        """Barycentric coordinate t_i, i in 0..n (t_0 = 1 - t_1 - ... - t_n)."""
        if i == 0:
            terms = {((0,) * n, ()): 1}
            for j in range(n):
                terms[(tuple(int(k == j) for k in range(n)), ())] = -1
            return cls(n, terms, bound)
        return cls(n, {(tuple(int(k == i - 1) for k in range(n)), ()): 1}, bound)

    @classmethod
    def dt(cls, n, i, bound=DEFAULT_DEGREE_BOUND):
        return omega_d(cls.coordinate(n, i, bound))

    # algebra
    def _like(self, terms):
        return SullivanForm(self.n, terms, self.bound)

    def __add__(self, other):
        self._check(other)
        return self._like(sparse.add(self.terms, other.terms))

    def __sub__(self, other):
        self._check(other)
        return self._like(sparse.sub(self.terms, other.terms))

    def __neg__(self):
        return self._like(sparse.scale(self.terms, -1))

    def scale(self, c):
        return self._like(sparse.scale(self.terms, c))

    def __mul__(self, other):
        if isinstance(other, SullivanForm):
            return wedge(self, other)
        return self.scale(other)

    __rmul__ = scale

    def _check(self, other):
        if not isinstance(other, SullivanForm) or other.n != self.n:
            raise ValueError("forms live on different simplices")

    def __eq__(self, other):
        if not isinstance(other, SullivanForm):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"SullivanForm(n={self.n}, {format_form(self)})"

    @property
    def degree(self):
        degs = {len(w) for _, w in self.terms}
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs.pop() if degs else 0

    @property
    def poly_degree(self):
        return max((sum(e) for e, _ in self.terms), default=0)

    def constant_value(self) -> Fraction:
        if self.n != 0:
            raise ValueError("only forms on the 0-simplex are constants")
        return self.terms.get(((), ()), Fraction(0))


def omega_d(w: SullivanForm) -> SullivanForm:
    acc: dict = {}
    for mono, c in w.terms.items():
        sparse.add_into(acc, d_monomial(mono), c)
    return SullivanForm(w.n, acc, w.bound)


def wedge(u: SullivanForm, w: SullivanForm) -> SullivanForm:
    if u.n != w.n:
        raise ValueError("forms live on different simplices")
    bound = min(u.bound, w.bound)
    acc: dict = {}
    for a, ca in u.terms.items():
        for b, cb in w.terms.items():
            mono, sign = mul_monomials(a, b, bound)
            if sign:
                sparse.add_into(acc, {mono: ca * cb}, sign)
    return SullivanForm(u.n, acc, bound)


def pullback(w: SullivanForm, images: Sequence[SullivanForm]) -> SullivanForm:
    """Substitute t_j -> images[j-1] (0-forms on a common simplex) and dt_j -> d(images[j-1])."""
    if len(images) != w.n:
        raise ValueError("one image per coordinate required")
    if not images:
        raise ValueError("target simplex unknown for a form on the 0-simplex")
    m, bound = images[0].n, images[0].bound
    diffs = [omega_d(x) for x in images]
    one = SullivanForm.constant(m, 1, bound)
    out = SullivanForm(m, {}, bound)
    for (exps, word), c in w.terms.items():
        term = one
        for j, e in enumerate(exps):
            for _ in range(e):
                term = wedge(term, images[j])
        for j in word:
            term = wedge(term, diffs[j - 1])
        out = out + term.scale(c)
    return out


def face_map(i: int, w: SullivanForm) -> SullivanForm:
    """Pullback along the i-th coface Delta^{n-1} -> Delta^n."""
    n = w.n
    if not 0 <= i <= n or n == 0:
        raise ValueError(f"face index {i} invalid on the {n}-simplex")
    images = []
    for j in range(1, n + 1):
        if j < i:
            images.append(SullivanForm.coordinate(n - 1, j, w.bound))
        elif j == i:
            images.append(SullivanForm(n - 1, {}, w.bound))
        else:
            images.append(SullivanForm.coordinate(n - 1, j - 1, w.bound))
    return pullback(w, images)


def degeneracy_map(i: int, w: SullivanForm) -> SullivanForm:
    """Pullback along the i-th codegeneracy Delta^{n+1} -> Delta^n."""
    n = w.n
    if not 0 <= i <= n:
        raise ValueError(f"degeneracy index {i} invalid on the {n}-simplex")
    if n == 0:
        return SullivanForm(1, {((0,), ()): w.constant_value()}, w.bound)
    images = []
    for j in range(1, n + 1):
        if j < i:
            images.append(SullivanForm.coordinate(n + 1, j, w.bound))
        elif j == i:
            images.append(SullivanForm.coordinate(n + 1, j, w.bound) + SullivanForm.coordinate(n + 1, j + 1, w.bound))
        else:
            images.append(SullivanForm.coordinate(n + 1, j + 1, w.bound))
    return pullback(w, images)


def restrict_to_point(w: SullivanForm, coords: Sequence) -> Fraction:
    """Value of the 0-form part at the point (t_1, ..., t_n) = coords."""
    if len(coords) != w.n:
        raise ValueError("one coordinate per variable required")
    coords = [q(c) for c in coords]
    acc = Fraction(0)
    for (exps, word), c in w.terms.items():
        if word:
            continue
        v = c
        for x, e in zip(coords, exps):
            v *= x ** e
        acc += v
    return acc


def format_monomial(mono: Monomial) -> str:
    exps, word = mono
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"t{i + 1}")
        elif e > 1:
            parts.append(f"t{i + 1}^{e}")
    poly = "*".join(parts) or "1"
    if word:
        return poly + " " + "^".join(f"dt{i}" for i in word)
    return poly


def format_form(w: SullivanForm) -> str:
    return " + ".join(f"{c}*[{format_monomial(m)}]" for m, c in sorted(w.terms.items())) or "0"


class FormsAlgebra:
    """Omega_n truncated at polynomial degree ``bound``, as a basis-level CDGA.

    Products that exceed the bound raise rather than truncate, so anything
    computed through this algebra is exact.
    """

    unital = True

    def __init__(self, n: int, bound: int = DEFAULT_DEGREE_BOUND):
        self.n = n
        self.bound = bound
        self.unit = ((0,) * n, ())
        self._labels = None

    @property
    def labels(self):
        if self._labels is None:
            self._labels = list(self._iter_labels())
        return self._labels

    def _iter_labels(self) -> Iterator[Monomial]:
        words = [w for k in range(self.n + 1) for w in combinations(range(1, self.n + 1), k)]
        for total in range(self.bound + 1):
            for exps in _compositions(total, self.n):
                for w in words:
                    yield (exps, w)

    def degree(self, a: Monomial) -> int:
        return len(a[1])

    def mul(self, a, b):
        mono, sign = mul_monomials(a, b, self.bound)
        return {mono: Fraction(sign)} if sign else {}

    def d(self, a):
        return d_monomial(a)

    def nilpotency_index(self):
        return None

    def format_label(self, a):
        return format_monomial(a)

    def __eq__(self, other):
        return isinstance(other, FormsAlgebra) and (self.n, self.bound) == (other.n, other.bound)

    def __hash__(self):
        return hash((self.n, self.bound))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
