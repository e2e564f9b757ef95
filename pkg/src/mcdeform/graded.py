"""Graded vector spaces, cochain complexes and Hom complexes.

Differentials raise degree by one. ``ChainComplex.differential[i]`` is the
matrix of d^i : C^i -> C^{i+1}; columns index the source basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Mapping, Sequence, Tuple

from .errors import ShapeMismatch
from .exactla import QMatrix, q, rank
from .validation import ValidationReport


def koszul(n: int) -> int:
    """(-1)^n."""
    return -1 if n % 2 else 1


@dataclass(frozen=True)
class GradedVectorSpace:
    components: Dict[int, Tuple[Hashable, ...]]

    def __post_init__(self):
        clean = {}
        for deg in sorted(self.components):
            labels = tuple(self.components[deg])
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate labels in degree {deg}")
            if labels:
                clean[int(deg)] = labels
        object.__setattr__(self, "components", clean)

    def dim(self, i: int) -> int:
        return len(self.components.get(i, ()))

    def basis(self, i: int) -> Tuple[Hashable, ...]:
        return self.components.get(i, ())

    @property
    def degrees(self):
        return sorted(self.components)

    def total_dim(self) -> int:
        return sum(len(v) for v in self.components.values())


@dataclass(frozen=True)
class ChainComplex:
    space: GradedVectorSpace
    differential: Dict[int, QMatrix] = field(default_factory=dict)

    @classmethod
    def from_maps(cls, components: Mapping[int, Sequence], d: Mapping = None) -> "ChainComplex":
        """Build from ``d[(degree, label)] = {target_label: coeff}``."""
        space = GradedVectorSpace(dict(components))
        d = d or {}
        known = {(i, lab) for i in space.degrees for lab in space.basis(i)}
        for key, image in d.items():
            if key not in known:
                raise ShapeMismatch(f"differential given on unknown generator {key!r}")
            i = key[0]
            for t in image:
                if (i + 1, t) not in known:
                    raise ShapeMismatch(f"d{key!r} has component on {t!r}, not a degree-{i + 1} generator")
        mats = {}
        for i in space.degrees:
            src, tgt = space.basis(i), space.basis(i + 1)
            if not tgt:
                continue
            index = {lab: r for r, lab in enumerate(tgt)}
            rows = [[Fraction(0)] * len(src) for _ in tgt]
            for c, lab in enumerate(src):
                for t, v in d.get((i, lab), {}).items():
                    rows[index[t]][c] += q(v)
            mat = QMatrix(len(tgt), len(src), rows)
            if not mat.is_zero():
                mats[i] = mat
        return cls(space, mats)

    @classmethod
    def zero_differential(cls, components: Mapping[int, Sequence]) -> "ChainComplex":
        return cls(GradedVectorSpace(dict(components)), {})

    def d(self, i: int) -> QMatrix:
        """Matrix of d^i (zero when not stored)."""
        mat = self.differential.get(i)
        if mat is None:
            return QMatrix.zeros(self.space.dim(i + 1), self.space.dim(i))
        return mat

    @property
    def degrees(self):
        return self.space.degrees

    def dim(self, i: int) -> int:
        return self.space.dim(i)

    def window(self):
        degs = self.degrees
        return (degs[0], degs[-1]) if degs else (0, -1)


def validate_complex(C: ChainComplex) -> ValidationReport:
    for i, mat in sorted(C.differential.items()):
        want = (C.dim(i + 1), C.dim(i))
        if mat.shape != want:
            raise ShapeMismatch(f"d^{i} has shape {mat.shape}, expected {want}")
    for i in C.degrees:
        if i not in C.differential or (i + 1) not in C.differential:
            continue
        prod = C.d(i + 1) @ C.d(i)
        hit = prod.first_nonzero()
        if hit is not None:
            r, c, v = hit
            src = C.space.basis(i)[c]
            tgt = C.space.basis(i + 2)[r]
            return ValidationReport.fail(
                "d_squared", (i, src, tgt),
                f"d^{i + 1} d^{i} sends {src!r} to {v} * {tgt!r}")
    return ValidationReport.ok()


def homology_dim(C: ChainComplex, i: int) -> int:
    n = C.dim(i)
    if n == 0:
        return 0
    out = rank(C.d(i)) if C.dim(i + 1) else 0
    incoming = rank(C.d(i - 1)) if C.dim(i - 1) else 0
    return n - out - incoming


def euler_characteristic(C: ChainComplex) -> int:
    return sum(koszul(i) * C.dim(i) for i in C.degrees)


def hom_basis(A: ChainComplex, B: ChainComplex, k: int):
    """Labels ``(i, a, i + k, b)`` of elementary maps A^i -> B^{i+k}."""
    out = []
    for i in A.degrees:
        for a in A.space.basis(i):
            for b in B.space.basis(i + k):
                out.append((i, a, i + k, b))
    return out


def _hom_differential(A: ChainComplex, B: ChainComplex, lab):
    """D(e) = d_B e - (-1)^|e| e d_A for an elementary map, as a sparse dict."""
    i, a, j, b = lab
    k = j - i
    out: Dict[tuple, Fraction] = {}
    if B.dim(j + 1):
        dB = B.d(j)
        col = B.space.basis(j).index(b)
        for r, tgt in enumerate(B.space.basis(j + 1)):
            v = dB[r, col]
            if v:
                out[(i, a, j + 1, tgt)] = out.get((i, a, j + 1, tgt), 0) + v
    if A.dim(i - 1):
        dA = A.d(i - 1)
        row = A.space.basis(i).index(a)
        s = -koszul(k)
        for c, src in enumerate(A.space.basis(i - 1)):
            v = dA[row, c]
            if v:
                key = (i - 1, src, j, b)
                out[key] = out.get(key, 0) + s * v
    return {key: v for key, v in out.items() if v}


def hom_complex(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """Hom(A, B) with differential D(f) = d_B f - (-1)^|f| f d_A."""
    lo = min(B.degrees, default=0) - max(A.degrees, default=0)
    hi = max(B.degrees, default=0) - min(A.degrees, default=0)
    components = {k: hom_basis(A, B, k) for k in range(lo, hi + 1)}
    d = {}
    for k, labels in components.items():
        for lab in labels:
            img = _hom_differential(A, B, lab)
            if img:
                d[(k, lab)] = img
    return ChainComplex.from_maps(components, d)


def end_complex(A: ChainComplex) -> ChainComplex:
    return hom_complex(A, A)


@dataclass(frozen=True)
class GradedMap:
    """A homogeneous linear map of a given degree between two complexes."""

    source: ChainComplex
    target: ChainComplex
    degree: int
    blocks: Dict[int, QMatrix]

    def __post_init__(self):
        for i, mat in self.blocks.items():
            want = (self.target.dim(i + self.degree), self.source.dim(i))
            if mat.shape != want:
                raise ShapeMismatch(f"block at degree {i} has shape {mat.shape}, expected {want}")

    def block(self, i: int) -> QMatrix:
        return self.blocks.get(i) or QMatrix.zeros(self.target.dim(i + self.degree), self.source.dim(i))

    def as_hom_element(self) -> dict:
        """Coordinates in the elementary-map basis of hom_complex(source, target)."""
        out = {}
        for i, mat in self.blocks.items():
            src = self.source.space.basis(i)
            tgt = self.target.space.basis(i + self.degree)
            for r, b in enumerate(tgt):
                for c, a in enumerate(src):
                    if mat[r, c]:
                        out[(i, a, i + self.degree, b)] = mat[r, c]
        return out
