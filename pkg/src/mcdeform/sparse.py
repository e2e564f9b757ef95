"""Sparse vectors as ``{label: Fraction}`` dicts with zero entries dropped."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, Mapping, Sequence

from .exactla import q

Vector = Dict[Hashable, Fraction]


def vec(mapping: Mapping = None) -> Vector:
    if not mapping:
        return {}
    return {k: q(v) for k, v in mapping.items() if q(v) != 0}


def add_into(acc: Vector, other: Mapping, scale=1) -> Vector:
    """In-place ``acc += scale * other``; returns ``acc``."""
    if not scale:
        return acc
    for k, v in other.items():
        nv = acc.get(k, 0) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def add(*vs: Mapping) -> Vector:
    acc: Vector = {}
    for v in vs:
        add_into(acc, v)
    return acc


def sub(a: Mapping, b: Mapping) -> Vector:
    return add_into(dict(a), b, -1)


def scale(v: Mapping, c) -> Vector:
    c = q(c)
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def lincomb(pairs: Iterable) -> Vector:
    acc: Vector = {}
    for c, v in pairs:
        add_into(acc, v, q(c))
    return acc


def to_dense(v: Mapping, labels: Sequence, index: Mapping = None) -> list:
    if index is None:
        index = {lab: i for i, lab in enumerate(labels)}
    out = [Fraction(0)] * len(labels)
    for k, x in v.items():
        try:
            out[index[k]] = x
        except KeyError:
            raise KeyError(f"label {k!r} is outside the given basis") from None
    return out


def from_dense(values: Sequence, labels: Sequence) -> Vector:
    return {lab: q(x) for lab, x in zip(labels, values) if x}
