"""Measure-theoretic vocabulary on representations: Plancherel measure,
reduced characters, lp norms with counting measure, and exact decomposition
of characters into irreducible multiplicities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import config
from .chartable import CharTable, ClassFunction


class DecompositionError(ValueError):
    """Input was not a genuine character (non-integer or negative weights)."""


@dataclass(eq=False)
class RepMultiset:
    """A representation as multiplicities over the irreducibles of a table."""

    table: CharTable
    mult: np.ndarray

    def __post_init__(self):
        self.mult = np.ascontiguousarray(self.mult, dtype=np.int64)
        if self.mult.shape != (self.table.num_irreps,):
            raise ValueError("multiplicity vector has wrong length")
        if self.mult.min(initial=0) < 0:
            raise ValueError("multiplicities must be non-negative")

    @property
    def is_zero(self) -> bool:
        return not self.mult.any()

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.mult))

    def support_mask(self) -> int:
        mask = 0
        for i in self.support():
            mask |= 1 << i
        return mask

    def to_json_dict(self) -> dict:
        return {"mult": self.mult.tolist()}

    @classmethod
    def from_support(cls, table: CharTable, support) -> "RepMultiset":
        mult = np.zeros(table.num_irreps, dtype=np.int64)
        for i in support:
            mult[int(i)] = 1
        return cls(table, mult)

    @classmethod
    def from_json_dict(cls, table: CharTable, doc: dict) -> "RepMultiset":
        return cls(table, np.asarray(doc["mult"], dtype=np.int64))


@dataclass(frozen=True)
class PlancherelMeasure:
    """M_G(lam) = dim(lam)^2 / |G| over the irreducibles of one table."""

    probs: tuple[float, ...]
    fracs: tuple[Fraction, ...]

    @classmethod
    def of(cls, table: CharTable) -> "PlancherelMeasure":
        n = table.group.order
        fracs = tuple(Fraction(int(d) ** 2, n) for d in table.dims)
        return cls(probs=tuple(float(f) for f in fracs), fracs=fracs)

    def as_array(self) -> np.ndarray:
        return np.array(self.probs)


def plancherel_frac(T: CharTable, V: RepMultiset) -> Fraction:
    """Exact Plancherel measure of the support of V."""
    n = T.group.order
    return sum((Fraction(int(T.dims[i]) ** 2, n) for i in V.support()),
               Fraction(0))


def plancherel(T: CharTable, V: RepMultiset) -> float:
    return float(plancherel_frac(T, V))


def reduced_character(T: CharTable, V: RepMultiset) -> ClassFunction:
    """(1/|G|) sum over the support of V of dim(lam) * chi_lam.

    Depends only on the support; its value at the identity is the Plancherel
    measure of V.
    """
    sup = list(V.support())
    vals = np.zeros(T.num_irreps, dtype=np.float64)
    vals[sup] = T.dims[sup]
    out = (vals @ T.values) / T.group.order
    return ClassFunction(T.group, T.classes, out)


def character_of(T: CharTable, V: RepMultiset) -> ClassFunction:
    """Ordinary character sum mult(lam) * chi_lam."""
    return ClassFunction(T.group, T.classes,
                         V.mult.astype(np.complex128) @ T.values)


def reduce_rep(V: RepMultiset) -> RepMultiset:
    """Replace each irreducible in the support by dim(lam) copies of itself."""
    mult = np.zeros_like(V.mult)
    sup = list(V.support())
    mult[sup] = V.table.dims[sup]
    return RepMultiset(V.table, mult)


def split_off_identity(f: ClassFunction) -> tuple[complex, ClassFunction]:
    """f = f(e) * 1_{g=e} + f0 with f0 vanishing on the identity class."""
    rest = f.values.copy()
    head = complex(rest[0])
    rest[0] = 0.0
    return head, f.copy_with(rest)


def lp_norm(f: ClassFunction, p) -> float:
    """lp norm with counting measure on group elements.

    Class values are weighted by class size; p may be 1, 2 or math.inf.
    """
    mags = np.abs(f.values)
    if p == math.inf or p == "inf":
        return float(mags.max(initial=0.0))
    sizes = f.classes.sizes.astype(np.float64)
    if p == 1:
        return float(np.sum(sizes * mags))
    if p == 2:
        return float(np.sqrt(np.sum(sizes * mags ** 2)))
    raise ValueError("p must be 1, 2 or inf")


def inner_product(f: ClassFunction, g: ClassFunction) -> complex:
    """<f, g> = (1/|G|) sum over elements of f * conj(g)."""
    if not f.same_basis(g):
        raise ValueError("class functions live on different groups")
    w = f.classes.sizes / f.group.order
    return complex(np.sum(w * f.values * np.conj(g.values)))


def tensor(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    if not f.same_basis(g):
        raise ValueError("class functions live on different groups")
    return f.copy_with(f.values * g.values)


def direct_sum(f: ClassFunction, g: ClassFunction) -> ClassFunction:
    if not f.same_basis(g):
        raise ValueError("class functions live on different groups")
    return f.copy_with(f.values + g.values)


def decompose(T: CharTable, f: ClassFunction, *, tol: float = config.TOL) -> RepMultiset:
    """Multiplicities <f, chi_lam>, certified to round to non-negative integers.

    Raises DecompositionError when f is not a genuine character of the group.
    """
    if f.classes is not T.classes:
        raise ValueError("class function does not match the table's group")
    w = T.classes.sizes / T.group.order
    raw = (w * f.values) @ T.values.conj().T
    mult = np.rint(raw.real).astype(np.int64)
    scale = np.maximum(1.0, np.abs(raw))
    err = np.max(np.abs(raw - mult) / scale)
    if err > tol:
        raise DecompositionError(
            f"inner products are not integers (residual {float(err):.2e})")
    if mult.min(initial=0) < 0:
        raise DecompositionError("negative multiplicity: not a character")
    return RepMultiset(T, mult)


def decomposition_residual(T: CharTable, f: ClassFunction) -> float:
    """Max distance of <f, chi_lam> from the nearest integer (quality metric)."""
    w = T.classes.sizes / T.group.order
    raw = (w * f.values) @ T.values.conj().T
    return float(np.max(np.abs(raw - np.rint(raw.real))))


# ---------------------------------------------------------------------------
# Support ("fusion") arithmetic, integer-exact


def fusion_multiplicities(T: CharTable, lam: int, mu: int) -> np.ndarray:
    """Multiplicity vector of lam (x) mu, cached on the table."""
    key = (min(lam, mu), max(lam, mu))
    cached = T._fusion_cache.get(key)
    if cached is None:
        prod = ClassFunction(T.group, T.classes, T.values[lam] * T.values[mu])
        cached = decompose(T, prod).mult
        T._fusion_cache[key] = cached
    return cached


def tensor_support_mask(T: CharTable, mask1: int, mask2: int) -> int:
    """Support of the tensor product of two supports, as a bitmask."""
    out = 0
    idx1 = [i for i in range(T.num_irreps) if mask1 >> i & 1]
    idx2 = [i for i in range(T.num_irreps) if mask2 >> i & 1]
    for a in idx1:
        for b in idx2:
            m = fusion_multiplicities(T, a, b)
            for c in np.flatnonzero(m):
                out |= 1 << int(c)
    return out


def power_support_mask(T: CharTable, mask: int, m: int) -> int:
    """Support of the m-fold tensor power of a support."""
    if m < 1:
        raise ValueError("tensor power must be >= 1")
    out = mask
    for _ in range(m - 1):
        out = tensor_support_mask(T, out, mask)
    return out


def mask_to_support(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return tuple(out)


def support_measure_frac(T: CharTable, mask: int) -> Fraction:
    n = T.group.order
    return sum((Fraction(int(T.dims[i]) ** 2, n) for i in mask_to_support(mask)),
               Fraction(0))


# ---------------------------------------------------------------------------
# CLI selectors


def rep_from_selector(T: CharTable, selector: str) -> RepMultiset:
    """Parse "all", "trivial", "irrep:<k>" or "dim>=<d>" into a RepMultiset."""
    s = selector.strip().lower()
    if s == "all":
        return RepMultiset(T, np.ones(T.num_irreps, dtype=np.int64))
    if s == "trivial":
        return RepMultiset.from_support(T, [0])
    if s.startswith("irrep:"):
        k = int(s.split(":", 1)[1])
        if not 0 <= k < T.num_irreps:
            raise ValueError(f"irrep index {k} out of range")
        return RepMultiset.from_support(T, [k])
    if s.startswith("dim>="):
        d = int(s[5:])
        return RepMultiset.from_support(
            T, [i for i in range(T.num_irreps) if T.dims[i] >= d])
    raise ValueError(f"unrecognized representation selector {selector!r}")
