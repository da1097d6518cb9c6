"""Complex character tables via simultaneous diagonalization of the class
multiplication matrices, plus induced characters and a JSON interchange
format for cross-checking against external systems.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import config
from .groups import ClassData, GroupTable, GroupError, build_group, conjugacy_classes


class CharTableError(RuntimeError):
    """Raised when a character table cannot be computed or certified."""


@dataclass(eq=False)
class ClassFunction:
    """A complex function on conjugacy classes of a fixed group."""

    group: GroupTable
    classes: ClassData
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.classes.num_classes,):
            raise ValueError("class function has wrong length")

    def at_identity(self) -> complex:
        return complex(self.values[0])

    def same_basis(self, other: "ClassFunction") -> bool:
        return self.classes is other.classes

    def copy_with(self, values) -> "ClassFunction":
        return ClassFunction(self.group, self.classes, values)


@dataclass(eq=False)
class CharTable:
    """Irreducible characters of a finite group.

    Rows are irreducibles in canonical order (trivial first, then by
    dimension, then lexicographically on rounded values); columns follow the
    canonical conjugacy-class order. values[l, c] = chi_l on class c.
    """

    group: GroupTable
    classes: ClassData
    dims: np.ndarray
    values: np.ndarray
    quality: dict = field(default_factory=dict)
    source: str = "computed"
    _fusion_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.dims = np.ascontiguousarray(self.dims, dtype=np.int64)
        self.values = np.ascontiguousarray(self.values, dtype=np.complex128)
        self.dims.setflags(write=False)
        self.values.setflags(write=False)

    @property
    def num_irreps(self) -> int:
        return len(self.dims)

    def irrep_character(self, lam: int) -> ClassFunction:
        return ClassFunction(self.group, self.classes, self.values[lam].copy())

    def class_weights(self) -> np.ndarray:
        return self.classes.sizes / self.group.order

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        """<f, g> = (1/|G|) sum_g f conj(g), via class sizes."""
        return complex(np.sum(self.class_weights() * np.asarray(f) * np.conj(g)))

    def __repr__(self):
        return f"CharTable(order={self.group.order}, dims={self.dims.tolist()})"


# ---------------------------------------------------------------------------
# Class multiplication matrices


def class_multiplication_matrix(G: GroupTable, C: ClassData, i: int) -> np.ndarray:
    """M_i[j][k] = #{(x, y) in C_i x C_j : x*y = z} for a fixed z in C_k.

    The count is verified to be independent of the chosen z.
    """
    r = C.num_classes
    n = G.order
    per_z = np.zeros((r, n), dtype=np.int64)
    cl = C.class_of
    for x in C.classes[i]:
        np.add.at(per_z, (cl, G.mul[x]), 1)
    M = np.zeros((r, r), dtype=np.int64)
    for k in range(r):
        block = per_z[:, C.classes[k]]
        if not np.all(block == block[:, :1]):
            raise CharTableError("class product count depends on representative")
        M[:, k] = block[:, 0]
    return M


def _combined_class_matrix(G: GroupTable, C: ClassData, coeffs: np.ndarray) -> np.ndarray:
    """sum_i coeffs[i] * M_i without materializing the full r^3 tensor."""
    r = C.num_classes
    cl = C.class_of
    acc = np.zeros((r, r), dtype=np.float64)
    w = coeffs[cl]
    for x in range(G.order):
        np.add.at(acc, (cl, cl[G.mul[x]]), w[x])
    return acc / C.sizes[None, :]


# ---------------------------------------------------------------------------
# Burnside eigenvector method


def compute_char_table(G: GroupTable, C: ClassData | None = None, *,
                       tol: float = config.TOL, seed: int = 0,
                       max_attempts: int = config.MAX_EIG_ATTEMPTS) -> CharTable:
    """Compute the full character table of G.

    A random real recombination of the class multiplication matrices is
    diagonalized; each eigenvector, scaled to 1 on the identity class, is the
    vector of normalized class sums of one irreducible. Eigenvalue collisions
    trigger a retry with a fresh seed, and the finished table is certified by
    orthogonality and exact integer dimension checks before it is returned.
    """
    if G.order > config.CHARTABLE_CAP:
        raise CharTableError(
            f"order {G.order} exceeds CHARTABLE_CAP={config.CHARTABLE_CAP}")
    if C is None:
        C = conjugacy_classes(G)
    r = C.num_classes
    n = G.order
    sizes = C.sizes.astype(np.float64)

    last_error = None
    for attempt in range(max_attempts):
        rng = np.random.default_rng(seed + attempt)
        coeffs = rng.uniform(1.0, 2.0, r)
        Mc = _combined_class_matrix(G, C, coeffs)
        eigvals, eigvecs = np.linalg.eig(Mc)
        if r > 1:
            diff = np.abs(eigvals[:, None] - eigvals[None, :])
            np.fill_diagonal(diff, np.inf)
            if diff.min() < config.EIG_COLLISION:
                last_error = f"eigenvalue collision (gap {diff.min():.2e})"
                continue
        if np.any(np.abs(eigvecs[0]) < 1e-12):
            last_error = "degenerate eigenvector at identity class"
            continue
        vecs = eigvecs / eigvecs[0]
        norms = np.sum(np.abs(vecs) ** 2 / sizes[:, None], axis=0)
        dims_f = np.sqrt(n / norms)
        chars = (dims_f[None, :] * vecs / sizes[:, None]).T  # rows = irreps

        dims_i = np.rint(dims_f).astype(np.int64)
        dim_err = float(np.max(np.abs(dims_f - dims_i) / np.maximum(1.0, dims_f)))
        if dim_err > tol or np.any(dims_i < 1) or int(np.sum(dims_i ** 2)) != n:
            last_error = f"dimension certification failed (err {dim_err:.2e})"
            continue

        order_key = _canonical_irrep_order(chars, dims_i)
        chars = chars[order_key]
        dims_i = dims_i[order_key]

        weights = sizes / n
        gram = (chars * weights[None, :]) @ chars.conj().T
        row_res = float(np.max(np.abs(gram - np.eye(r))))
        col = chars.conj().T @ chars
        col_target = np.diag(n / sizes)
        col_res = float(np.max(np.abs((col - col_target) * (sizes[None, :] / n))))
        if row_res > tol or col_res > tol:
            last_error = f"orthogonality residual too large ({row_res:.2e}/{col_res:.2e})"
            continue

        quality = {"row_residual": row_res, "col_residual": col_res,
                   "dim_roundoff": dim_err, "attempts": attempt + 1,
                   "seed": seed}
        return CharTable(group=G, classes=C, dims=dims_i, values=chars,
                         quality=quality)
    raise CharTableError(
        f"character table not certified after {max_attempts} attempts: {last_error}")


def _canonical_irrep_order(chars: np.ndarray, dims: np.ndarray) -> list[int]:
    def key(lam):
        row = chars[lam]
        rounded = tuple((round(float(v.real), 8), round(float(v.imag), 8)) for v in row)
        is_trivial = all(abs(v - 1.0) < 1e-6 for v in row)
        return (0 if is_trivial else 1, int(dims[lam]), rounded)
    return sorted(range(len(dims)), key=key)


# ---------------------------------------------------------------------------
# Induction


def induce_character(G: GroupTable, C: ClassData, subgroup_members,
                     theta) -> ClassFunction:
    """Induce a class function from a subgroup H up to G.

    `theta` maps H elements to complex values: a dict {element: value} or a
    sequence aligned with sorted(subgroup_members). The induced function is
    (1/|H|) sum_{g in G} theta0(g^-1 x g) with theta0 = theta on H, 0 outside.
    """
    members = sorted(int(m) for m in subgroup_members)
    mset = set(members)
    if G.identity not in mset:
        raise GroupError("subgroup must contain the identity")
    arr = np.fromiter(members, dtype=np.int64)
    if not set(np.unique(G.mul[np.ix_(arr, arr)]).tolist()) <= mset:
        raise GroupError("induction source is not a subgroup")

    by_elem = np.zeros(G.order, dtype=np.complex128)
    if isinstance(theta, dict):
        if set(theta) != mset:
            raise GroupError("theta must be defined exactly on the subgroup")
        for m, v in theta.items():
            by_elem[int(m)] = v
    else:
        vals = list(theta)
        if len(vals) != len(members):
            raise GroupError("theta length does not match subgroup order")
        by_elem[arr] = vals
    in_h = np.zeros(G.order, dtype=bool)
    in_h[arr] = True

    out = np.zeros(C.num_classes, dtype=np.complex128)
    for c, rep in enumerate(C.representatives):
        conj = G.mul[G.mul[:, int(rep)], G.inv]
        out[c] = by_elem[conj].sum() / len(members)
    return ClassFunction(G, C, out)


def restrict_character(G: GroupTable, C: ClassData, f: ClassFunction,
                       subgroup_members) -> dict[int, complex]:
    """Restriction of a class function of G to a subgroup, element by element."""
    return {int(m): complex(f.values[C.class_of[int(m)]])
            for m in subgroup_members}


# ---------------------------------------------------------------------------
# Interchange format


def to_interchange(T: CharTable) -> dict:
    return {
        "group": T.group.source,
        "class_sizes": T.classes.sizes.tolist(),
        "class_reps": T.classes.representatives.tolist(),
        "dims": T.dims.tolist(),
        "values": [[[float(v.real), float(v.imag)] for v in row] for row in T.values],
    }


def from_interchange(doc: dict, *, tol: float = config.TOL,
                     group: GroupTable | None = None) -> CharTable:
    """Rebuild a CharTable from its interchange form, revalidating everything."""
    G = group if group is not None else build_group(doc["group"])
    C = conjugacy_classes(G)
    if C.sizes.tolist() != list(doc["class_sizes"]):
        raise CharTableError("imported class sizes disagree with canonical order")
    if C.representatives.tolist() != list(doc["class_reps"]):
        raise CharTableError("imported class representatives disagree")
    dims = np.asarray(doc["dims"], dtype=np.int64)
    values = np.array([[complex(re, im) for re, im in row] for row in doc["values"]],
                      dtype=np.complex128)
    r = C.num_classes
    if values.shape != (r, r) or len(dims) != r:
        raise CharTableError("imported table has wrong shape")
    if int(np.sum(dims ** 2)) != G.order:
        raise CharTableError("imported dims violate sum of squares")
    weights = C.sizes / G.order
    gram = (values * weights[None, :]) @ values.conj().T
    row_res = float(np.max(np.abs(gram - np.eye(r))))
    if row_res > tol:
        raise CharTableError(f"imported table fails orthogonality ({row_res:.2e})")
    quality = {"row_residual": row_res, "col_residual": row_res,
               "dim_roundoff": 0.0, "attempts": 0, "seed": None}
    return CharTable(group=G, classes=C, dims=dims, values=values,
                     quality=quality, source="imported")


def dumps_interchange(T: CharTable) -> str:
    return json.dumps(to_interchange(T), indent=2)


def loads_interchange(text: str, **kw) -> CharTable:
    return from_interchange(json.loads(text), **kw)
