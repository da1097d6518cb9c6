"""Finite groups as dense index tables, plus the structural data everything
else consumes: conjugacy classes, centers, normal subgroups, quotients.

All structures are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import config


class GroupError(ValueError):
    """Raised for invalid group specifications or broken group axioms."""


# ---------------------------------------------------------------------------
# Core table type


@dataclass(eq=False)
class GroupTable:
    """A finite group on element indices 0..order-1 with a full Cayley table."""

    order: int
    identity: int
    mul: np.ndarray          # shape (order, order), mul[a, b] = index of a*b
    inv: np.ndarray          # shape (order,)
    labels: list[str] | None = None
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        self.mul = np.ascontiguousarray(self.mul, dtype=np.int64)
        self.inv = np.ascontiguousarray(self.inv, dtype=np.int64)
        self.mul.setflags(write=False)
        self.inv.setflags(write=False)

    def __len__(self):
        return self.order

    def __repr__(self):
        name = self.source.get("family", self.source.get("type", "group"))
        return f"GroupTable({name}, order={self.order})"

    def product(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def conjugate(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.identity:
            y = int(self.mul[y, x])
            n += 1
        return n

    def power(self, x: int, e: int) -> int:
        if e < 0:
            return self.power(int(self.inv[x]), -e)
        acc = self.identity
        for _ in range(e):
            acc = int(self.mul[acc, x])
        return acc

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)


@dataclass(eq=False)
class ClassData:
    """Conjugacy classes in canonical order: identity class first, then by
    minimal element index."""

    classes: list[np.ndarray]        # sorted element indices per class
    sizes: np.ndarray                # int, per class
    class_of: np.ndarray             # element index -> class index
    representatives: np.ndarray      # minimal element index per class
    min_nontrivial_size: int | None  # c(G); None for the trivial group

    def __post_init__(self):
        self.sizes = np.ascontiguousarray(self.sizes, dtype=np.int64)
        self.class_of = np.ascontiguousarray(self.class_of, dtype=np.int64)
        self.representatives = np.ascontiguousarray(self.representatives, dtype=np.int64)
        for arr in (self.sizes, self.class_of, self.representatives):
            arr.setflags(write=False)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def __repr__(self):
        return f"ClassData(sizes={self.sizes.tolist()}, c={self.min_nontrivial_size})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as a sorted tuple of element indices of the parent group."""

    members: tuple[int, ...]
    is_normal: bool
    is_central: bool
    index: int

    @property
    def order(self) -> int:
        return len(self.members)

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)


# ---------------------------------------------------------------------------
# Validation


def _check_group_axioms(mul: np.ndarray, rng_seed: int = 0) -> tuple[int, np.ndarray]:
    """Verify identity/inverse laws exhaustively and associativity up to the
    configured cap (seeded sampling above it). Returns (identity, inv)."""
    n = mul.shape[0]
    if mul.shape != (n, n):
        raise GroupError("multiplication table is not square")
    if mul.min() < 0 or mul.max() >= n:
        raise GroupError("table entries out of range")

    idx = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx):
            identity = e
            break
    if identity is None:
        raise GroupError("no identity element")

    inv = np.full(n, -1, dtype=np.int64)
    for a in range(n):
        hits = np.flatnonzero(mul[a] == identity)
        if len(hits) != 1 or mul[hits[0], a] != identity:
            raise GroupError(f"element {a} has no two-sided inverse")
        inv[a] = hits[0]

    if n <= config.ASSOC_EXHAUSTIVE_CAP:
        # (a*b)*c == a*(b*c), checked in slabs over a.
        for a in range(n):
            left = mul[mul[a], :]          # (n, n): (a*b)*c
            right = mul[a][mul]            # (n, n): a*(b*c)
            if not np.array_equal(left, right):
                raise GroupError("multiplication table is not associative")
    else:
        rng = np.random.default_rng(rng_seed)
        a = rng.integers(0, n, 100_000)
        b = rng.integers(0, n, 100_000)
        c = rng.integers(0, n, 100_000)
        if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
            raise GroupError("multiplication table is not associative (sampled)")
    return identity, inv


def _finalize(mul, labels, source) -> GroupTable:
    mul = np.asarray(mul, dtype=np.int64)
    identity, inv = _check_group_axioms(mul)
    return GroupTable(order=mul.shape[0], identity=identity, mul=mul,
                      inv=inv, labels=labels, source=source)


# ---------------------------------------------------------------------------
# Family constructors


def _cyclic(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic order must be >= 1")
    i = np.arange(n)
    mul = (i[:, None] + i[None, :]) % n
    return _finalize(mul, [str(k) for k in range(n)],
                     {"family": "cyclic", "params": {"n": n}})


def _dihedral(n: int) -> GroupTable:
    """Symmetries of the regular n-gon, order 2n; indices 0..n-1 are rotations."""
    if n < 1:
        raise GroupError("dihedral parameter must be >= 1")
    m = 2 * n
    mul = np.zeros((m, m), dtype=np.int64)
    i = np.arange(n)
    mul[:n, :n] = (i[:, None] + i[None, :]) % n
    mul[:n, n:] = (i[:, None] + i[None, :]) % n + n
    mul[n:, :n] = (i[:, None] - i[None, :]) % n + n
    mul[n:, n:] = (i[:, None] - i[None, :]) % n
    labels = [f"r{k}" for k in range(n)] + [f"s·r{k}" for k in range(n)]
    return _finalize(mul, labels, {"family": "dihedral", "params": {"n": n}})


def _perm_family(n: int, even_only: bool, family: str) -> GroupTable:
    if n < 1:
        raise GroupError("degree must be >= 1")
    perms = list(itertools.permutations(range(n)))
    if even_only:
        perms = [p for p in perms if _perm_parity(p) == 0]
    index = {p: k for k, p in enumerate(perms)}
    m = len(perms)
    if m > config.MAX_ORDER:
        raise GroupError(f"order {m} exceeds MAX_ORDER={config.MAX_ORDER}")
    mul = np.zeros((m, m), dtype=np.int64)
    for a, p in enumerate(perms):
        for b, q in enumerate(perms):
            mul[a, b] = index[tuple(p[q[k]] for k in range(n))]
    labels = ["".join(map(str, p)) for p in perms]
    return _finalize(mul, labels, {"family": family, "params": {"n": n}})


def _perm_parity(p) -> int:
    seen = [False] * len(p)
    parity = 0
    for s in range(len(p)):
        if seen[s]:
            continue
        length = 0
        j = s
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def _quaternion8() -> GroupTable:
    # elements: 1, -1, i, -i, j, -j, k, -k
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    unit = {("1", "1"): ("+", "1"), ("1", "i"): ("+", "i"), ("1", "j"): ("+", "j"),
            ("1", "k"): ("+", "k"), ("i", "1"): ("+", "i"), ("j", "1"): ("+", "j"),
            ("k", "1"): ("+", "k"), ("i", "i"): ("-", "1"), ("j", "j"): ("-", "1"),
            ("k", "k"): ("-", "1"), ("i", "j"): ("+", "k"), ("j", "i"): ("-", "k"),
            ("j", "k"): ("+", "i"), ("k", "j"): ("-", "i"), ("k", "i"): ("+", "j"),
            ("i", "k"): ("-", "j")}

    def mult(a, b):
        sa, ua = ("-", a[1:]) if a.startswith("-") else ("+", a)
        sb, ub = ("-", b[1:]) if b.startswith("-") else ("+", b)
        sc, uc = unit[(ua, ub)]
        neg = [sa, sb, sc].count("-") % 2
        return ("-" if neg else "") + uc

    index = {s: k for k, s in enumerate(names)}
    mul = np.array([[index[mult(a, b)] for b in names] for a in names])
    return _finalize(mul, names, {"family": "quaternion8", "params": {}})


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


def _extraspecial(p: int) -> GroupTable:
    """Upper unitriangular 3x3 matrices over F_p; order p^3, center of order p."""
    if not _is_prime(p):
        raise GroupError("extraspecial parameter must be prime")
    elems = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
    index = {e: k for k, e in enumerate(elems)}
    mul = np.zeros((p ** 3, p ** 3), dtype=np.int64)
    for x, (a, b, c) in enumerate(elems):
        for y, (d, e, f) in enumerate(elems):
            mul[x, y] = index[((a + d) % p, (b + e) % p, (c + f + a * e) % p)]
    labels = [f"({a},{b},{c})" for a, b, c in elems]
    return _finalize(mul, labels, {"family": "extraspecial", "params": {"p": p}})


def _affine(p: int) -> GroupTable:
    """Invertible affine maps x -> a x + b of F_p; order p(p-1)."""
    if not _is_prime(p):
        raise GroupError("affine parameter must be prime")
    elems = [(a, b) for a in range(1, p) for b in range(p)]
    index = {e: k for k, e in enumerate(elems)}
    m = len(elems)
    mul = np.zeros((m, m), dtype=np.int64)
    for x, (a, b) in enumerate(elems):
        for y, (a2, b2) in enumerate(elems):
            # (a, b) . (a2, b2): first apply x -> a2 x + b2, then x -> a x + b
            mul[x, y] = index[((a * a2) % p, (a * b2 + b) % p)]
    labels = [f"x->{a}x+{b}" for a, b in elems]
    return _finalize(mul, labels, {"family": "affine", "params": {"p": p}})


def _direct_product(left: GroupTable, right: GroupTable, source: dict) -> GroupTable:
    na, nb = left.order, right.order
    if na * nb > config.MAX_ORDER:
        raise GroupError(f"order {na * nb} exceeds MAX_ORDER={config.MAX_ORDER}")
    mul = (left.mul[:, None, :, None] * nb + right.mul[None, :, None, :])
    mul = mul.reshape(na * nb, na * nb)
    labels = None
    if left.labels is not None and right.labels is not None:
        labels = [f"({la},{lb})" for la in left.labels for lb in right.labels]
    return _finalize(mul, labels, source)


def _perm_closure(degree: int, generators: list[tuple[int, ...]]) -> GroupTable:
    idn = tuple(range(degree))
    for g in generators:
        if sorted(g) != list(range(degree)):
            raise GroupError(f"{g} is not a permutation of 0..{degree - 1}")
    frontier = [idn]
    seen = {idn}
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = tuple(p[g[k]] for k in range(degree))
                if q not in seen:
                    if len(seen) >= config.MAX_ORDER:
                        raise GroupError(
                            f"generator closure exceeds MAX_ORDER={config.MAX_ORDER}")
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    elems = sorted(seen)
    index = {p: k for k, p in enumerate(elems)}
    m = len(elems)
    mul = np.zeros((m, m), dtype=np.int64)
    for a, p in enumerate(elems):
        for b, q in enumerate(elems):
            mul[a, b] = index[tuple(p[q[k]] for k in range(degree))]
    labels = ["".join(map(str, p)) if degree <= 10 else str(p) for p in elems]
    return _finalize(mul, labels, {"type": "permutation", "degree": degree,
                                   "generators": [list(g) for g in generators]})


_FAMILIES = {
    "cyclic": lambda params: _cyclic(int(params["n"])),
    "dihedral": lambda params: _dihedral(int(params["n"])),
    "symmetric": lambda params: _perm_family(int(params["n"]), False, "symmetric"),
    "alternating": lambda params: _perm_family(int(params["n"]), True, "alternating"),
    "quaternion8": lambda params: _quaternion8(),
    "extraspecial": lambda params: _extraspecial(int(params["p"])),
    "affine": lambda params: _affine(int(params["p"])),
}


def build_group(spec: dict) -> GroupTable:
    """Construct a validated GroupTable from a group-spec descriptor.

    Accepted shapes:
      {"family": name, "params": {...}}      named family
      {"type": "cayley", "table": [[int]]}   explicit table, 0-based indices
      {"type": "permutation", "degree": d, "generators": [[int]]}
    """
    if "family" in spec:
        name = spec["family"]
        params = spec.get("params", {})
        if name in ("product", "direct_product"):
            left = build_group(params["left"])
            right = build_group(params["right"])
            return _direct_product(left, right,
                                   {"family": "product",
                                    "params": {"left": left.source, "right": right.source}})
        if name not in _FAMILIES:
            raise GroupError(f"unknown family {name!r}")
        return _FAMILIES[name](params)
    kind = spec.get("type")
    if kind == "cayley":
        table = np.asarray(spec["table"], dtype=np.int64)
        if table.shape[0] > config.MAX_ORDER:
            raise GroupError(f"order exceeds MAX_ORDER={config.MAX_ORDER}")
        return _finalize(table, spec.get("labels"),
                         {"type": "cayley", "table": table.tolist()})
    if kind == "permutation":
        gens = [tuple(g) for g in spec["generators"]]
        return _perm_closure(int(spec["degree"]), gens)
    raise GroupError(f"unrecognized group spec: {spec!r}")


# ---------------------------------------------------------------------------
# Structure computations


def conjugacy_classes(G: GroupTable) -> ClassData:
    """Orbit partition of G under conjugation.

    Canonical order: the identity class first, then ascending minimal element
    index. With the family constructors' element enumerations this puts, e.g.,
    the transpositions of a symmetric group before the 3-cycles.
    """
    n = G.order
    class_of = np.full(n, -1, dtype=np.int64)
    classes: list[np.ndarray] = []
    # identity class first
    order_seed = [G.identity] + [x for x in range(n) if x != G.identity]
    for x in order_seed:
        if class_of[x] >= 0:
            continue
        orbit = np.unique(G.mul[G.mul[:, x], G.inv])
        cid = len(classes)
        classes.append(orbit)
        class_of[orbit] = cid
    sizes = np.array([len(c) for c in classes], dtype=np.int64)
    reps = np.array([int(c.min()) for c in classes], dtype=np.int64)
    c_min = int(sizes[1:].min()) if len(classes) > 1 else None
    return ClassData(classes=classes, sizes=sizes, class_of=class_of,
                     representatives=reps, min_nontrivial_size=c_min)


def _closure(G: GroupTable, seed: set[int]) -> frozenset[int]:
    """Subgroup generated by `seed` (must contain the identity eventually)."""
    members = {G.identity} | set(seed)
    frontier = list(members)
    while frontier:
        nxt = []
        arr = np.fromiter(members, dtype=np.int64)
        for x in frontier:
            prods = np.unique(G.mul[x, arr])
            for y in prods:
                if y not in members:
                    members.add(int(y))
                    nxt.append(int(y))
        frontier = nxt
    return frozenset(members)


def subgroup_from_members(G: GroupTable, C: ClassData, members) -> Subgroup:
    """Validate a member set into a Subgroup, computing its flags."""
    mset = frozenset(int(m) for m in members)
    if G.identity not in mset:
        raise GroupError("subgroup must contain the identity")
    arr = np.fromiter(sorted(mset), dtype=np.int64)
    prods = G.mul[np.ix_(arr, arr)]
    if not set(np.unique(prods)) <= mset:
        raise GroupError("member set is not closed under multiplication")
    if G.order % len(mset):
        raise GroupError("subgroup order does not divide group order")
    cls = {int(c) for c in np.unique(C.class_of[arr])}
    is_normal = sum(int(C.sizes[c]) for c in cls) == len(mset)
    center_mask = _center_mask(G)
    is_central = bool(center_mask[arr].all())
    return Subgroup(members=tuple(int(x) for x in arr), is_normal=is_normal,
                    is_central=is_central, index=G.order // len(mset))


def _center_mask(G: GroupTable) -> np.ndarray:
    return np.all(G.mul == G.mul.T, axis=1)


def center(G: GroupTable) -> Subgroup:
    """Elements commuting with everything (the singleton conjugacy classes)."""
    members = np.flatnonzero(_center_mask(G))
    C = conjugacy_classes(G)
    return subgroup_from_members(G, C, members)


def normal_subgroups(G: GroupTable, C: ClassData | None = None) -> list[Subgroup]:
    """All normal subgroups, as closures of class unions.

    Every normal subgroup is a union of conjugacy classes closed under
    multiplication, hence the join of the normal closures of its classes; the
    search enumerates those joins instead of raw class subsets, which keeps it
    polynomial in the (small) number of normal subgroups.
    """
    if G.order > config.MAX_ORDER:
        raise GroupError(f"order exceeds MAX_ORDER={config.MAX_ORDER}")
    if C is None:
        C = conjugacy_classes(G)
    atoms = set()
    for cls in C.classes:
        atoms.add(_closure(G, set(int(x) for x in cls)))
    found = {frozenset([G.identity])} | atoms
    worklist = list(found)
    while worklist:
        cur = worklist.pop()
        for other in list(found):
            join = cur | other
            if join in found:
                continue
            join = _closure(G, set(join))
            if join not in found:
                found.add(join)
                worklist.append(join)
    subs = [subgroup_from_members(G, C, m) for m in found]
    subs.sort(key=lambda s: (s.order, s.members))
    for s in subs:
        assert s.is_normal
    return subs


def quotient(G: GroupTable, N: Subgroup) -> GroupTable:
    """Quotient group on the cosets of a normal subgroup."""
    if not N.is_normal:
        raise GroupError("quotient requires a normal subgroup")
    members = np.fromiter(N.members, dtype=np.int64)
    coset_rep = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_rep[g] >= 0:
            continue
        coset = np.unique(G.mul[g, members])
        rep = int(coset.min())
        coset_rep[coset] = rep
        reps.append(rep)
    reps.sort()
    rep_index = {r: k for k, r in enumerate(reps)}
    m = len(reps)
    mul = np.zeros((m, m), dtype=np.int64)
    for a, ra in enumerate(reps):
        row = coset_rep[G.mul[ra, reps]]
        mul[a] = [rep_index[int(r)] for r in row]
    labels = [f"[{G.label(r)}]" for r in reps]
    return _finalize(mul, labels, {"type": "quotient", "parent": G.source,
                                   "kernel_order": N.order})


def center_free_quotient_chain(G: GroupTable) -> list[GroupTable]:
    """G, G/Z(G), ... until the first center-free (possibly trivial) group."""
    chain = [G]
    cur = G
    while True:
        Z = center(cur)
        if Z.order == 1:
            return chain
        cur = quotient(cur, Z)
        chain.append(cur)


def derived_subgroup(G: GroupTable, C: ClassData | None = None) -> Subgroup:
    """Commutator subgroup; the smallest normal subgroup with abelian quotient."""
    if C is None:
        C = conjugacy_classes(G)
    comms = set()
    for rep in C.representatives:
        x = int(rep)
        # commutators [g, x] = g x g^-1 x^-1 for class representatives suffice
        conj = G.mul[G.mul[:, x], G.inv]
        comms.update(int(v) for v in np.unique(G.mul[conj, G.inv[x]]))
    return subgroup_from_members(G, C, _closure(G, comms))


def center_of_subset(G: GroupTable, members: tuple[int, ...]) -> tuple[int, ...]:
    """Elements of `members` commuting with every element of `members`."""
    arr = np.fromiter(members, dtype=np.int64)
    block = G.mul[np.ix_(arr, arr)]
    central = arr[np.all(block == block.T, axis=1)]
    return tuple(int(x) for x in central)


def subgroup_table(G: GroupTable, members) -> tuple[GroupTable, list[int]]:
    """Realize a subgroup as a standalone GroupTable.

    Returns the table and the list mapping its indices back to parent element
    indices (sorted ascending, so index 0 need not be the identity of G).
    """
    elems = sorted(int(m) for m in members)
    pos = {e: i for i, e in enumerate(elems)}
    arr = np.fromiter(elems, dtype=np.int64)
    block = G.mul[np.ix_(arr, arr)]
    try:
        mul = np.vectorize(pos.__getitem__)(block)
    except KeyError:
        raise GroupError("member set is not closed under multiplication")
    labels = [G.label(e) for e in elems] if G.labels is not None else None
    table = _finalize(mul, labels, {"type": "subgroup", "parent": G.source,
                                    "members": elems})
    return table, elems


def conjugation_action_on_class(G: GroupTable, C: ClassData, cid: int):
    """Permutation action of G on one conjugacy class, with its kernel.

    Returns (perms, kernel) where perms[g] is the tuple of positions the
    sorted class elements map to under x -> g x g^-1.
    """
    cls = [int(x) for x in C.classes[cid]]
    pos = {x: i for i, x in enumerate(cls)}
    perms = []
    for g in range(G.order):
        img = tuple(pos[G.conjugate(g, x)] for x in cls)
        perms.append(img)
    idn = tuple(range(len(cls)))
    kernel = _closure(G, {g for g in range(G.order) if perms[g] == idn})
    return perms, subgroup_from_members(G, C, kernel)
