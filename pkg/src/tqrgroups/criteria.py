"""Finite, parameterized versions of the covering inequalities and the four
tensor-quasi-randomness criteria, plus their product-set counterparts.

Asymptotic "O(1)" thresholds from the theory become explicit parameters here;
every failed criterion carries a concrete, checkable witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chartable import CharTable, ClassFunction
from .classfuncs import (RepMultiset, lp_norm, mask_to_support, plancherel_frac,
                         power_support_mask, split_off_identity,
                         support_measure_frac, tensor_support_mask)
from .groups import ClassData, GroupError, GroupTable, derived_subgroup, normal_subgroups, center_of_subset


@dataclass
class CriteriaParams:
    """Explicit stand-ins for the theory's O(1) constants."""

    class_threshold: int = 4            # TQR1: require c(G) > this
    dim_threshold: int = 4              # QR1: require min nontrivial dim > this
    density: float = 0.1                # measure / density floor "a"
    power: int = 3                      # tensor / product power "m"
    power_measure_threshold: Fraction = Fraction(1, 2)  # TQR3 failure cutoff
    normal_size: int = 4                # TQR4: small normal subgroup bound
    normal_index: int = 4               # TQR4: small index bound
    quotient_size: int = 4              # QR4: small quotient bound
    seed: int = 0
    trials: int = 1000                  # QR2/QR3 sampled subset triples
    support_trials: int = 200           # randomized support triples
    exhaustive_cap: int = 20            # max #irreps for exhaustive support search

    def density_frac(self) -> Fraction:
        return Fraction(str(self.density))

    def to_json_dict(self) -> dict:
        return {
            "class_threshold": self.class_threshold,
            "dim_threshold": self.dim_threshold,
            "density": self.density,
            "power": self.power,
            "power_measure_threshold": float(self.power_measure_threshold),
            "normal_size": self.normal_size,
            "normal_index": self.normal_index,
            "quotient_size": self.quotient_size,
            "seed": self.seed,
            "trials": self.trials,
            "support_trials": self.support_trials,
            "exhaustive_cap": self.exhaustive_cap,
        }


@dataclass
class CriterionReport:
    criterion: str
    holds: bool | None
    parameters: dict
    witness: dict | None = None
    mode: str = "exact"
    details: dict = field(default_factory=dict)
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {"criterion": self.criterion, "holds": self.holds,
                "mode": self.mode, "parameters": self.parameters,
                "witness": self.witness, "details": self.details,
                "error": self.error}


@dataclass
class CoverReport:
    kind: str
    measures: list[float]
    guaranteed: bool
    covered: bool
    missing: tuple[int, ...]
    threshold: float | None = None

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "measures": self.measures,
                "guaranteed": self.guaranteed, "covered": self.covered,
                "missing": list(self.missing), "threshold": self.threshold}


# ---------------------------------------------------------------------------
# Covering checks


def covering_lemma_check(T: CharTable, f: ClassFunction) -> bool:
    """True iff |f(e)| strictly exceeds the l1 mass of f off the identity.

    For f in the span of the characters of some representation's support this
    forces every irreducible to pair nontrivially with f, so the support is
    all of Irrep(G).
    """
    head, f0 = split_off_identity(f)
    return abs(head) > lp_norm(f0, 1)


def two_factor_cover(T: CharTable, V1: RepMultiset, V2: RepMultiset) -> CoverReport:
    """Guarantee M(V1)+M(V2) > 1 versus the exact covering status of V1 (x) V2."""
    m1, m2 = plancherel_frac(T, V1), plancherel_frac(T, V2)
    guaranteed = (m1 + m2) > 1
    full = (1 << T.num_irreps) - 1
    if V1.is_zero or V2.is_zero:
        prod = 0
    else:
        prod = tensor_support_mask(T, V1.support_mask(), V2.support_mask())
    covered = prod == full
    missing = mask_to_support(full & ~prod)
    return CoverReport("two_factor", [float(m1), float(m2)], bool(guaranteed),
                       covered, missing)


def three_factor_cover(T: CharTable, V1: RepMultiset, V2: RepMultiset,
                       V3: RepMultiset) -> CoverReport:
    """Guarantee M1*M2*M3 > c(G)^(-1/2) versus exact covering of the triple."""
    if T.group.order <= 1:
        raise GroupError("three-factor bound needs a nontrivial group")
    c = T.classes.min_nontrivial_size
    ms = [plancherel_frac(T, V) for V in (V1, V2, V3)]
    prod_m = ms[0] * ms[1] * ms[2]
    # exact comparison: (M1 M2 M3)^2 * c > 1 avoids the irrational sqrt
    guaranteed = prod_m > 0 and (prod_m * prod_m * c) > 1
    full = (1 << T.num_irreps) - 1
    if any(V.is_zero for V in (V1, V2, V3)):
        mask = 0
    else:
        mask = tensor_support_mask(T, V1.support_mask(), V2.support_mask())
        mask = tensor_support_mask(T, mask, V3.support_mask())
    covered = mask == full
    missing = mask_to_support(full & ~mask)
    return CoverReport("three_factor", [float(m) for m in ms], bool(guaranteed),
                       covered, missing, threshold=c ** -0.5)


def multiplicity_profile(T: CharTable, V1: RepMultiset, V2: RepMultiset,
                         V3: RepMultiset) -> dict:
    """Exact multiplicities of each irreducible in the tensor product of the
    three reduced representations, with deviation from proportionality to dim.
    """
    from .classfuncs import character_of, decompose, reduce_rep

    n = T.group.order
    if any(V.is_zero for V in (V1, V2, V3)):
        return {"multiplicities": [0] * T.num_irreps, "deviations": None,
                "measures": [float(plancherel_frac(T, V)) for V in (V1, V2, V3)],
                "max_deviation": None, "deviation_bounds": None}
    chars = [character_of(T, reduce_rep(V)) for V in (V1, V2, V3)]
    prod = chars[0].copy_with(chars[0].values * chars[1].values * chars[2].values)
    mult = decompose(T, prod).mult
    a = [float(plancherel_frac(T, V)) for V in (V1, V2, V3)]
    base = n * n * a[0] * a[1] * a[2] * T.dims.astype(np.float64)
    dev = np.abs(mult / base - 1.0)
    c = T.classes.min_nontrivial_size
    bounds = None
    if c is not None:
        bounds = (c ** -0.5 / (a[0] * a[1] * a[2] * T.dims.astype(np.float64))).tolist()
    return {"multiplicities": mult.tolist(), "deviations": dev.tolist(),
            "measures": a, "max_deviation": float(dev.max()),
            "deviation_bounds": bounds}


# ---------------------------------------------------------------------------
# Support search machinery


def _support_measures(T: CharTable) -> np.ndarray:
    return T.dims.astype(np.float64) ** 2 / T.group.order


def _minimal_supports(T: CharTable, dens: Fraction) -> list[int]:
    """All support masks of measure >= dens minimal under element removal.

    Covering failure is preserved by shrinking supports, so exhaustive search
    over these masks is exhaustive over all supports of measure >= dens.
    """
    r = T.num_irreps
    probs = _support_measures(T)
    dens_f = float(dens)
    masks = []
    for m in range(1, 1 << r):
        total = 0.0
        mm = m
        while mm:
            low = mm & -mm
            total += probs[low.bit_length() - 1]
            mm ^= low
        if total < dens_f - 1e-12:
            continue
        minimal = True
        mm = m
        while mm:
            low = mm & -mm
            if total - probs[low.bit_length() - 1] >= dens_f - 1e-12:
                minimal = False
                break
            mm ^= low
        if minimal and support_measure_frac(T, m) >= dens:
            masks.append(m)
    return masks


def _random_support(T: CharTable, rng, dens: Fraction, max_tries: int = 200) -> int | None:
    r = T.num_irreps
    for t in range(max_tries):
        q = (0.5, 0.7, 0.9, 1.0)[t % 4]
        mask = 0
        for i in range(r):
            if rng.random() < q:
                mask |= 1 << i
        if mask and support_measure_frac(T, mask) >= dens:
            return mask
    return None


# ---------------------------------------------------------------------------
# TQR criteria


def check_tqr(G: GroupTable, C: ClassData, T: CharTable,
              params: CriteriaParams | None = None) -> list[CriterionReport]:
    """Evaluate all four tensor-quasi-randomness criteria with explicit
    thresholds; failed criteria carry concrete witnesses."""
    params = params or CriteriaParams()
    pjson = params.to_json_dict()
    reports = [_tqr1(G, C, params, pjson),
               _tqr2(T, params, pjson),
               _tqr3(T, params, pjson),
               _tqr4(G, C, params, pjson)]
    return reports


def _tqr1(G, C, params, pjson) -> CriterionReport:
    c = C.min_nontrivial_size
    if c is None:
        return CriterionReport("tqr1", True, pjson,
                               details={"c": None, "note": "trivial group"})
    holds = c > params.class_threshold
    witness = None
    if not holds:
        cid = 1 + int(np.argmin(C.sizes[1:]))
        witness = {"class_index": cid, "class_size": int(C.sizes[cid]),
                   "class_elements": [int(x) for x in C.classes[cid]],
                   "labels": [G.label(int(x)) for x in C.classes[cid]]}
    return CriterionReport("tqr1", holds, pjson, witness=witness,
                           details={"c": c})


def _tqr2(T, params, pjson) -> CriterionReport:
    dens = params.density_frac()
    full = (1 << T.num_irreps) - 1
    checked = 0
    witness = None
    modes = []

    if T.num_irreps <= params.exhaustive_cap:
        modes.append("exhaustive-minimal")
        minimal = _minimal_supports(T, dens)
        triples = len(minimal) ** 3
        if triples <= 2_000_000:
            for m1 in minimal:
                for m2 in minimal:
                    m12 = tensor_support_mask(T, m1, m2)
                    for m3 in minimal:
                        checked += 1
                        if tensor_support_mask(T, m12, m3) != full:
                            witness = _support_witness(T, [m1, m2, m3], m12, m3)
                            break
                    if witness:
                        break
                if witness:
                    break
        else:
            modes[-1] = "exhaustive-truncated"

    rng = np.random.default_rng(params.seed + 2001)
    modes.append("randomized")
    for _ in range(params.support_trials):
        if witness:
            break
        ms = [_random_support(T, rng, dens) for _ in range(3)]
        if any(m is None for m in ms):
            continue
        checked += 1
        m12 = tensor_support_mask(T, ms[0], ms[1])
        if tensor_support_mask(T, m12, ms[2]) != full:
            witness = _support_witness(T, ms, m12, ms[2])
    return CriterionReport("tqr2", witness is None, pjson, witness=witness,
                           mode="+".join(modes),
                           details={"triples_checked": checked})


def _support_witness(T, masks, m12, m3) -> dict:
    missing = mask_to_support(((1 << T.num_irreps) - 1)
                              & ~tensor_support_mask(T, m12, m3))
    return {"supports": [list(mask_to_support(m)) for m in masks],
            "measures": [float(support_measure_frac(T, m)) for m in masks],
            "missing": list(missing)}


def _tqr3(T, params, pjson) -> CriterionReport:
    dens = params.density_frac()
    witness = None
    checked = 0
    modes = []
    if T.num_irreps <= params.exhaustive_cap:
        modes.append("exhaustive-minimal")
        for m in _minimal_supports(T, dens):
            checked += 1
            pw = power_support_mask(T, m, params.power)
            measure = support_measure_frac(T, pw)
            if measure <= params.power_measure_threshold:
                witness = {"support": list(mask_to_support(m)),
                           "measure": float(support_measure_frac(T, m)),
                           "power_support": list(mask_to_support(pw)),
                           "power_measure": float(measure)}
                break
    rng = np.random.default_rng(params.seed + 3001)
    modes.append("randomized")
    for _ in range(params.support_trials):
        if witness:
            break
        m = _random_support(T, rng, dens)
        if m is None:
            continue
        checked += 1
        pw = power_support_mask(T, m, params.power)
        measure = support_measure_frac(T, pw)
        if measure <= params.power_measure_threshold:
            witness = {"support": list(mask_to_support(m)),
                       "measure": float(support_measure_frac(T, m)),
                       "power_support": list(mask_to_support(pw)),
                       "power_measure": float(measure)}
    return CriterionReport("tqr3", witness is None, pjson, witness=witness,
                           mode="+".join(modes),
                           details={"supports_checked": checked})


def _tqr4(G, C, params, pjson) -> CriterionReport:
    try:
        subs = normal_subgroups(G, C)
    except GroupError as exc:
        return CriterionReport("tqr4", None, pjson, error=str(exc))
    witness = None
    for N in subs:
        if 1 < N.order <= params.normal_size:
            witness = {"kind": "small_normal_subgroup", "order": N.order,
                       "members": list(N.members)}
            break
    if witness is None:
        for N in subs:
            if N.index <= params.normal_index:
                zen = center_of_subset(G, N.members)
                if len(zen) > 1:
                    witness = {"kind": "small_index_with_center",
                               "order": N.order, "index": N.index,
                               "center_order": len(zen),
                               "center_members": list(zen)}
                    break
    return CriterionReport("tqr4", witness is None, pjson, witness=witness,
                           details={"normal_subgroup_orders":
                                    [int(s.order) for s in subs]})


# ---------------------------------------------------------------------------
# Product-set (quasi-randomness) criteria


def check_qr(G: GroupTable, T: CharTable,
             params: CriteriaParams | None = None) -> list[CriterionReport]:
    """Evaluate the four product-set quasi-randomness criteria."""
    params = params or CriteriaParams()
    pjson = params.to_json_dict()
    C = T.classes
    return [_qr1(T, params, pjson),
            _qr23(G, params, pjson, triple=True),
            _qr23(G, params, pjson, triple=False),
            _qr4(G, C, params, pjson)]


def _qr1(T, params, pjson) -> CriterionReport:
    if T.num_irreps == 1:
        return CriterionReport("qr1", True, pjson,
                               details={"min_nontrivial_dim": None})
    dims = T.dims[1:]
    mind = int(dims.min())
    holds = mind > params.dim_threshold
    witness = None
    if not holds:
        lam = 1 + int(np.argmin(dims))
        witness = {"irrep": lam, "dim": mind}
    return CriterionReport("qr1", holds, pjson, witness=witness,
                           details={"min_nontrivial_dim": mind})


def _subset_product(G, A, B) -> np.ndarray:
    return np.unique(G.mul[np.ix_(A, B)])


def _qr23(G, params, pjson, triple: bool) -> CriterionReport:
    name = "qr2" if triple else "qr3"
    size = max(1, math.ceil(params.density * G.order))
    rng = np.random.default_rng(params.seed + (4001 if triple else 5001))
    witness = None
    for _ in range(params.trials):
        if triple:
            sets = [np.sort(rng.choice(G.order, size, replace=False))
                    for _ in range(3)]
            prod = _subset_product(G, sets[0], sets[1])
            prod = _subset_product(G, prod, sets[2])
        else:
            A = np.sort(rng.choice(G.order, size, replace=False))
            sets = [A]
            prod = A
            for _ in range(params.power - 1):
                prod = _subset_product(G, prod, A)
        if len(prod) != G.order:
            witness = {"subsets": [s.tolist() for s in sets],
                       "product_size": int(len(prod))}
            break
    details = {"trials": params.trials, "subset_size": size,
               "note": "sampled search; absence of a witness is evidence, not proof"}
    return CriterionReport(name, witness is None, pjson, witness=witness,
                           mode="randomized", details=details)


def _qr4(G, C, params, pjson) -> CriterionReport:
    try:
        subs = normal_subgroups(G, C)
    except GroupError as exc:
        return CriterionReport("qr4", None, pjson, error=str(exc))
    D = derived_subgroup(G, C)
    witness = None
    if D.order < G.order:
        # the maximal abelian quotient, G / [G, G]
        witness = {"kind": "abelian_quotient",
                   "quotient_order": G.order // D.order,
                   "kernel_order": D.order,
                   "kernel_members": list(D.members)}
    if witness is None:
        for N in subs:
            if 1 < N.index <= params.quotient_size:
                witness = {"kind": "small_quotient", "quotient_order": N.index,
                           "kernel_order": N.order}
                break
    return CriterionReport("qr4", witness is None, pjson, witness=witness,
                           details={"derived_subgroup_index": G.order // D.order})
