"""Depth-truncated formal characters of highest-weight modules.

Characters are stored relative to the highest weight: ``coeffs[beta]`` is the
multiplicity of ``lam - beta`` where ``beta = (k_0, ..., k_l)`` lists
coefficients of the simple affine roots.  The delta-degree of ``beta`` is
``k_0``.

Weights of a module with highest weight ``lam`` at positive shifted level lie
in the window

    k_0 <= depth  and  2 (lam + rho~ | beta) - (beta | beta) >= 0,

a finite set.  Every weight of the irreducible module L(lam) for dominant
``lam``, and every weight of the dot orbit of ``lam``, lies in this window, so
irreducible characters are exact below the cap.  Verma modules have weights
outside it; their characters are reported on the window only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import _kernels
from .affine_roots import (
    AffineWeight,
    from_root_coords,
    is_dominant,
    is_integral,
    labels,
    parse_weight,
    positive_root_coords,
    rho_tilde,
    root_lattice_form,
    to_root_coords,
    weight_root_pairing,
)
from .affine_weyl import dot, weyl_layers
from .errors import FrontierTooShallow, NotDominant
from .finite_cartan import FiniteCartan


def beta_key(beta) -> tuple:
    return (sum(beta), tuple(beta))


@dataclass
class FormalCharacter:
    base: AffineWeight
    coeffs: dict  # beta -> multiplicity, zeros omitted
    depth: int
    method: str = ""
    window: tuple = field(default=(), repr=False)

    def mult(self, beta) -> int:
        return self.coeffs.get(tuple(beta), 0)

    def weight(self, fc: FiniteCartan, beta) -> AffineWeight:
        return self.base - from_root_coords(fc, beta)

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: beta_key(kv[0]))

    def to_json(self, fc: FiniteCartan) -> dict:
        return {
            "hw": str(self.base),
            "depth": self.depth,
            "coeffs": [[str(self.weight(fc, b)), m] for b, m in self.items()],
        }

    @classmethod
    def from_json(cls, fc: FiniteCartan, data: dict, method: str = "") -> "FormalCharacter":
        base = parse_weight(data["hw"])
        coeffs = {}
        for ws, m in data["coeffs"]:
            coeffs[to_root_coords(fc, base - parse_weight(ws))] = int(m)
        return cls(base, coeffs, int(data["depth"]), method)


# ------------------------------------------------------------------ window


def casimir_gap(fc: FiniteCartan, lam: AffineWeight, beta) -> Fraction:
    """|lam + rho~|^2 - |lam + rho~ - beta|^2."""
    lr = lam + rho_tilde(fc)
    return 2 * weight_root_pairing(fc, lr, beta) - root_lattice_form(fc, beta, beta)


@lru_cache(maxsize=None)
def window(fc: FiniteCartan, lam: AffineWeight, depth: int) -> tuple:
    """All beta >= 0 with k_0 <= depth and nonnegative Casimir gap, sorted by height."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    lr = lam + rho_tilde(fc)
    K = lr.level
    if depth > 0 and K <= 0:
        raise ValueError(f"shifted level of {lam} is not positive; window is infinite")
    l = fc.rank
    G = fc.weight_form
    d = fc.half_norms
    v = lr.finite
    vv = sum(G[i][j] * v[i] * v[j] for i in range(l) for j in range(l))
    # omega_i = Lambda_i / d_i is dual to alpha_i under the form
    v_om = [sum(v[j] * G[j][i] for j in range(l)) / d[i] for i in range(l)]
    om_norm = [math.sqrt(G[i][i] / d[i] ** 2) for i in range(l)]
    out = []
    for n in range(depth + 1):
        R = math.sqrt(float(vv + 2 * K * n))
        ranges = []
        for i in range(l):
            hi = math.floor(float(v_om[i]) + n * fc.marks[i] + R * om_norm[i]) + 1
            ranges.append(range(0, max(hi, 0) + 1))
        for ks in product(*ranges):
            beta = (n,) + ks
            if casimir_gap(fc, lam, beta) >= 0:
                out.append(beta)
    out.sort(key=beta_key)
    return tuple(out)


def _box(betas) -> tuple:
    n = len(betas[0])
    return tuple(max(b[i] for b in betas) + 1 for i in range(n))


def _root_factors(fc: FiniteCartan, dims) -> list:
    """(coords, multiplicity) of the positive roots that fit in the box."""
    return [
        (r, m)
        for r, m in positive_root_coords(fc, dims[0] - 1)
        if all(x < dd for x, dd in zip(r, dims))
    ]


# -------------------------------------------------------- partition function


def partition_fn(fc: FiniteCartan, beta) -> int:
    """Number of ways to write beta as a sum of positive roots, counted with multiplicity."""
    beta = tuple(int(x) for x in beta)
    if any(x < 0 for x in beta):
        return 0
    dims = tuple(x + 1 for x in beta)
    return int(_kernels.partition_table(dims, _root_factors(fc, dims))[beta])


def partition_table(fc: FiniteCartan, dims) -> np.ndarray:
    return _kernels.partition_table(dims, _root_factors(fc, dims))


def verma_character(fc: FiniteCartan, lam: AffineWeight, depth: int) -> FormalCharacter:
    """Character of the Verma module M(lam) on the weight window of ``lam``."""
    win = window(fc, lam, depth)
    table = partition_table(fc, _box(win))
    coeffs = {b: int(table[b]) for b in win if table[b]}
    return FormalCharacter(lam, coeffs, depth, "verma", win)


# -------------------------------------------------------------- Freudenthal


def _check_dominant(fc, lam):
    if not (is_dominant(fc, lam) and is_integral(fc, lam)):
        raise NotDominant(f"{lam} is not dominant integral (labels {labels(fc, lam)})")


def freudenthal_character(fc: FiniteCartan, lam: AffineWeight, depth: int) -> FormalCharacter:
    """Multiplicities of L(lam) by the Freudenthal recursion, descending by height."""
    _check_dominant(fc, lam)
    win = window(fc, lam, depth)
    roots = positive_root_coords(fc, depth)
    lam_root = {r: weight_root_pairing(fc, lam, r) for r, _ in roots}
    rr = {r: root_lattice_form(fc, r, r) for r, _ in roots}
    mult = {}
    zero = win[0]
    mult[zero] = 1
    for beta in win[1:]:
        gap = casimir_gap(fc, lam, beta)
        if gap <= 0:
            continue
        total = Fraction(0)
        for r, m in roots:
            br = root_lattice_form(fc, beta, r)
            k = 1
            while True:
                rest = tuple(b - k * x for b, x in zip(beta, r))
                if any(x < 0 for x in rest):
                    break
                c = mult.get(rest)
                if c:
                    # (lam - beta + k r | r)
                    total += m * c * (lam_root[r] - br + k * rr[r])
                k += 1
        val = 2 * total / gap
        if val.denominator != 1 or val < 0:
            raise ArithmeticError(f"non-integral Freudenthal multiplicity {val} at {beta}")
        if val:
            mult[beta] = int(val)
    return FormalCharacter(lam, mult, depth, "freudenthal", win)


# --------------------------------------------------------------- Weyl-Kac


def _dot_displacements(fc: FiniteCartan, lam: AffineWeight, depth: int, max_len: int):
    """[(beta_w, sign)] for l(w) <= max_len with k_0(beta_w) <= depth.

    Raises FrontierTooShallow unless every element of length max_len + 1
    lands beyond the cap (displacements grow along reduced words).
    """
    layers = weyl_layers(fc, max_len + 1)
    out = []
    for k, layer in enumerate(layers[:-1]):
        for w in layer:
            beta = to_root_coords(fc, lam - dot(fc, w, lam))
            if beta[0] <= depth:
                out.append((beta, -1 if k % 2 else 1, w))
    for w in layers[-1]:
        beta = to_root_coords(fc, lam - dot(fc, w, lam))
        if beta[0] <= depth:
            raise FrontierTooShallow(
                f"element {w} of length {max_len + 1} reaches delta-degree {beta[0]} <= {depth}; "
                f"increase max_len",
                required_len=max_len + 1,
            )
    return out


def minimal_max_len(fc: FiniteCartan, lam: AffineWeight, depth: int, start: int = 0, limit: int = 64) -> int:
    """Smallest max_len accepted by the Weyl-Kac sum for this depth."""
    for n in range(start, limit + 1):
        try:
            _dot_displacements(fc, lam, depth, n)
            return n
        except FrontierTooShallow:
            continue
    raise FrontierTooShallow(f"no max_len <= {limit} suffices", required_len=limit)


def weyl_kac_character(fc: FiniteCartan, lam: AffineWeight, depth: int, max_len: int | None = None) -> FormalCharacter:
    """Character of L(lam) as (sum_w eps(w) e^{w.lam}) / prod (1 - e^{-alpha})^mult."""
    _check_dominant(fc, lam)
    if max_len is None:
        max_len = minimal_max_len(fc, lam, depth)
    win = window(fc, lam, depth)
    terms = _dot_displacements(fc, lam, depth, max_len)
    dims = _box(list(win) + [b for b, _, _ in terms])
    num = np.zeros(dims, dtype=np.int64)
    for b, s, _ in terms:
        num[b] += s
    ch = _kernels.apply_factors(num, _root_factors(fc, dims), divide=True)
    coeffs = {}
    for idx in zip(*np.nonzero(ch)):
        b = tuple(int(x) for x in idx)
        val = int(ch[b])
        if val < 0:
            raise ArithmeticError(f"negative Weyl-Kac coefficient {val} at {b}")
        coeffs[b] = val
    outside = [b for b in coeffs if b not in set(win)]
    if outside:
        raise ArithmeticError(f"Weyl-Kac character has support outside the window: {outside[:3]}")
    return FormalCharacter(lam, coeffs, depth, "weyl-kac", win)


# ------------------------------------------------------- denominator identity


def denominator_box(fc: FiniteCartan, depth: int) -> tuple:
    """A box holding every term of the truncated denominator product."""
    fin = [sum(r[i] for r in fc.positive_roots) for i in range(fc.rank)]
    return (depth + 1,) + tuple(fin[i] + 2 * depth * fc.marks[i] + 1 for i in range(fc.rank))


def denominator_product(fc: FiniteCartan, depth: int) -> np.ndarray:
    dims = denominator_box(fc, depth)
    return _kernels.product_table(dims, _root_factors(fc, dims))


def denominator_identity_check(fc: FiniteCartan, depth: int, max_len: int | None = None) -> dict:
    """Compare prod (1 - e^-alpha)^mult with sum_w eps(w) e^{w rho~ - rho~} up to the cap."""
    zero = AffineWeight((0,) * fc.rank, 0, 0)
    if max_len is None:
        max_len = minimal_max_len(fc, zero, depth)
    prod_side = denominator_product(fc, depth)
    dims = prod_side.shape
    weyl_side = np.zeros(dims, dtype=np.int64)
    for b, s, w in _dot_displacements(fc, zero, depth, max_len):
        if any(x >= d for x, d in zip(b, dims)):
            return {
                "ok": False,
                "depth": depth,
                "max_len": max_len,
                "first_mismatch": {"beta": list(b), "product": 0, "weyl_sum": s, "word": str(w)},
            }
        weyl_side[b] += s
    diff = np.argwhere(prod_side != weyl_side)
    report = {
        "ok": len(diff) == 0,
        "depth": depth,
        "max_len": max_len,
        "terms": int(np.count_nonzero(weyl_side)),
        "first_mismatch": None,
    }
    if len(diff):
        bad = sorted((tuple(int(x) for x in d) for d in diff), key=beta_key)[0]
        report["first_mismatch"] = {
            "beta": list(bad),
            "product": int(prod_side[bad]),
            "weyl_sum": int(weyl_side[bad]),
        }
    return report


def times_denominator(fc: FiniteCartan, ch: FormalCharacter, betas) -> dict:
    """Coefficients of ch * prod (1 - e^-alpha)^mult at the given betas."""
    dims = _box(list(betas) + list(ch.coeffs))
    arr = np.zeros(dims, dtype=np.int64)
    for b, m in ch.coeffs.items():
        arr[b] = m
    out = _kernels.apply_factors(arr, _root_factors(fc, dims), divide=False)
    return {tuple(b): int(out[tuple(b)]) for b in betas}
