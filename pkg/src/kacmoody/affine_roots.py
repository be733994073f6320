"""Affine roots, weights of the extended Cartan subalgebra, and the form on them.

A weight is stored as (finite Dynkin labels, level, degree): the finite part in
the basis of finite fundamental weights, the level is the value on c and the
degree is the coefficient of delta (the value on d).  Elements of the affine
root lattice are also handled as integer vectors (k_0, ..., k_l) in the simple
affine roots, with alpha_0 = delta - theta.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import IndexOutOfRange, NotIntegral
from .finite_cartan import FiniteCartan, _inverse


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class AffineWeight:
    finite: tuple
    level: Fraction = Fraction(0)
    degree: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "finite", tuple(_fr(x) for x in self.finite))
        object.__setattr__(self, "level", _fr(self.level))
        object.__setattr__(self, "degree", _fr(self.degree))

    def __add__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            tuple(a + b for a, b in zip(self.finite, other.finite)),
            self.level + other.level,
            self.degree + other.degree,
        )

    def __neg__(self) -> "AffineWeight":
        return AffineWeight(tuple(-a for a in self.finite), -self.level, -self.degree)

    def __sub__(self, other: "AffineWeight") -> "AffineWeight":
        return self + (-other)

    def scale(self, s) -> "AffineWeight":
        s = _fr(s)
        return AffineWeight(tuple(a * s for a in self.finite), self.level * s, self.degree * s)

    def __str__(self) -> str:
        fin = ",".join(fmt_rational(x) for x in self.finite)
        return f"({fin} ; {fmt_rational(self.level)} ; {fmt_rational(self.degree)})"


_WEIGHT_RE = re.compile(r"\(\s*([^;]*?)\s*;\s*([^;]+?)\s*;\s*([^;]+?)\s*\)")


def parse_weight(text: str) -> AffineWeight:
    """Inverse of ``str(AffineWeight)``: ``"(m1,...,ml ; k ; n)"``."""
    m = _WEIGHT_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"cannot parse weight {text!r}")
    fin = tuple(Fraction(x) for x in m.group(1).split(",") if x.strip())
    return AffineWeight(fin, Fraction(m.group(2)), Fraction(m.group(3)))


@dataclass(frozen=True)
class AffineRoot:
    finite_part: tuple  # simple-root coordinates of the finite root, or zeros
    delta_mult: int
    multiplicity: int

    @property
    def is_real(self) -> bool:
        return any(self.finite_part)

    def coords(self, fc: FiniteCartan) -> tuple:
        """Simple affine root coordinates (k_0, ..., k_l)."""
        n = self.delta_mult
        return (n,) + tuple(n * a + r for a, r in zip(fc.marks, self.finite_part))


# ------------------------------------------------------------- matrices


def affine_cartan_matrix(fc: FiniteCartan) -> tuple:
    """(alpha_j(coroot_i))_{i,j=0..l} with coroot_0 = c - coroot(theta)."""
    l = fc.rank
    A = fc.cartan_matrix
    th = fc.theta
    # alpha_j(coroot theta) = sum_i comark_i * A_ij ; alpha_0 = delta - theta
    th_on = [sum(fc.comarks[i] * A[i][j] for i in range(l)) for j in range(l)]
    rows = [[2] + [-th_on[j] for j in range(l)]]
    for i in range(l):
        rows.append([-fc.pairing(th, i)] + list(A[i]))
    return tuple(tuple(r) for r in rows)


def affine_marks(fc: FiniteCartan) -> tuple:
    return (1,) + fc.marks


def affine_comarks(fc: FiniteCartan) -> tuple:
    return (1,) + fc.comarks


@lru_cache(maxsize=None)
def affine_half_norms(fc: FiniteCartan) -> tuple:
    """(alpha_i|alpha_i)/2 for i = 0..l; alpha_0 has the length of theta."""
    return (Fraction(1),) + fc.half_norms


@lru_cache(maxsize=None)
def affine_sym_form(fc: FiniteCartan) -> tuple:
    """(alpha_i|alpha_j) for i, j = 0..l."""
    A = affine_cartan_matrix(fc)
    d = affine_half_norms(fc)
    n = fc.rank + 1
    return tuple(tuple(d[i] * A[i][j] for j in range(n)) for i in range(n))


def root_lattice_form(fc: FiniteCartan, x, y) -> Fraction:
    B = affine_sym_form(fc)
    n = len(B)
    return sum(
        (B[i][j] * x[i] * y[j] for i in range(n) if x[i] for j in range(n) if y[j]),
        Fraction(0),
    )


# --------------------------------------------------------------- weights


def labels(fc: FiniteCartan, lam: AffineWeight) -> tuple:
    """Affine Dynkin labels (lam(coroot_0), ..., lam(coroot_l))."""
    m0 = lam.level - sum(a * m for a, m in zip(fc.comarks, lam.finite))
    return (m0,) + lam.finite


def from_labels(fc: FiniteCartan, labs, degree=0) -> AffineWeight:
    labs = [Fraction(x) for x in labs]
    if len(labs) != fc.rank + 1:
        raise ValueError(f"expected {fc.rank + 1} labels, got {len(labs)}")
    level = labs[0] + sum(a * m for a, m in zip(fc.comarks, labs[1:]))
    return AffineWeight(tuple(labs[1:]), level, degree)


def coroot_pairing(fc: FiniteCartan, lam: AffineWeight, i: int) -> Fraction:
    return labels(fc, lam)[i]


def simple_root(fc: FiniteCartan, i: int) -> AffineWeight:
    if not 0 <= i <= fc.rank:
        raise IndexOutOfRange(i)
    A = affine_cartan_matrix(fc)
    return from_labels(fc, [A[j][i] for j in range(fc.rank + 1)], degree=int(i == 0))


def delta(fc: FiniteCartan) -> AffineWeight:
    return AffineWeight((0,) * fc.rank, 0, 1)


def from_root_coords(fc: FiniteCartan, k) -> AffineWeight:
    """sum_i k_i alpha_i as a weight."""
    out = AffineWeight((0,) * fc.rank, 0, 0)
    for i, ki in enumerate(k):
        if ki:
            out = out + simple_root(fc, i).scale(ki)
    return out


def to_root_coords(fc: FiniteCartan, w: AffineWeight) -> tuple:
    """Inverse of :func:`from_root_coords`; NotIntegral off the root lattice."""
    if w.level != 0:
        raise NotIntegral(f"{w} has nonzero level, not in the root lattice")
    k0 = w.degree
    # finite part of w + k0*theta must equal sum_{i>=1} k_i alpha_i
    th_lab = fc.root_labels(fc.theta)
    target = [w.finite[i] + k0 * th_lab[i] for i in range(fc.rank)]
    # labels of alpha_i are column i of A, so target = A k
    Ainv = _cartan_inverse(fc)
    ks = [sum(Ainv[i][j] * target[j] for j in range(fc.rank)) for i in range(fc.rank)]
    coords = [k0] + ks
    if any(Fraction(c).denominator != 1 for c in coords):
        raise NotIntegral(f"{w} is not in the affine root lattice")
    return tuple(int(c) for c in coords)


@lru_cache(maxsize=None)
def _cartan_inverse(fc: FiniteCartan):
    return _inverse([[Fraction(x) for x in row] for row in fc.cartan_matrix])


def weight_form(fc: FiniteCartan, lam: AffineWeight, mu: AffineWeight) -> Fraction:
    """(lam|mu) = (finite|finite) + level(lam) degree(mu) + level(mu) degree(lam)."""
    G = fc.weight_form
    l = fc.rank
    fin = sum(
        (G[i][j] * lam.finite[i] * mu.finite[j] for i in range(l) if lam.finite[i] for j in range(l)),
        Fraction(0),
    )
    return fin + lam.level * mu.degree + mu.level * lam.degree


def weight_root_pairing(fc: FiniteCartan, lam: AffineWeight, k) -> Fraction:
    """(lam | sum k_i alpha_i) computed from the labels of lam."""
    labs = labels(fc, lam)
    d = affine_half_norms(fc)
    return sum((d[i] * labs[i] * k[i] for i in range(len(k)) if k[i]), Fraction(0))


def fundamental_weight(fc: FiniteCartan, i: int) -> AffineWeight:
    """Lambda_i + comark_i Lambda_0 (and Lambda_0 itself for i = 0)."""
    if not 0 <= i <= fc.rank:
        raise IndexOutOfRange(f"fundamental weight index {i} outside 0..{fc.rank}")
    labs = [0] * (fc.rank + 1)
    labs[i] = 1
    return from_labels(fc, labs)


def rho_tilde(fc: FiniteCartan) -> AffineWeight:
    """Sum of the affine fundamental weights: rho + g Lambda_0, degree 0."""
    return from_labels(fc, [1] * (fc.rank + 1))


def is_dominant(fc: FiniteCartan, lam: AffineWeight) -> bool:
    return all(m >= 0 for m in labels(fc, lam))


def is_integral(fc: FiniteCartan, lam: AffineWeight) -> bool:
    return all(Fraction(m).denominator == 1 for m in labels(fc, lam))


# ----------------------------------------------------------------- roots


def positive_roots_up_to(fc: FiniteCartan, max_delta_degree: int) -> list:
    """Positive affine roots with delta coefficient <= cap, with multiplicities."""
    out = [AffineRoot(r, 0, 1) for r in fc.positive_roots]
    zero = (0,) * fc.rank
    for n in range(1, max_delta_degree + 1):
        for r in fc.roots:
            out.append(AffineRoot(r, n, 1))
        out.append(AffineRoot(zero, n, fc.rank))
    return out


@lru_cache(maxsize=None)
def positive_root_coords(fc: FiniteCartan, max_delta_degree: int) -> tuple:
    """((coords, multiplicity), ...) for all positive roots up to the cap."""
    return tuple((r.coords(fc), r.multiplicity) for r in positive_roots_up_to(fc, max_delta_degree))
