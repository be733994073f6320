"""The affine algebra C[z, 1/z] (x) g + Cc + Cd with its bracket and invariant form.

Loop parts are keyed by ``(n, k)`` meaning ``z**n (x) x_k`` where ``x_k`` is the
k-th Chevalley basis vector of g (see :class:`FiniteCartan.basis_roots`).
The derivation d acts on z**n (x) x as multiplication by n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .finite_cartan import FiniteCartan

ZERO = Fraction(0)


@dataclass(frozen=True)
class LoopElement:
    terms: tuple = ()  # sorted ((n, k), coeff) pairs, no zero coefficients
    c_coef: Fraction = ZERO
    d_coef: Fraction = ZERO

    @classmethod
    def make(cls, terms=None, c=0, d=0) -> "LoopElement":
        items = tuple(sorted((key, Fraction(v)) for key, v in (terms or {}).items() if v))
        return cls(items, Fraction(c), Fraction(d))

    @classmethod
    def basis(cls, n: int, k: int) -> "LoopElement":
        return cls((((n, k), Fraction(1)),))

    @property
    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms and not self.c_coef and not self.d_coef

    def __add__(self, other):
        t = self.as_dict
        for key, v in other.terms:
            t[key] = t.get(key, ZERO) + v
        return LoopElement.make(t, self.c_coef + other.c_coef, self.d_coef + other.d_coef)

    def scale(self, s) -> "LoopElement":
        s = Fraction(s)
        return LoopElement.make({k: v * s for k, v in self.terms}, self.c_coef * s, self.d_coef * s)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)


C = LoopElement.make(c=1)
D = LoopElement.make(d=1)


def bracket(fc: FiniteCartan, x: LoopElement, y: LoopElement) -> LoopElement:
    """[X + a c + b d, Y + a1 c + b1 d] = [X, Y] + b zY' - b1 zX' + Res<X'|Y> c."""
    out: dict = {}
    cent = ZERO
    for (n, a), u in x.terms:
        for (m, b), v in y.terms:
            for k, w in fc.bracket(a, b).items():
                key = (n + m, k)
                out[key] = out.get(key, ZERO) + u * v * w
            if n + m == 0:
                # Res_{z=0} <d/dz (z^n x_a) | z^m x_b> = n (x_a|x_b)
                cent += n * u * v * fc.killing_pair(a, b)
    if x.d_coef:
        for (m, b), v in y.terms:
            if m:
                out[(m, b)] = out.get((m, b), ZERO) + x.d_coef * m * v
    if y.d_coef:
        for (n, a), u in x.terms:
            if n:
                out[(n, a)] = out.get((n, a), ZERO) - y.d_coef * n * u
    return LoopElement.make(out, cent, 0)


def invariant_form(fc: FiniteCartan, x: LoopElement, y: LoopElement) -> Fraction:
    """<X + a c + b d | Y + a1 c + b1 d> = Res(z^-1 <X|Y>) + a b1 + a1 b."""
    total = x.c_coef * y.d_coef + y.c_coef * x.d_coef
    for (n, a), u in x.terms:
        for (m, b), v in y.terms:
            if n + m == 0:
                total += u * v * fc.killing_pair(a, b)
    return total


def cocycle(fc: FiniteCartan, x: LoopElement, y: LoopElement) -> Fraction:
    """c(X, Y) = Res_{z=0} <dX/dz | Y> on loop parts."""
    return bracket(fc, LoopElement(x.terms), LoopElement(y.terms)).c_coef


# ------------------------------------------------------------------ bases


def affine_root_of(fc: FiniteCartan, n: int, k: int) -> tuple:
    """Weight of z^n (x) x_k in simple affine root coordinates (k_0, ..., k_l).

    Uses delta = alpha_0 + theta, so z^n shifts by n*(1, a_1, ..., a_l).
    """
    r = fc.basis_roots[k]
    return (n,) + tuple(n * a + ri for a, ri in zip(fc.marks, r))


@dataclass(frozen=True, order=True)
class NBasisElement:
    """Basis vector z**z_exp (x) x_k of the positive nilpotent part."""

    sort_key: tuple = field(repr=False)
    z_exp: int = 0
    index: int = 0
    weight: tuple = ()

    @property
    def key(self) -> tuple:
        return (self.z_exp, self.index)

    def element(self) -> LoopElement:
        return LoopElement.basis(self.z_exp, self.index)

    def label(self, fc: FiniteCartan) -> str:
        name = fc.basis_name(self.index)
        return name if self.z_exp == 0 else f"z^{self.z_exp}{name}"


def _in_nplus(fc: FiniteCartan, n: int, k: int) -> bool:
    if n > 0:
        return True
    return n == 0 and k < len(fc.positive_roots)


def _in_nminus(fc: FiniteCartan, n: int, k: int) -> bool:
    if n < 0:
        return True
    return n == 0 and k >= len(fc.positive_roots) + fc.rank


@lru_cache(maxsize=None)
def ntilde_basis(fc: FiniteCartan, max_delta_degree: int) -> tuple:
    """Ordered basis of the positive nilpotent part with delta-degree <= cap.

    Ordered by (delta-degree, height of the affine root, g-basis index).
    """
    out = []
    for n in range(max_delta_degree + 1):
        for k in range(fc.dim):
            if _in_nplus(fc, n, k):
                w = affine_root_of(fc, n, k)
                out.append(NBasisElement((n, sum(w), k), n, k, w))
    out.sort()
    return tuple(out)


def nminus_key(fc: FiniteCartan, n: int, k: int) -> tuple:
    """Order key of a negative-part basis vector: that of its opposite in n+.

    The opposite of z^-n (x) x_k is z^n (x) x_{k'} with x_{k'} of opposite root.
    """
    w = affine_root_of(fc, -n, k)
    neg = tuple(-x for x in w)
    return (-n, sum(neg), _opposite_index(fc, k))


def _opposite_index(fc: FiniteCartan, k: int) -> int:
    r = fc.basis_roots[k]
    if not any(r):
        return k
    return fc.root_vector_index[tuple(-x for x in r)]


def bracket_table(fc: FiniteCartan, max_delta_degree: int) -> list:
    """Nonzero brackets between n+ basis vectors, for debugging output."""
    basis = ntilde_basis(fc, max_delta_degree)
    rows = []
    for i, x in enumerate(basis):
        for y in basis[i + 1:]:
            if x.z_exp + y.z_exp > max_delta_degree:
                continue
            z = bracket(fc, x.element(), y.element())
            if z.is_zero():
                continue
            rows.append(
                {
                    "x": x.label(fc),
                    "y": y.label(fc),
                    "bracket": {
                        ("" if n == 0 else f"z^{n}") + fc.basis_name(k): str(v)
                        for (n, k), v in z.terms
                    },
                }
            )
    return rows
