"""Finite-type root data and a Chevalley basis for the simple Lie algebra g.

Simple roots are numbered as in Bourbaki.  Roots are integer vectors in the
simple-root basis, the invariant form is normalized by (theta|theta) = 2 and
the Cartan matrix follows A[i][j] = alpha_j(coroot_i).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

from .errors import InvalidType

SERIES = "ABCDEFG"

Root = tuple  # tuple[int, ...] in simple-root coordinates


def _valid(series: str, rank: int) -> bool:
    return {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 3,
        "D": rank >= 4,
        "E": 6 <= rank <= 8,
        "F": rank == 4,
        "G": rank == 2,
    }.get(series, False)


def parse_type(text: str) -> tuple[str, int]:
    """Parse strings such as ``"A1"``, ``"g2"`` or ``"A2~"`` (affine marker ignored)."""
    m = re.fullmatch(r"\s*([A-Za-z])\s*_?\s*(\d+)\s*(~|\^\(1\))?\s*", text)
    if not m:
        raise InvalidType(f"cannot parse algebra type {text!r}")
    series, rank = m.group(1).upper(), int(m.group(2))
    if not _valid(series, rank):
        raise InvalidType(f"{series}{rank} is not a finite type")
    return series, rank


def cartan_matrix(series: str, rank: int) -> tuple[tuple[int, ...], ...]:
    if not _valid(series, rank):
        raise InvalidType(f"{series}{rank} is not a finite type")
    l = rank
    A = [[2 if i == j else 0 for j in range(l)] for i in range(l)]

    def link(i, j, aij=-1, aji=-1):
        # 1-based Bourbaki labels
        A[i - 1][j - 1] = aij
        A[j - 1][i - 1] = aji

    if series in "ABCD":
        chain = l - 1 if series == "D" else l
        for i in range(1, chain):
            link(i, i + 1)
        if series == "B":
            link(l - 1, l, -1, -2)  # alpha_l short
        elif series == "C":
            link(l - 1, l, -2, -1)  # alpha_l long
        elif series == "D":
            link(l - 2, l)
    elif series == "E":
        link(1, 3)
        link(3, 4)
        link(2, 4)
        for i in range(4, l):
            link(i, i + 1)
    elif series == "F":
        link(1, 2)
        link(2, 3, -1, -2)
        link(3, 4)
    elif series == "G":
        link(1, 2, -3, -1)  # alpha_1 short
    return tuple(tuple(row) for row in A)


def _symmetrizer(A) -> list[Fraction]:
    """d_i with d_i A_ij = d_j A_ji, up to a common scale."""
    l = len(A)
    d = [None] * l
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(l):
            if j != i and A[i][j] != 0 and d[j] is None:
                d[j] = d[i] * A[i][j] / A[j][i]
                stack.append(j)
    return d


def _root_closure(A) -> list[Root]:
    """Positive roots by the string algorithm; independent of the form."""
    l = len(A)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(l):
                # p = length of the alpha_i-string below beta
                p = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    if tuple(cur) in roots:
                        p += 1
                    else:
                        break
                pair = sum(beta[j] * A[i][j] for j in range(l))
                if p - pair > 0:
                    new = tuple(beta[j] + (j == i) for j in range(l))
                    if new not in roots:
                        roots.add(new)
                        nxt.append(new)
        layer = nxt
    return sorted(roots, key=root_order_key)


def root_order_key(root):
    # height first; within a height alpha_1 comes before alpha_2, etc.
    return (sum(root), tuple(-c for c in root))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


class FiniteCartan:
    """Immutable root datum of a finite-type simple Lie algebra.

    Build instances with :func:`build_finite_cartan`, which caches them.
    """

    def __init__(self, series: str, rank: int):
        self.series = series
        self.rank = rank
        A = cartan_matrix(series, rank)
        self.cartan_matrix = A
        self.positive_roots: tuple[Root, ...] = tuple(_root_closure(A))
        self.theta: Root = max(self.positive_roots, key=sum)
        self.marks: tuple[int, ...] = tuple(self.theta)
        d = _symmetrizer(A)
        l = rank
        th = self.theta
        norm = sum(th[i] * th[j] * d[i] * A[i][j] for i in range(l) for j in range(l))
        scale = Fraction(2) / norm
        # half squared lengths of simple roots
        self.half_norms: tuple[Fraction, ...] = tuple(x * scale for x in d)
        self.sym_form = tuple(
            tuple(self.half_norms[i] * A[i][j] for j in range(l)) for i in range(l)
        )
        self.comarks: tuple[int, ...] = tuple(
            int(self.marks[i] * self.half_norms[i]) for i in range(l)
        )
        self.coxeter_g = 1 + sum(self.comarks)

    def __repr__(self):
        return f"FiniteCartan({self.series}{self.rank})"

    def __reduce__(self):
        return (build_finite_cartan, (self.series, self.rank))

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    # ------------------------------------------------------------ roots
    @cached_property
    def roots(self) -> tuple[Root, ...]:
        """All roots: positive ones followed by their negatives."""
        return self.positive_roots + tuple(_neg(r) for r in self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @cached_property
    def simple_roots(self) -> tuple[Root, ...]:
        l = self.rank
        return tuple(tuple(int(i == j) for j in range(l)) for i in range(l))

    def is_root(self, r) -> bool:
        return tuple(r) in self.root_set

    def height(self, r) -> int:
        return sum(r)

    def form(self, x, y) -> Fraction:
        """(x|y) for vectors in simple-root coordinates."""
        B = self.sym_form
        l = self.rank
        return sum(
            (B[i][j] * x[i] * y[j] for i in range(l) if x[i] for j in range(l) if y[j]),
            Fraction(0),
        )

    def pairing(self, r, i: int) -> int:
        """<r, coroot_i> for r in simple-root coordinates."""
        A = self.cartan_matrix
        return sum(r[j] * A[i][j] for j in range(self.rank))

    def coroot(self, r) -> tuple[Fraction, ...]:
        """Coefficients of the coroot of r in the simple coroots."""
        half = self.form(r, r) / 2
        return tuple(r[i] * self.half_norms[i] / half for i in range(self.rank))

    def reflect_root(self, r, i: int) -> Root:
        p = self.pairing(r, i)
        return tuple(r[j] - p * (j == i) for j in range(self.rank))

    def string_below(self, alpha, beta) -> int:
        """max k with beta - k*alpha a root."""
        k = 0
        cur = tuple(beta)
        while True:
            cur = tuple(b - a for a, b in zip(alpha, cur))
            if cur in self.root_set:
                k += 1
            else:
                return k

    # ------------------------------------------------------ weight forms
    @cached_property
    def weight_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix of (.|.) on the fundamental weights."""
        l = self.rank
        Ainv = _inverse([[Fraction(x) for x in row] for row in self.cartan_matrix])
        # (Lambda_i|Lambda_j) = (A^{-1})_{ji} * d_j
        return tuple(
            tuple(Ainv[j][i] * self.half_norms[j] for j in range(l)) for i in range(l)
        )

    def root_labels(self, r) -> tuple[int, ...]:
        """Dynkin labels <r, coroot_i> of a root-lattice vector."""
        return tuple(self.pairing(r, i) for i in range(self.rank))

    @cached_property
    def rho_labels(self) -> tuple[int, ...]:
        return (1,) * self.rank

    # --------------------------------------------------- Lie algebra g
    @property
    def dim(self) -> int:
        return 2 * len(self.positive_roots) + self.rank

    @cached_property
    def basis_roots(self) -> tuple:
        """Root of each basis vector of g (zero vector for the Cartan part).

        Basis order: e_alpha (positive roots in order), h_1..h_l, f_alpha.
        """
        zero = (0,) * self.rank
        return (
            self.positive_roots
            + (zero,) * self.rank
            + tuple(_neg(r) for r in self.positive_roots)
        )

    @cached_property
    def root_vector_index(self) -> dict:
        """Basis index of e_r for every root r (positive or negative)."""
        N = len(self.positive_roots)
        out = {}
        for k, r in enumerate(self.positive_roots):
            out[r] = k
            out[_neg(r)] = N + self.rank + k
        return out

    def cartan_index(self, i: int) -> int:
        return len(self.positive_roots) + i

    def basis_name(self, k: int) -> str:
        N = len(self.positive_roots)
        l = self.rank
        if k < N:
            return "e" + _root_name(self.positive_roots[k])
        if k < N + l:
            return f"h{k - N + 1}"
        return "f" + _root_name(self.positive_roots[k - N - l])

    @cached_property
    def chevalley_N(self) -> dict:
        return chevalley_constants(self)

    @cached_property
    def _bracket_table(self) -> dict:
        return _build_bracket_table(self)

    def bracket(self, a: int, b: int) -> dict:
        """[x_a, x_b] as {basis index: coefficient}."""
        return self._bracket_table.get((a, b), {})

    def killing_pair(self, a: int, b: int) -> Fraction:
        """Invariant form (x_a|x_b) normalized by (theta|theta) = 2."""
        N = len(self.positive_roots)
        l = self.rank
        if N <= a < N + l and N <= b < N + l:
            i, j = a - N, b - N
            # (coroot_i|coroot_j) = 2 A_ij / (alpha_j|alpha_j)
            return Fraction(self.cartan_matrix[i][j]) / self.half_norms[j]
        ra, rb = self.basis_roots[a], self.basis_roots[b]
        if any(ra) and tuple(-x for x in rb) == ra:
            return 1 / (self.form(ra, ra) / 2)
        return Fraction(0)

    def describe(self) -> dict:
        return {
            "type": self.name,
            "cartan_matrix": [list(r) for r in self.cartan_matrix],
            "positive_roots": [list(r) for r in self.positive_roots],
            "theta": list(self.theta),
            "marks": list(self.marks),
            "comarks": list(self.comarks),
            "coxeter_g": self.coxeter_g,
            "root_lengths_sq": [str(2 * h) for h in self.half_norms],
        }


def _root_name(r) -> str:
    return "[" + ",".join(str(abs(c)) for c in r) + "]"


def _inverse(M):
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def build_finite_cartan(series: str, rank: int) -> FiniteCartan:
    series = series.upper()
    if not _valid(series, rank):
        raise InvalidType(f"{series}{rank} is not a finite type")
    return FiniteCartan(series, rank)


def from_string(text: str) -> FiniteCartan:
    return build_finite_cartan(*parse_type(text))


# ------------------------------------------------------------------------
# Chevalley structure constants


def chevalley_constants(fc: FiniteCartan) -> dict:
    """Structure constants N[(r, s)] with [e_r, e_s] = N e_{r+s}.

    Defined for every pair of roots r, s with r + s a root.  Signs are fixed
    by declaring N positive on extraspecial pairs, where the extraspecial
    pair of a non-simple positive root xi is (alpha_i, xi - alpha_i) with i
    the smallest index such that xi - alpha_i is a root.
    """
    pos = fc.positive_roots
    posset = set(pos)
    rootset = fc.root_set
    P: dict = {}  # positive pairs only

    def nn(r, s):
        """N for arbitrary roots; positive pairs must already be in P."""
        t = _add(r, s)
        if t not in rootset:
            return 0
        rp, sp = r in posset, s in posset
        if rp and sp:
            return P[(r, s)]
        if not rp and not sp:
            return -P[(_neg(r), _neg(s))]
        if not rp:
            return -nn(s, r)
        # r positive, s negative; u = -(r+s) closes the triangle r + s + u = 0
        u = _neg(t)
        # N_{r,s}/(u,u) = N_{s,u}/(r,r) = N_{u,r}/(s,s)
        if t in posset:
            # s, u negative
            return -fc.form(u, u) / fc.form(r, r) * P[(_neg(s), _neg(u))]
        return fc.form(u, u) / fc.form(s, s) * P[(u, r)]

    for xi in pos:
        if sum(xi) == 1:
            continue
        gi = next(i for i in range(fc.rank) if _add(xi, _neg(fc.simple_roots[i])) in posset)
        gamma = fc.simple_roots[gi]
        delta = _add(xi, _neg(gamma))
        p = fc.string_below(gamma, delta)
        P[(gamma, delta)] = p + 1
        P[(delta, gamma)] = -(p + 1)
        n_gd = -(p + 1)  # N_{-gamma,-delta}
        xx = fc.form(xi, xi)
        for a in pos:
            b = _add(xi, _neg(a))
            if b not in posset or (a, b) in P:
                continue
            total = Fraction(0)
            bg = _add(b, _neg(gamma))
            if bg in rootset:
                total -= nn(b, _neg(gamma)) * nn(a, _neg(delta)) / fc.form(bg, bg)
            ag = _add(a, _neg(gamma))
            if ag in rootset:
                total -= nn(_neg(gamma), a) * nn(b, _neg(delta)) / fc.form(ag, ag)
            val = total * xx / n_gd
            assert val.denominator == 1, (xi, a, b, val)
            P[(a, b)] = int(val)
            P[(b, a)] = -int(val)

    out = {}
    for r in fc.roots:
        for s in fc.roots:
            if _add(r, s) in rootset:
                v = nn(r, s)
                out[(r, s)] = int(v)
    return out


def _build_bracket_table(fc: FiniteCartan) -> dict:
    """Sparse table {(a, b): {c: coeff}} of the bracket on the Chevalley basis."""
    N = len(fc.positive_roots)
    l = fc.rank
    roots = fc.basis_roots
    idx = fc.root_vector_index
    Nc = fc.chevalley_N
    table = {}
    dim = fc.dim
    for a, b in product(range(dim), repeat=2):
        ra, rb = roots[a], roots[b]
        ha, hb = not any(ra), not any(rb)
        res = {}
        if ha and hb:
            pass
        elif ha:
            val = fc.pairing(rb, a - N)
            if val:
                res[b] = Fraction(val)
        elif hb:
            val = fc.pairing(ra, b - N)
            if val:
                res[a] = Fraction(-val)
        elif _add(ra, rb) == (0,) * l:
            # [e_r, e_{-r}] = coroot of r, sign flips for negative r
            cor = fc.coroot(ra)
            for i in range(l):
                if cor[i]:
                    res[N + i] = cor[i]
        else:
            s = _add(ra, rb)
            if s in idx:
                res[idx[s]] = Fraction(Nc[(ra, rb)])
        if res:
            table[(a, b)] = res
    return table
