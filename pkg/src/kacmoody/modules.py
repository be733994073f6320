"""Explicit highest-weight modules: Verma modules in a PBW basis, the
Shapovalov form, and the irreducible quotient L(lam).

Weight spaces are indexed by beta (simple affine root coordinates) with weight
``lam - beta``.  A Verma module is realized on the weight window of
:func:`kacmoody.characters.window`; operators whose target falls outside the
window are not stored.  Operator matrices are dense lists of rows of
Fractions, shape (dim target, dim source).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .affine_roots import (
    AffineWeight,
    affine_cartan_matrix,
    is_dominant,
    is_integral,
    labels,
)
from .characters import window
from .errors import NotDominant, WeightOutOfRange
from .finite_cartan import FiniteCartan
from .linalg import echelon, solve_square
from .loop_algebra import LoopElement, affine_root_of, bracket, nminus_key, ntilde_basis

ZERO = Fraction(0)
ONE = Fraction(1)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _unit(fc, i):
    return tuple(int(j == i) for j in range(fc.rank + 1))


def chevalley_generator(fc: FiniteCartan, kind: str, i: int) -> tuple:
    """Loop basis key (n, k) of e_i or f_i; e_0 = z f_theta and f_0 = z^-1 e_theta."""
    idx = fc.root_vector_index
    if i == 0:
        th = fc.theta
        if kind == "e":
            return (1, idx[tuple(-x for x in th)])
        return (-1, idx[th])
    a = fc.simple_roots[i - 1]
    if kind == "e":
        return (0, idx[a])
    return (0, idx[tuple(-x for x in a)])


def anti_involution(fc: FiniteCartan, key) -> tuple:
    """sigma(z^n x_k) = z^-n x_k' with x_k' of opposite root; Cartan fixed."""
    n, k = key
    r = fc.basis_roots[k]
    if not any(r):
        return (-n, k)
    return (-n, fc.root_vector_index[tuple(-x for x in r)])


class PBWVerma:
    """Straightening engine for M(lam) = U(n-) v in an ordered PBW basis.

    Letters are basis vectors of n- (z^-n x with n > 0, or f_alpha) up to
    delta-degree ``depth``, ordered like their opposites in the n+ basis.
    Monomials are nondecreasing tuples of letter ids.
    """

    def __init__(self, fc: FiniteCartan, lam: AffineWeight, depth: int):
        self.fc = fc
        self.lam = lam
        self.depth = depth
        self.labels = labels(fc, lam)
        self.A = affine_cartan_matrix(fc)
        N = len(fc.positive_roots)
        keys = []
        for n in range(0, depth + 1):
            for k in range(fc.dim):
                if n == 0 and k < N + fc.rank:
                    continue
                keys.append((-n, k))
        keys.sort(key=lambda key: nminus_key(fc, *key))
        self.letters = keys
        self.letter_id = {key: i for i, key in enumerate(keys)}
        # beta-contribution of each letter
        self.letter_beta = [tuple(-x for x in affine_root_of(fc, *key)) for key in keys]
        self._act_cache: dict = {}
        self._mono_cache: dict = {}
        self._br_cache: dict = {}

    # -------------------------------------------------------- bookkeeping
    def classify(self, key) -> str:
        if key == "c":
            return "c"
        n, k = key
        N = len(self.fc.positive_roots)
        if n == 0 and N <= k < N + self.fc.rank:
            return "h"
        if n < 0 or (n == 0 and k >= N + self.fc.rank):
            return "-"
        return "+"

    def beta_of(self, mono) -> tuple:
        b = (0,) * (self.fc.rank + 1)
        for y in mono:
            b = _add(b, self.letter_beta[y])
        return b

    def monomials(self, beta) -> list:
        """PBW monomials of weight lam - beta, in lexicographic order."""
        return self._monos(0, tuple(beta))

    def _monos(self, start, rem):
        key = (start, rem)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        out = []
        if not any(rem):
            out.append(())
        else:
            for y in range(start, len(self.letters)):
                lb = self.letter_beta[y]
                if all(a <= b for a, b in zip(lb, rem)):
                    for tail in self._monos(y, _sub(rem, lb)):
                        out.append((y,) + tail)
        self._mono_cache[key] = out
        return out

    def _cartan_eigen(self, key, beta) -> Fraction:
        # x_k = coroot_i for i >= 1 in the affine numbering
        i = key[1] - len(self.fc.positive_roots) + 1
        return self.labels[i] - sum(beta[j] * self.A[i][j] for j in range(len(beta)))

    def _bracket_keys(self, x, y):
        hit = self._br_cache.get((x, y))
        if hit is None:
            z = bracket(self.fc, LoopElement.basis(*x), LoopElement.basis(*y))
            hit = (tuple(z.terms), z.c_coef)
            self._br_cache[(x, y)] = hit
        return hit

    # ---------------------------------------------------------- action
    def act(self, x, mono) -> dict:
        """x . (monomial v) as {monomial: coefficient}; x is a loop key or 'c'."""
        ck = (x, mono)
        hit = self._act_cache.get(ck)
        if hit is not None:
            return hit
        cls = self.classify(x)
        if cls == "c":
            res = {mono: self.lam.level} if self.lam.level else {}
        elif cls == "h":
            ev = self._cartan_eigen(x, self.beta_of(mono))
            res = {mono: ev} if ev else {}
        elif not mono:
            res = {(self.letter_id[x],): ONE} if cls == "-" else {}
        elif cls == "-" and self.letter_id[x] <= mono[0]:
            res = {(self.letter_id[x],) + mono: ONE}
        else:
            y, rest = mono[0], mono[1:]
            res = {}
            ykey = self.letters[y]
            for m, c in self.act(x, rest).items():
                for m2, c2 in self.act(ykey, m).items():
                    res[m2] = res.get(m2, ZERO) + c * c2
            terms, cc = self._bracket_keys(x, ykey)
            for key, c in terms:
                for m2, c2 in self.act(key, rest).items():
                    res[m2] = res.get(m2, ZERO) + c * c2
            if cc and self.lam.level:
                res[rest] = res.get(rest, ZERO) + cc * self.lam.level
            res = {m: c for m, c in res.items() if c}
        self._act_cache[ck] = res
        return res

    def act_vector(self, x, vec: dict) -> dict:
        out: dict = {}
        for m, c in vec.items():
            for m2, c2 in self.act(x, m).items():
                out[m2] = out.get(m2, ZERO) + c * c2
        return {m: c for m, c in out.items() if c}


@dataclass
class GradedModule:
    """Weight-graded module with exact Chevalley generator matrices.

    ``weight_spaces[beta]`` lists basis labels of the space of weight
    ``hw - beta``; ``operators[(kind, i)][beta]`` is the matrix of e_i or f_i
    from that space to the space of ``beta -+ alpha_i``.
    """

    fc: FiniteCartan
    hw: AffineWeight
    depth: int
    kind: str
    weight_spaces: dict
    operators: dict
    engine: PBWVerma = field(default=None, repr=False)
    bound: tuple = ()  # maximal betas of the realized order ideal; () means the whole window
    # irreducible only: beta -> rows mapping Verma coordinates to quotient coordinates
    projection: dict = field(default_factory=dict, repr=False)
    _nplus_ops: dict = field(default_factory=dict, repr=False)

    def covers(self, beta) -> bool:
        """True if every weight space at or above ``hw - beta`` is realized."""
        beta = tuple(beta)
        if beta[0] > self.depth:
            return False
        return not self.bound or any(all(x <= y for x, y in zip(beta, b)) for b in self.bound)

    def dim(self, beta) -> int:
        return len(self.weight_spaces.get(tuple(beta), ()))

    def weights(self) -> list:
        return sorted(self.weight_spaces, key=lambda b: (sum(b), b))

    def dims(self) -> dict:
        return {b: len(v) for b, v in self.weight_spaces.items() if v}

    def matrix(self, kind: str, i: int, beta):
        """Matrix of e_i / f_i on the weight space beta (None if the target is absent)."""
        return self.operators[(kind, i)].get(tuple(beta))

    def target(self, kind: str, i: int, beta) -> tuple:
        u = _unit(self.fc, i)
        return _sub(beta, u) if kind == "e" else _add(beta, u)

    # --------------------------------------------- n+ action via brackets
    def nplus_operator(self, key, beta):
        """Matrix of the n+ basis vector ``key`` = (n, k) on the weight space beta.

        Non-simple vectors are written as combinations of brackets [e_i, y] and
        their matrices are built from simple-generator matrices.
        """
        key = tuple(key)
        beta = tuple(beta)
        cache = self._nplus_ops.setdefault(key, {})
        if beta in cache:
            return cache[beta]
        fc = self.fc
        wt = affine_root_of(fc, *key)
        tgt = _sub(beta, wt)
        src_dim = self.dim(beta)
        tgt_dim = self.dim(tgt) if all(x >= 0 for x in tgt) else 0
        if src_dim == 0 or tgt_dim == 0:
            cache[beta] = _zeros(tgt_dim, src_dim)
            return cache[beta]
        simple = {chevalley_generator(fc, "e", i): i for i in range(fc.rank + 1)}
        if key in simple:
            M = self.matrix("e", simple[key], beta)
            cache[beta] = M if M is not None else _zeros(tgt_dim, src_dim)
            return cache[beta]
        out = _zeros(tgt_dim, src_dim)
        for c, i, ykey in _bracket_decomposition(fc, key):
            # [e_i, y] acts as E_i Y - Y E_i
            mid = _sub(beta, affine_root_of(fc, *ykey))
            if self._present(mid):
                E = self.matrix("e", i, mid)
                if E is not None:
                    _addmul(out, c, E, self.nplus_operator(ykey, beta))
            mid = _sub(beta, _unit(fc, i))
            if self._present(mid):
                E = self.matrix("e", i, beta)
                if E is not None:
                    _addmul(out, -c, self.nplus_operator(ykey, mid), E)
        cache[beta] = out
        return out

    def _present(self, beta) -> bool:
        return all(x >= 0 for x in beta) and self.dim(beta) > 0


def _zeros(m, n):
    return [[ZERO] * n for _ in range(m)]


def _addmul(out, c, A, B):
    """out += c * A @ B."""
    if not A or not B:
        return
    inner = len(B)
    for r in range(len(out)):
        Ar = A[r]
        row = out[r]
        for k in range(inner):
            a = Ar[k]
            if not a:
                continue
            a = a * c
            Bk = B[k]
            for j in range(len(row)):
                if Bk[j]:
                    row[j] += a * Bk[j]


def matmul(A, B, ncols=None):
    if not A:
        return []
    n = ncols if ncols is not None else (len(B[0]) if B else 0)
    out = _zeros(len(A), n)
    _addmul(out, ONE, A, B)
    return out


@lru_cache(maxsize=None)
def _bracket_decomposition(fc: FiniteCartan, key) -> tuple:
    """Write an n+ basis vector as sum c [e_i, y] with y basis vectors of lower height."""
    n, k = key
    wt = affine_root_of(fc, n, k)
    basis = [b for b in ntilde_basis(fc, n) if b.weight == wt]
    pos = {b.key: j for j, b in enumerate(basis)}
    cands = []
    rows = []
    for i in range(fc.rank + 1):
        ei = chevalley_generator(fc, "e", i)
        ywt = _sub(wt, _unit(fc, i))
        if any(x < 0 for x in ywt):
            continue
        for y in ntilde_basis(fc, n):
            if y.weight != ywt:
                continue
            z = bracket(fc, LoopElement.basis(*ei), y.element())
            vec = [ZERO] * len(basis)
            for kk, v in z.terms:
                vec[pos[kk]] += v
            if any(vec):
                cands.append((i, y.key))
                rows.append(vec)
    # choose independent candidates spanning the root space, then solve
    _, _, chosen = echelon(rows, len(basis))
    if len(chosen) != len(basis):
        raise ArithmeticError(f"brackets of simple generators do not span the root space of {key}")
    M = [[rows[c][r] for c in chosen] for r in range(len(basis))]
    target = [ONE if b.key == key else ZERO for b in basis]
    (coef,) = solve_square(M, [target])
    return tuple((coef[j], cands[c][0], cands[c][1]) for j, c in enumerate(chosen) if coef[j])


# ------------------------------------------------------------ construction


def _sparse_cols_to_dense(cols, row_index, nrows):
    M = _zeros(nrows, len(cols))
    for j, vec in enumerate(cols):
        for m, c in vec.items():
            M[row_index[m]][j] = c
    return M


def build_verma(fc: FiniteCartan, lam: AffineWeight, depth: int, bound=()) -> GradedModule:
    """M(lam) on the weight window, with matrices of all e_i and f_i.

    With ``bound`` (a list of betas) only the window weights lying below some
    element of ``bound`` are realized.
    """
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    bound = tuple(sorted({tuple(b) for b in bound}))
    eng = PBWVerma(fc, lam, depth)
    win = window(fc, lam, depth)
    if bound:
        win = [b for b in win if any(all(x <= y for x, y in zip(b, c)) for c in bound)]
    spaces = {b: eng.monomials(b) for b in win}
    index = {b: {m: j for j, m in enumerate(ms)} for b, ms in spaces.items()}
    ops = {}
    for kind in "ef":
        for i in range(fc.rank + 1):
            x = chevalley_generator(fc, kind, i)
            u = _unit(fc, i)
            table = {}
            for b, ms in spaces.items():
                t = _sub(b, u) if kind == "e" else _add(b, u)
                if t not in spaces:
                    continue
                cols = [eng.act(x, m) for m in ms]
                table[b] = _sparse_cols_to_dense(cols, index[t], len(spaces[t]))
            ops[(kind, i)] = table
    return GradedModule(fc, lam, depth, "verma", spaces, ops, eng, bound)


def shapovalov_gram(m: GradedModule, beta) -> list:
    """Gram matrix of the contravariant form on M(lam)_{lam - beta}, <v, v> = 1.

    Uses <y u, u'> = <u, sigma(y) u'> where sigma is the anti-involution
    exchanging e_i and f_i.
    """
    if m.kind != "verma":
        raise ValueError("shapovalov_gram needs a Verma module")
    beta = tuple(beta)
    if beta not in m.weight_spaces:
        raise WeightOutOfRange(f"{beta} is outside the realized window")
    return _gram(m, beta)


def _gram(m: GradedModule, beta):
    cache = m.__dict__.setdefault("_gram_cache", {})
    if beta in cache:
        return cache[beta]
    eng = m.engine
    ms = eng.monomials(beta)
    if not any(beta):
        G = [[ONE]]
    else:
        G = _zeros(len(ms), len(ms))
        by_first: dict = {}
        for a, mono in enumerate(ms):
            by_first.setdefault(mono[0], []).append(a)
        for y, rows in by_first.items():
            sig = anti_involution(m.fc, eng.letters[y])
            lower = _sub(beta, eng.letter_beta[y])
            lower_ms = eng.monomials(lower)
            lidx = {mm: j for j, mm in enumerate(lower_ms)}
            Gl = _gram(m, lower)
            for b, mono2 in enumerate(ms):
                img = eng.act(sig, mono2)
                if not img:
                    continue
                for a in rows:
                    rest = ms[a][1:]
                    row = Gl[lidx[rest]]
                    s = ZERO
                    for mm, c in img.items():
                        g = row[lidx[mm]]
                        if g:
                            s += c * g
                    G[a][b] = s
    cache[beta] = G
    return G


def irreducible_quotient(m: GradedModule) -> GradedModule:
    """L(lam) = M(lam) / radical of the Shapovalov form, weight space by weight space.

    The radical at beta is the set of u with e_i u in the radical at
    beta - alpha_i for all i (the Verma module is generated by the f_i), so
    each layer is cut out by a small matrix built from the layer above.
    """
    fc = m.fc
    if m.kind != "verma":
        raise ValueError("irreducible_quotient needs a Verma module")
    if not (is_dominant(fc, m.hw) and is_integral(fc, m.hw)):
        raise NotDominant(f"{m.hw} is not dominant integral")
    Q = {}  # beta -> reduced rows whose kernel is the radical
    piv = {}
    for b in m.weights():
        n = m.dim(b)
        if not any(b):
            Q[b], piv[b] = [[ONE]], [0]
            continue
        rows = []
        for i in range(fc.rank + 1):
            t = m.target("e", i, b)
            if t not in Q or not Q[t]:
                continue
            E = m.matrix("e", i, b)
            rows.extend(matmul(Q[t], E, n))
        red, pivots, _ = echelon(rows, n) if rows else ([], [], [])
        Q[b], piv[b] = red, pivots
    spaces = {b: [m.weight_spaces[b][p] for p in piv[b]] for b in Q if piv[b]}
    ops = {}
    for (kind, i), table in m.operators.items():
        new = {}
        for b in spaces:
            t = m.target(kind, i, b)
            if t not in spaces:
                continue
            M = table.get(b)
            # columns at the pivot monomials of b, projected by Q at the target
            sub = [[row[p] for p in piv[b]] for row in M]
            new[b] = matmul(Q[t], sub, len(piv[b]))
        ops[(kind, i)] = new
    # ranks are certified against the explicit Gram matrix in the tests
    proj = {b: Q[b] for b in spaces}
    return GradedModule(fc, m.hw, m.depth, "irreducible", spaces, ops, m.engine, m.bound, proj)


def build_irreducible(fc: FiniteCartan, lam: AffineWeight, depth: int, bound=()) -> GradedModule:
    return irreducible_quotient(build_verma(fc, lam, depth, bound))


def cartan_eigenvalue(m: GradedModule, i: int, beta) -> Fraction:
    """Value of (hw - beta) on the simple coroot i."""
    A = affine_cartan_matrix(m.fc)
    labs = labels(m.fc, m.hw)
    return labs[i] - sum(beta[j] * A[i][j] for j in range(len(beta)))
