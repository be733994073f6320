"""The affine Weyl group as words in the simple reflections r_0, ..., r_l.

Group elements are identified by their image of rho~ (regular dominant, so the
action is faithful).  The stored word is the lexicographically least reduced
word, read off the image by repeatedly stripping the smallest left descent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .affine_roots import (
    AffineWeight,
    affine_cartan_matrix,
    from_labels,
    labels,
    rho_tilde,
    simple_root,
    to_root_coords,
)
from .errors import NotRegularDominant
from .finite_cartan import FiniteCartan


@dataclass(frozen=True, eq=False)
class WeylWord:
    letters: tuple
    cached_image: tuple = field(repr=False)  # (labels of w rho~, degree)

    def __eq__(self, other):
        return isinstance(other, WeylWord) and self.cached_image == other.cached_image

    def __hash__(self):
        return hash(self.cached_image)

    def __len__(self):
        return len(self.letters)

    @property
    def length(self) -> int:
        return len(self.letters)

    def __str__(self):
        return " ".join(f"r{i}" for i in self.letters) or "e"


def reflect(fc: FiniteCartan, lam: AffineWeight, i: int) -> AffineWeight:
    """r_i(lam) = lam - lam(coroot_i) alpha_i."""
    m = labels(fc, lam)[i]
    if not m:
        return lam
    return lam - simple_root(fc, i).scale(m)


def _reflect_labels(A, labs: tuple, deg, i: int):
    m = labs[i]
    if not m:
        return labs, deg
    # labels of alpha_i are column i of the affine Cartan matrix
    new = tuple(labs[j] - m * A[j][i] for j in range(len(labs)))
    return new, deg - m if i == 0 else deg


def _apply_letters(fc, letters, labs, deg):
    A = affine_cartan_matrix(fc)
    for i in reversed(letters):
        labs, deg = _reflect_labels(A, labs, deg, i)
    return labs, deg


def apply(fc: FiniteCartan, w, lam: AffineWeight) -> AffineWeight:
    """Apply w (a WeylWord or sequence of letters), rightmost letter first."""
    letters = w.letters if isinstance(w, WeylWord) else tuple(w)
    labs, deg = _apply_letters(fc, letters, labels(fc, lam), lam.degree)
    return from_labels(fc, labs, deg)


def dot(fc: FiniteCartan, w, lam: AffineWeight) -> AffineWeight:
    """w . lam = w(lam + rho~) - rho~."""
    rho = rho_tilde(fc)
    return apply(fc, w, lam + rho) - rho


@lru_cache(maxsize=None)
def _rho_image(fc: FiniteCartan):
    return tuple(int(x) for x in labels(fc, rho_tilde(fc))), 0


def _word_from_image(fc: FiniteCartan, image) -> tuple:
    A = affine_cartan_matrix(fc)
    labs, deg = image
    rho = _rho_image(fc)
    word = []
    while (labs, deg) != rho:
        i = next(j for j, m in enumerate(labs) if m < 0)
        word.append(i)
        labs, deg = _reflect_labels(A, labs, deg, i)
    return tuple(word)


def from_image(fc: FiniteCartan, image) -> WeylWord:
    return WeylWord(_word_from_image(fc, image), image)


def canonical_reduce(fc: FiniteCartan, letters) -> WeylWord:
    """Lexicographically least reduced word for the product of ``letters``."""
    letters = tuple(letters)
    if any(not 0 <= i <= fc.rank for i in letters):
        raise ValueError(f"generator index out of range in {letters}")
    labs, deg = _rho_image(fc)
    image = _apply_letters(fc, letters, labs, deg)
    return from_image(fc, image)


def identity(fc: FiniteCartan) -> WeylWord:
    return WeylWord((), _rho_image(fc))


def left_descents(fc: FiniteCartan, w: WeylWord) -> list:
    """i with l(r_i w) < l(w)."""
    return [i for i, m in enumerate(w.cached_image[0]) if m < 0]


def multiply_left(fc: FiniteCartan, i: int, w: WeylWord) -> WeylWord:
    A = affine_cartan_matrix(fc)
    return from_image(fc, _reflect_labels(A, *w.cached_image, i))


def enumerate_words(fc: FiniteCartan, max_len: int) -> list:
    """All elements of length <= max_len in canonical form, shortest first."""
    return [w for layer in weyl_layers(fc, max_len) for w in layer]


def weyl_layers(fc: FiniteCartan, max_len: int) -> list:
    """Elements grouped by length: ``layers[k]`` holds those of length k."""
    return _weyl_layers(fc, max_len)


@lru_cache(maxsize=None)
def _weyl_layers(fc: FiniteCartan, max_len: int) -> list:
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    if max_len > 0:
        prev = _weyl_layers(fc, max_len - 1)
        layers = list(prev)
        seen = set()
        nxt = []
        for w in prev[-1]:
            desc = set(left_descents(fc, w))
            for i in range(fc.rank + 1):
                if i in desc:
                    continue
                v = multiply_left(fc, i, w)
                if v.cached_image not in seen:
                    seen.add(v.cached_image)
                    nxt.append(v)
        nxt.sort(key=lambda w: w.letters)
        layers.append(nxt)
        return layers
    return [[identity(fc)]]


def sends_alpha0_to_negative(fc: FiniteCartan, w: WeylWord) -> bool:
    """True iff w alpha_0 = -alpha_0."""
    a0 = simple_root(fc, 0)
    return apply(fc, w, a0) == -a0


def s_index(fc: FiniteCartan, w: WeylWord) -> int:
    """l(w), shifted by l - 1 + sum of the marks when w alpha_0 = -alpha_0."""
    if sends_alpha0_to_negative(fc, w):
        return w.length + fc.rank - 1 + sum(fc.marks)
    return w.length


def root_is_negative(fc: FiniteCartan, weight: AffineWeight) -> bool:
    k = to_root_coords(fc, weight)
    return all(x <= 0 for x in k) and any(k)


def classify_weight(fc: FiniteCartan, mu: AffineWeight, lam: AffineWeight, max_len: int):
    """Return the w of length <= max_len with w . lam = mu, or None.

    ``lam`` must be dominant integral; uniqueness of w is asserted.
    """
    labs = labels(fc, lam)
    if any(m < 0 or m.denominator != 1 for m in labs):
        raise NotRegularDominant(f"{lam} is not dominant integral")
    to_root_coords(fc, lam - mu)  # raises NotIntegral
    found = [w for w in enumerate_words(fc, max_len) if dot(fc, w, lam) == mu]
    if len(found) > 1:
        raise AssertionError(f"dot orbit of {lam} is not free: {found}")
    return found[0] if found else None
