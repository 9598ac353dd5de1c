"""Free-group words and the basepoint-relative length and energy.

Letters are nonzero ints: ``+i`` is the generator ``s_i`` and ``-i`` its
inverse, with ``1..g`` standing for ``a_1..a_g`` and ``g+1..2g`` for
``b_1..b_g``.  A word is a tuple of letters and is kept freely reduced by
every function returning one.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from . import pairings
from .errors import InvalidBasepoint, ParseError

Letter = int
Word = tuple[int, ...]

IDENTITY: Word = ()


def reduce(letters: Iterable[Letter]) -> Word:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def invert(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def word_length(w: Word) -> int:
    return len(w)


def left_cancellation(u: Word, v: Word) -> int:
    """Number of letters of ``v`` cancelled by ``u`` when forming ``uv``.

    Longest common prefix of ``invert(u)`` and ``v``; ``u`` and ``v`` must be
    reduced.
    """
    n = min(len(u), len(v))
    k = 0
    last = len(u) - 1
    while k < n and u[last - k] == -v[k]:
        k += 1
    return k


def concat(u: Word, v: Word) -> Word:
    k = left_cancellation(u, v)
    if k == 0:
        return u + v
    return u[: len(u) - k] + v[k:]


def product(words: Iterable[Word]) -> Word:
    out: list[int] = []
    for w in words:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def substitute(w: Word, images: Sequence[Word]) -> Word:
    """Image of ``w`` under the endomorphism ``s_i -> images[i - 1]``."""
    return product(images[x - 1] if x > 0 else invert(images[-x - 1]) for x in w)


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"^([abAB])(\d*)$")


def letter_token(x: Letter, genus: int) -> str:
    i = abs(x)
    if i <= genus:
        name, k = "a", i
    else:
        name, k = "b", i - genus
    if x < 0:
        name = name.upper()
    return name if genus == 1 else f"{name}{k}"


def parse_letter(token: str, genus: int) -> Letter:
    m = _TOKEN.match(token)
    if not m:
        raise ParseError(f"bad letter token {token!r}")
    name, digits = m.groups()
    if digits:
        k = int(digits)
    elif genus == 1:
        k = 1
    else:
        raise ParseError(f"token {token!r} needs an index at genus {genus}")
    if not 1 <= k <= genus:
        raise ParseError(f"token {token!r} out of range for genus {genus}")
    i = k if name in "aA" else genus + k
    return i if name.islower() else -i


def parse_word(text: str, genus: int) -> Word:
    """Parse whitespace-separated tokens; the result is freely reduced."""
    return reduce(parse_letter(t, genus) for t in text.split())


def format_word(w: Word, genus: int) -> str:
    return " ".join(letter_token(x, genus) for x in w)


def generator_tokens(genus: int) -> list[str]:
    return [letter_token(i, genus) for i in range(1, 2 * genus + 1)]


# -- basepoint and energy ----------------------------------------------------

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def standard_sigma(genus: int) -> Word:
    """Letters of the inverse boundary word of the standard symplectic set.

    With the boundary ``prod [a_i, b_i]`` this is
    ``b_g a_g B_g A_g ... b_1 a_1 B_1 A_1``.
    """
    out: list[int] = []
    for i in range(genus, 0, -1):
        a, b = i, genus + i
        out += [b, a, -b, -a]
    return tuple(out)


@dataclass(frozen=True)
class Basepoint:
    """A fixed CG set: the ordered letters sigma_1..sigma_4g.

    ``sigma`` is also the boundary word as it appears in diagram products.
    The energy digit of ``sigma[j - 1]`` is ``j``.
    """

    genus: int
    sigma: Word
    digit: dict[int, int] = field(init=False, repr=False, compare=False)
    partner: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = self.genus
        if g < 1:
            raise InvalidBasepoint(f"genus must be positive, got {g}")
        sigma = tuple(self.sigma)
        object.__setattr__(self, "sigma", sigma)
        letters = set(range(1, 2 * g + 1)) | set(range(-2 * g, 0))
        if len(sigma) != 4 * g or set(sigma) != letters:
            raise InvalidBasepoint("sigma must use each of the 4g letters exactly once")
        if not is_reduced(sigma):
            raise InvalidBasepoint("boundary word is not reduced")
        where = {x: j for j, x in enumerate(sigma)}
        partner = tuple(where[-x] for x in sigma)
        if pairings.boundary_count(partner) != 1:
            raise InvalidBasepoint("letter pairing has more than one boundary cycle")
        object.__setattr__(self, "digit", {x: j + 1 for j, x in enumerate(sigma)})
        object.__setattr__(self, "partner", partner)

    @classmethod
    def standard(cls, genus: int) -> Basepoint:
        return cls(genus, standard_sigma(genus))

    @property
    def boundary_word(self) -> Word:
        return self.sigma

    @property
    def radix(self) -> int:
        return 4 * self.genus + 1

    def energy(self, w: Word) -> int:
        return energy(w, self)

    def to_text(self) -> str:
        return f"{self.genus}\n{format_word(self.sigma, self.genus)}\n"

    @classmethod
    def from_text(cls, text: str) -> Basepoint:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if len(lines) != 2:
            raise ParseError("basepoint file needs a genus line and a sigma line")
        try:
            genus = int(lines[0])
        except ValueError:
            raise ParseError(f"bad genus {lines[0]!r}") from None
        if genus < 1:
            raise ParseError(f"genus must be positive, got {genus}")
        sigma = tuple(parse_letter(t, genus) for t in lines[1].split())
        try:
            return cls(genus, sigma)
        except InvalidBasepoint as exc:
            raise ParseError(str(exc)) from None


# int(str, base) refuses long inputs for non power-of-two bases
_INT_PARSE_LIMIT = 4000


def energy(w: Word, base: Basepoint) -> int:
    """Radix-(4g+1) value of ``w`` with digit ``j`` for ``sigma_j``.

    The first letter is the most significant digit, so words compare first
    by length and then lexicographically by digit.
    """
    digit = base.digit
    radix = base.radix
    if radix <= 36 and len(w) <= _INT_PARSE_LIMIT:
        if not w:
            return 0
        return int("".join([_DIGITS[digit[x]] for x in w]), radix)
    e = 0
    for x in w:
        e = e * radix + digit[x]
    return e
