"""Group words over two indexed families of variables.

A word is a canonical product of factors v^e where v is a parameter slot
x1, x2, ... or an unknown slot y1, y2, ...  Canonical means adjacent factors
on the same variable are merged and zero exponents are dropped, so equality
of words is plain structural equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union


class ArityError(ValueError):
    """A word mentions a variable slot the supplied arguments do not cover."""


# A factor is (kind, index, exponent) with kind "x" or "y", index >= 1 and
# exponent != 0 once canonical.
Factor = tuple[str, int, int]


def xvar(index: int, exp: int = 1) -> Factor:
    return ("x", index, exp)


def yvar(index: int, exp: int = 1) -> Factor:
    return ("y", index, exp)


@dataclass(frozen=True)
class Word:
    factors: tuple[Factor, ...] = ()

    def length(self) -> int:
        """Sum of absolute exponents, the unit-letter count."""
        return sum(abs(e) for _, _, e in self.factors)

    @property
    def is_trivial(self) -> bool:
        """True exactly for the single factor y1 with exponent 1."""
        return self.factors == (("y", 1, 1),)

    def arities(self) -> tuple[int, int]:
        """Highest mentioned x index and y index, zero when absent."""
        lx = max((i for k, i, _ in self.factors if k == "x"), default=0)
        ly = max((i for k, i, _ in self.factors if k == "y"), default=0)
        return lx, ly

    def var_budget(self) -> int:
        """Highest variable index mentioned across both families."""
        return max(self.arities())

    def __str__(self) -> str:
        return format_word(self)


TRIVIAL_WORD = Word((("y", 1, 1),))


def canonicalize(raw: Iterable[Sequence]) -> Word:
    """Merge adjacent same-variable factors and drop vanished ones.

    A single left-to-right pass with a stack reaches the fixpoint: a merge
    that cancels to exponent zero pops the stack and exposes the previous
    factor to further merging.
    """
    out: list[list] = []
    for item in raw:
        kind, index, exp = item
        if kind not in ("x", "y"):
            raise ValueError(f"unknown variable family {kind!r}")
        if index < 1:
            raise ValueError("variable indices start at 1")
        if exp == 0:
            continue
        if out and out[-1][0] == kind and out[-1][1] == index:
            out[-1][2] += exp
            if out[-1][2] == 0:
                out.pop()
        else:
            out.append([kind, index, exp])
    return Word(tuple((k, i, e) for k, i, e in out))


@dataclass(frozen=True)
class GroupOps:
    """The group operations a word is evaluated through."""

    multiply: Callable
    inverse: Callable
    identity: object


def _power(base, exp: int, ops: GroupOps):
    step = base if exp >= 0 else ops.inverse(base)
    acc = ops.identity
    for _ in range(abs(exp)):
        acc = ops.multiply(acc, step)
    return acc


def evaluate(word: Word, xs: Sequence, ys: Sequence, ops: GroupOps):
    """Substitute xs for the x-slots and ys for the y-slots (1-indexed)."""
    lx, ly = word.arities()
    if lx > len(xs):
        raise ArityError(f"word mentions x{lx} but only {len(xs)} parameters given")
    if ly > len(ys):
        raise ArityError(f"word mentions y{ly} but only {len(ys)} unknowns given")
    acc = ops.identity
    for kind, index, exp in word.factors:
        base = xs[index - 1] if kind == "x" else ys[index - 1]
        acc = ops.multiply(acc, _power(base, exp, ops))
    return acc


_FACTOR_RE = re.compile(r"^([xy])([0-9]+)(?:\^(-?[0-9]+))?$")


def format_word(word: Word) -> str:
    """Render in the text grammar: factors joined by single spaces, exponent
    1 omitted, e.g. "x1 y1^3".  The empty word renders as ""."""
    parts = []
    for kind, index, exp in word.factors:
        parts.append(f"{kind}{index}" if exp == 1 else f"{kind}{index}^{exp}")
    return " ".join(parts)


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text:
        return Word()
    raw = []
    for token in text.split(" "):
        m = _FACTOR_RE.match(token)
        if not m:
            raise ValueError(f"bad word factor {token!r}")
        kind, index, exp = m.group(1), int(m.group(2)), m.group(3)
        raw.append((kind, index, 1 if exp is None else int(exp)))
    return canonicalize(raw)


@dataclass(frozen=True)
class WordSeq:
    """An infinite word sequence given by index, with a declared variable
    budget bounding every mentioned slot index."""

    gen: Callable[[int], Word]
    var_budget: int


NuLike = Union[Callable[[int], int], Sequence[int]]


def nu_at(nu: NuLike, n: int) -> int:
    """Entry n of an exponent sequence; list inputs are zero beyond the end."""
    if callable(nu):
        return nu(n)
    return nu[n] if n < len(nu) else 0


def nu_words(nu: NuLike) -> WordSeq:
    """The one-parameter one-unknown family driven by an exponent sequence:
    entry 0 gives the trivial word y1, entry t >= 1 gives x1 y1^t."""

    def gen(n: int) -> Word:
        t = nu_at(nu, n)
        if t < 0:
            raise ValueError("exponent entries must be naturals")
        if t == 0:
            return TRIVIAL_WORD
        return Word((("x", 1, 1), ("y", 1, t)))

    return WordSeq(gen=gen, var_budget=1)


def nu_from_json(obj: dict) -> Callable[[int], int]:
    """Load {"prefix": [t0, t1, ...], "tail": "zero"} as a total sequence."""
    if obj.get("tail", "zero") != "zero":
        raise ValueError("only zero tails are supported")
    prefix = list(obj.get("prefix", []))
    for t in prefix:
        if not isinstance(t, int) or t < 0:
            raise ValueError("prefix entries must be naturals")
    return lambda n: prefix[n] if n < len(prefix) else 0


def nu_to_json(prefix: Sequence[int]) -> dict:
    return {"prefix": list(prefix), "tail": "zero"}


def random_sparse_nu_prefix(
    rng,
    *,
    span: int = 20,
    max_positions: int = 4,
    max_exp: int = 3,
    length: int = 24,
) -> list[int]:
    """A random exponent prefix that stays easy to obey: a handful of nonzero
    entries inside the span, zeros elsewhere, and a zero tail beyond the
    prefix.  The zero stretches are what witness searches feed on."""
    if length <= span:
        raise ValueError("length must exceed span so the tail stretch exists")
    entries = [0] * length
    for p in rng.sample(range(span), rng.randint(1, max_positions)):
        entries[p] = rng.randint(1, max_exp)
    return entries
