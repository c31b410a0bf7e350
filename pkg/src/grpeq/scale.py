"""Growth scales over a null sequence, and witnesses that a word sequence
leaves room for stabilization.

A scale is a strictly increasing sequence of naturals j_0 = 0 < j_1 < ...
where each step is the least value that (a) bounds the images of all earlier
points under all earlier terms and their inverses, (b) dominates the mover
bound of all earlier points, and (c) clears a configured budget gap.  The
minimality of each step is what verify_scale rechecks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .perm import NullSequence
from .words import Word, WordSeq


class NotObeying(Exception):
    """No witness exists below the search bound for some target pair."""

    def __init__(self, n_star: int, m_star: int):
        self.n_star = n_star
        self.m_star = m_star
        super().__init__(f"no witness for pair ({n_star}, {m_star})")


class Scale:
    """A materialized scale prefix, optionally backed by an extender that
    computes further entries on demand.  Reads are pure: extending the memo
    never changes previously returned values."""

    def __init__(
        self,
        values: list[int],
        budget: int,
        extend: Optional[Callable[[list[int]], int]] = None,
    ):
        self._values = list(values)
        self.budget = budget
        self._extend = extend

    def value(self, n: int) -> int:
        if n < 0:
            raise IndexError("negative scale index")
        while n >= len(self._values):
            if self._extend is None:
                raise IndexError(
                    f"scale prefix has {len(self._values)} entries, asked for {n}"
                )
            self._values.append(self._extend(self._values))
        return self._values[n]

    def prefix(self, count: int) -> list[int]:
        return [self.value(n) for n in range(count)]

    def materialized(self) -> list[int]:
        return list(self._values)

    @classmethod
    def from_values(cls, values, budget: int, validate: bool = True) -> "Scale":
        values = list(values)
        if validate:
            if not values or values[0] != 0:
                raise ValueError("a scale starts at 0")
            for a, b in zip(values, values[1:]):
                if b - a <= budget:
                    raise ValueError(f"gap {a} -> {b} does not clear budget {budget}")
        return cls(values, budget)


def _next_scale_entry(d: NullSequence, budget: int, js: list[int]) -> int:
    """The least admissible next entry after the prefix js.

    Admissibility is a conjunction of lower bounds, so the minimum is their
    maximum: the budget gap, strict bounds on where earlier terms send
    earlier points (both directions), and the mover bounds of earlier points.
    """
    jn = js[-1]
    n = len(js) - 1
    bound = jn + budget + 1
    for idx in range(n + 1):
        p = d.perm(idx)
        for m in range(jn):
            img = p.apply(m)
            pre = p.inverse_apply(m)
            if img + 1 > bound:
                bound = img + 1
            if pre + 1 > bound:
                bound = pre + 1
    for m in range(jn):
        k = d.mover_bound(m)
        if k > bound:
            bound = k
    return bound


def build_scale(d: NullSequence, budget: int, count: int) -> Scale:
    """Build the scale over d with the given budget, materializing count
    entries.  The scale keeps d as its extender, so later entries can be
    demanded lazily."""
    if budget < 0:
        raise ValueError("budget must be a natural")
    scale = Scale([0], budget, extend=lambda js: _next_scale_entry(d, budget, js))
    scale.prefix(count)
    return scale


def verify_scale(d: NullSequence, s: Scale, up_to: int) -> bool:
    """Recheck the first up_to entries clause by clause, including that each
    step is the least admissible value, by recomputation from d."""
    if up_to <= 0:
        return True
    if s.value(0) != 0:
        return False
    js = [0]
    for n in range(1, up_to):
        expected = _next_scale_entry(d, s.budget, js)
        if s.value(n) != expected:
            return False
        js.append(expected)
    return True


@dataclass(frozen=True)
class ObeysWitness:
    """A certificate that zeros stretch far enough for the pair (n*, m*).

    The interval of scale values [j(i0), j(i1)] carries only trivial words,
    and the words between n* and j(i0) are jointly shorter than i1 - i0.
    cum_lengths[p] is the total length of words n*, ..., n*+p-1, so it runs
    from 0 at p = 0 up to index j(i0) - n*.
    """

    n_star: int
    m_star: int
    i0: int
    i1: int
    cum_lengths: tuple[int, ...]

    def as_json(self) -> dict:
        return {
            "nStar": self.n_star,
            "mStar": self.m_star,
            "i0": self.i0,
            "i1": self.i1,
        }


def _cum_lengths(w: WordSeq, n_star: int, j0: int) -> tuple[int, ...]:
    out = [0]
    for i in range(n_star, j0):
        out.append(out[-1] + w.gen(i).length())
    return tuple(out)


def make_witness(w: WordSeq, s: Scale, n_star: int, m_star: int, i0: int, i1: int) -> ObeysWitness:
    """Build and validate a witness for the given indices, raising ValueError
    when any clause fails.  Used both by the searcher and by rechecks."""
    if not (0 <= m_star < i0):
        raise ValueError("need m_star < i0")
    if not (0 <= n_star < i1):
        raise ValueError("need n_star < i1")
    if not i0 < i1:
        raise ValueError("need i0 < i1")
    j0 = s.value(i0)
    j1 = s.value(i1)
    for t in range(j0, j1 + 1):
        if not w.gen(t).is_trivial:
            raise ValueError(f"word at {t} is not trivial")
    cum = _cum_lengths(w, n_star, j0)
    total = cum[-1] + w.gen(j0).length()
    if not total < i1 - i0:
        raise ValueError(f"length sum {total} does not beat gap {i1 - i0}")
    return ObeysWitness(n_star, m_star, i0, i1, cum)


def check_witness(w: WordSeq, s: Scale, wit: ObeysWitness) -> bool:
    """Independent recheck of every clause of an existing witness."""
    try:
        rebuilt = make_witness(w, s, wit.n_star, wit.m_star, wit.i0, wit.i1)
    except (ValueError, IndexError):
        return False
    return rebuilt.cum_lengths == wit.cum_lengths


def find_witness(
    w: WordSeq,
    s: Scale,
    n_star: int,
    m_star: int,
    search_bound: int,
) -> Optional[ObeysWitness]:
    """The lexicographically least witness pair (i0, i1) with i1 bounded by
    search_bound, or None.

    For a fixed i0 the length-sum clause pins the least admissible i1; a
    larger i1 only widens the triviality interval, so when the least i1
    fails triviality no i1 works for that i0 and the search advances i0.
    """
    if w.var_budget > s.budget:
        raise ValueError("word budget exceeds the scale budget")
    for i0 in range(m_star + 1, search_bound + 1):
        j0 = s.value(i0)
        cum = _cum_lengths(w, n_star, j0)
        total = cum[-1] + w.gen(j0).length()
        i1 = max(i0 + total + 1, n_star + 1)
        if i1 > search_bound:
            continue
        j1 = s.value(i1)
        if all(w.gen(t).is_trivial for t in range(j0, j1 + 1)):
            return ObeysWitness(n_star, m_star, i0, i1, cum)
    return None


def obeys_certificate(
    w: WordSeq,
    s: Scale,
    up_to: int,
    search_bound: int,
) -> list[ObeysWitness]:
    """Witnesses for every pair below up_to, in row-major pair order.
    Raises NotObeying at the first pair without a witness."""
    out = []
    for n_star in range(up_to):
        for m_star in range(up_to):
            wit = find_witness(w, s, n_star, m_star, search_bound)
            if wit is None:
                raise NotObeying(n_star, m_star)
            out.append(wit)
    return out
