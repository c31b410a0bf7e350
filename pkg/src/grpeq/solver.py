"""Finite approximants and lazy limits for forward-referencing equation
systems over finitely supported permutations.

The system assigns row n the equation b_n = w_n(d_{n+1}, ...; b_{n+1}, ...),
where every unknown on the right has a higher row index.  Truncating at k
(rows beyond k become the identity) makes each table finite; an obeys
witness turns truncation into stabilization: past the bound derived from the
witness, raising k stops changing the watched values, so the limit can be
read off a single finite table.
"""

from __future__ import annotations

from typing import Callable

from .perm import IDENTITY, NullSequence, Perm, Structure, compose
from .scale import ObeysWitness, Scale, find_witness
from .words import GroupOps, WordSeq, evaluate

PERM_OPS = GroupOps(
    multiply=compose,
    inverse=lambda p: p.inverse(),
    identity=IDENTITY,
)


class WitnessNotFound(Exception):
    """No stabilization witness below the search bound for a queried point."""

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        super().__init__(f"no witness for point (n={n}, m={m}) within the search bound")


class ApproxTable:
    """Rows 0..k of the truncated system, solved by downward substitution."""

    def __init__(self, k: int, rows: list[Perm]):
        self.k = k
        self._rows = rows

    def row(self, n: int) -> Perm:
        if n < 0:
            raise IndexError("negative row")
        return self._rows[n] if n <= self.k else IDENTITY


def approx(d: NullSequence, w: WordSeq, k: int) -> ApproxTable:
    """Solve the truncation at k.  Row n substitutes the parameter terms
    d_{n+1}, d_{n+2}, ... and the already-solved rows n+1, n+2, ...; rows
    beyond k are the identity."""
    rows: list[Perm] = [IDENTITY] * (k + 1)
    for n in range(k, -1, -1):
        word = w.gen(n)
        lx, ly = word.arities()
        xs = [d.perm(n + i) for i in range(1, lx + 1)]
        ys = [rows[n + i] if n + i <= k else IDENTITY for i in range(1, ly + 1)]
        rows[n] = evaluate(word, xs, ys, PERM_OPS)
    return ApproxTable(k, rows)


def stabilization_bound(wit: ObeysWitness, s: Scale) -> int:
    """The truncation depth past which the witnessed point stops moving:
    the scale value one step beyond the witness interval."""
    return s.value(wit.i1 + 1)


class LimitAutomorphism:
    """Pointwise access to the limit rows b*_n.

    Every query (n, m) finds its own witness, reads the value off the table
    at the witness's stabilization bound, and memoizes.  The memo is an
    optimization only: cached and recomputed answers must coincide.
    """

    def __init__(self, d: NullSequence, w: WordSeq, s: Scale, search_bound: int = 128):
        self.d = d
        self.w = w
        self.s = s
        self.search_bound = search_bound
        self._witnesses: dict[tuple[int, int], ObeysWitness] = {}
        self._tables: dict[int, ApproxTable] = {}
        self._values: dict[tuple[int, int], int] = {}
        self._inverse_values: dict[tuple[int, int], int] = {}

    def witness(self, n: int, m: int) -> ObeysWitness:
        key = (n, m)
        if key not in self._witnesses:
            wit = find_witness(self.w, self.s, n, m, self.search_bound)
            if wit is None:
                raise WitnessNotFound(n, m)
            self._witnesses[key] = wit
        return self._witnesses[key]

    def table(self, k: int) -> ApproxTable:
        if k not in self._tables:
            self._tables[k] = approx(self.d, self.w, k)
        return self._tables[k]

    def apply(self, n: int, m: int) -> int:
        key = (n, m)
        if key not in self._values:
            k = stabilization_bound(self.witness(n, m), self.s)
            self._values[key] = self.table(k).row(n).apply(m)
        return self._values[key]

    def inverse_apply(self, n: int, m: int) -> int:
        key = (n, m)
        if key not in self._inverse_values:
            k = stabilization_bound(self.witness(n, m), self.s)
            self._inverse_values[key] = self.table(k).row(n).inverse_apply(m)
        return self._inverse_values[key]


def _apply_word_pointwise(limit: LimitAutomorphism, n: int, m: int) -> int:
    """Evaluate row n's right side at the point m, chasing each unit letter
    through either a concrete parameter term or a lazy limit row."""
    current = m
    for kind, index, exp in reversed(limit.w.gen(n).factors):
        for _ in range(abs(exp)):
            if kind == "x":
                p = limit.d.perm(n + index)
                current = p.apply(current) if exp > 0 else p.inverse_apply(current)
            else:
                row = n + index
                current = (
                    limit.apply(row, current)
                    if exp > 0
                    else limit.inverse_apply(row, current)
                )
    return current


def verify_solution(limit: LimitAutomorphism, n_window: int, m_window: int) -> list[dict]:
    """Compare every limit value on the window against the pointwise
    evaluation of its defining equation.  Returns the discrepancy list,
    empty when the window checks out."""
    problems = []
    for n in range(n_window):
        for m in range(m_window):
            got = limit.apply(n, m)
            want = _apply_word_pointwise(limit, n, m)
            if got != want:
                problems.append({"n": n, "m": m, "limit": got, "equation": want})
    return problems


def verify_stabilization(
    d: NullSequence,
    w: WordSeq,
    s: Scale,
    n: int,
    m: int,
    delta: int,
    search_bound: int = 128,
) -> bool:
    """Check that the watched value and its inverse are constant for every
    truncation depth from the witness bound up to bound + delta."""
    wit = find_witness(w, s, n, m, search_bound)
    if wit is None:
        raise WitnessNotFound(n, m)
    k0 = stabilization_bound(wit, s)
    base = None
    for k in range(k0, k0 + delta + 1):
        table = approx(d, w, k)
        pair = (table.row(n).apply(m), table.row(n).inverse_apply(m))
        if base is None:
            base = pair
        elif pair != base:
            return False
    return True


def closure_check(limit: LimitAutomorphism, structure: Structure, window: int) -> bool:
    """Each limit row, read pointwise on the window, passes the structure's
    window test."""
    for n in range(window):
        if not structure.check_window(lambda m: limit.apply(n, m), window):
            return False
    return True


def partial_products(word, xs, ys, ops: GroupOps) -> list:
    """Left prefix products of the word's unit letters, identity first.

    The list has word.length() + 1 entries; the last equals the full
    evaluation.  Exposed for agreement tests on intermediate values.
    """
    from .words import ArityError

    lx, ly = word.arities()
    if lx > len(xs):
        raise ArityError(f"word mentions x{lx} but only {len(xs)} parameters given")
    if ly > len(ys):
        raise ArityError(f"word mentions y{ly} but only {len(ys)} unknowns given")
    acc = ops.identity
    out = [acc]
    for kind, index, exp in word.factors:
        base = xs[index - 1] if kind == "x" else ys[index - 1]
        step = base if exp > 0 else ops.inverse(base)
        for _ in range(abs(exp)):
            acc = ops.multiply(acc, step)
            out.append(acc)
    return out
