"""Finitely supported permutations of the naturals and their convergence metric.

Everything here is exact. Permutations are finite mappings, the metric is a
dyadic rational, and null sequences carry an explicit mover bound so that
"every later term fixes m" is checkable rather than merely semi-decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence


class NotNull(ValueError):
    """A sequence meant to converge to the identity contains the identity."""


class NoBound(ValueError):
    """No mover bound is available, or a declared bound fails on the prefix."""


class Perm:
    """A permutation of the naturals moving only finitely many points.

    Fixed points are never stored, so two values are equal exactly when they
    are equal as functions.  Instances are immutable and hashable.
    """

    __slots__ = ("_map", "_inv")

    def __init__(self, mapping: Optional[dict[int, int]] = None):
        moves: dict[int, int] = {}
        if mapping:
            for k, v in mapping.items():
                if k < 0 or v < 0:
                    raise ValueError("points must be naturals")
                if k != v:
                    moves[k] = v
        if set(moves.keys()) != set(moves.values()):
            raise ValueError("mapping is not a permutation of its support")
        object.__setattr__(self, "_map", moves)
        object.__setattr__(self, "_inv", {v: k for k, v in moves.items()})

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls) -> "Perm":
        return cls()

    @classmethod
    def transposition(cls, a: int, b: int) -> "Perm":
        if a == b:
            raise ValueError("transposition needs two distinct points")
        return cls({a: b, b: a})

    @classmethod
    def from_cycle(cls, points: Sequence[int]) -> "Perm":
        if len(set(points)) != len(points):
            raise ValueError("cycle points must be distinct")
        if len(points) < 2:
            return cls()
        mapping = {points[i]: points[(i + 1) % len(points)] for i in range(len(points))}
        return cls(mapping)

    def apply(self, m: int) -> int:
        return self._map.get(m, m)

    def inverse_apply(self, m: int) -> int:
        return self._inv.get(m, m)

    def __call__(self, m: int) -> int:
        return self._map.get(m, m)

    def inverse(self) -> "Perm":
        inv = Perm()
        object.__setattr__(inv, "_map", dict(self._inv))
        object.__setattr__(inv, "_inv", dict(self._map))
        return inv

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    @property
    def is_identity(self) -> bool:
        return not self._map

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self._map))

    def max_point(self) -> int:
        """Largest point involved, or -1 for the identity."""
        return max(self._map) if self._map else -1

    def to_pairs(self) -> list[list[int]]:
        """JSON form: sorted [point, image] pairs, fixed points omitted."""
        return [[k, self._map[k]] for k in sorted(self._map)]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> "Perm":
        mapping: dict[int, int] = {}
        for p, q in pairs:
            if p in mapping:
                raise ValueError(f"duplicate point {p}")
            mapping[p] = q
        return cls(mapping)

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self._map[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self._map[nxt]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        if not self._map:
            return "e"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in self.cycles())


IDENTITY = Perm()


def compose(f: Perm, g: Perm) -> Perm:
    """The permutation m -> f(g(m)), so the right factor acts first."""
    mapping = {}
    for m in set(f._map) | set(g._map):
        mapping[m] = f.apply(g.apply(m))
    return Perm(mapping)


def metric(f: Perm, g: Perm) -> Fraction:
    """Distance 2**(-n) where n is the least disagreement point of the two
    permutations or of their inverses, and 0 when they are equal.

    Values are exact dyadic rationals, so the ultrametric inequality and the
    identity-of-indiscernibles law can be asserted with equality.
    """
    candidates = set(f._map) | set(g._map)
    disagree = [
        m
        for m in candidates
        if f.apply(m) != g.apply(m) or f.inverse_apply(m) != g.inverse_apply(m)
    ]
    if not disagree:
        return Fraction(0)
    return Fraction(1, 2 ** min(disagree))


class NullSequence:
    """A sequence of non-identity permutations converging to the identity.

    Convergence is certified by a mover bound K: for every point m and every
    index k >= K(m), the k-th term fixes m.  The bound makes membership
    checks finite.  Sequences may be infinite (generated) or finite prefixes
    loaded from data.
    """

    def __init__(
        self,
        gen: Callable[[int], Perm],
        mover_bound: Callable[[int], int],
        length: Optional[int] = None,
        name: str = "custom",
    ):
        self._gen = gen
        self._mover_bound = mover_bound
        self.length = length
        self.name = name

    def perm(self, n: int) -> Perm:
        if n < 0:
            raise IndexError("negative index")
        if self.length is not None and n >= self.length:
            raise IndexError(f"null sequence prefix has {self.length} terms, asked for {n}")
        return self._gen(n)

    def mover_bound(self, m: int) -> int:
        return self._mover_bound(m)

    @classmethod
    def transpositions(cls) -> "NullSequence":
        """The built-in family: term n swaps 2n and 2n+1.

        Term k moves only {2k, 2k+1}, so every k >= m//2 + 1 fixes m.
        """
        return cls(
            gen=lambda n: Perm.transposition(2 * n, 2 * n + 1),
            mover_bound=lambda m: m // 2 + 1,
            length=None,
            name="transpositions",
        )

    @classmethod
    def explicit(
        cls,
        perms: Sequence[Perm],
        mover_bound_pairs: Iterable[Sequence[int]],
    ) -> "NullSequence":
        """A finite prefix with a declared mover bound.

        The declared bound is validated against the prefix: for each listed
        (m, K), every term from K on must fix m.  Points without a listed
        bound raise NoBound when queried.
        """
        terms = list(perms)
        for i, p in enumerate(terms):
            if p.is_identity:
                raise NotNull(f"term {i} is the identity")
        bounds = {}
        for m, k in mover_bound_pairs:
            bounds[m] = k
        for m, k in bounds.items():
            for idx in range(k, len(terms)):
                if terms[idx].apply(m) != m:
                    raise NoBound(f"declared bound {k} for point {m} fails at term {idx}")

        def lookup(m: int) -> int:
            if m in bounds:
                return bounds[m]
            raise NoBound(f"no mover bound declared for point {m}")

        return cls(gen=lambda n: terms[n], mover_bound=lookup, length=len(terms), name="explicit")


def cauchy_to_null(c: Sequence[Perm]) -> NullSequence:
    """Turn a Cauchy sequence prefix into a null sequence of quotients.

    Term n is inverse(c[2n]) composed with c[2n+1].  Consecutive pair members
    must differ, otherwise some quotient is the identity and the result
    cannot converge to the identity through non-identity terms.  The mover
    bound is computed from the supports of the resulting prefix.
    """
    terms = []
    for n in range(len(c) // 2):
        d = compose(c[2 * n].inverse(), c[2 * n + 1])
        if d.is_identity:
            raise NotNull(f"pair {n} collapses: c[{2 * n}] equals c[{2 * n + 1}]")
        terms.append(d)
    last_mover: dict[int, int] = {}
    for n, d in enumerate(terms):
        for m in d.support():
            last_mover[m] = n
    bounds = {m: n + 1 for m, n in last_mover.items()}

    return NullSequence(
        gen=lambda n: terms[n],
        mover_bound=lambda m: bounds.get(m, 0),
        length=len(terms),
        name="cauchy",
    )


def check_null(d: NullSequence, window: int) -> bool:
    """Finite convergence check: every point below the window is fixed by all
    terms between its mover bound and the window."""
    limit = window if d.length is None else min(window, d.length)
    for m in range(window):
        k0 = d.mover_bound(m)
        for k in range(k0, limit):
            if d.perm(k).apply(m) != m:
                return False
    return True


@dataclass(frozen=True)
class Structure:
    """A decidable automorphism test over the naturals.

    check validates a finitely supported permutation in one shot.
    check_window validates an arbitrary pointwise-given map on an initial
    segment, which is what lazily evaluated limits can offer.
    """

    name: str
    check: Callable[[Perm], bool]
    check_window: Callable[[Callable[[int], int], int], bool]


def is_automorphism(structure: Structure, f: Perm) -> bool:
    return structure.check(f)


def _matching_check(f: Perm) -> bool:
    # Edges are {2n, 2n+1}, i.e. partner(p) = p XOR 1.  Only edges touching
    # the support can break, and partners of moved points must be checked too.
    pts = set(f.support())
    pts |= {p ^ 1 for p in pts}
    return all(f.apply(p ^ 1) == f.apply(p) ^ 1 for p in pts)


def _matching_check_window(apply_fn: Callable[[int], int], window: int) -> bool:
    for t in range(window // 2):
        a, b = 2 * t, 2 * t + 1
        if apply_fn(b) != apply_fn(a) ^ 1:
            return False
    return True


TRIVIAL_STRUCTURE = Structure(
    name="trivial",
    check=lambda f: True,
    check_window=lambda apply_fn, window: True,
)

MATCHING_STRUCTURE = Structure(
    name="matching",
    check=_matching_check,
    check_window=_matching_check_window,
)


def structure_by_name(name: str) -> Structure:
    if name == "trivial":
        return TRIVIAL_STRUCTURE
    if name == "matching":
        return MATCHING_STRUCTURE
    raise ValueError(f"unknown structure {name!r}")


def null_sequence_from_json(obj: dict) -> NullSequence:
    """Load a null sequence description.

    Kinds: {"kind": "transpositions"} for the built-in family,
    {"kind": "explicit", "perms": [...], "moverBound": [[m, K], ...]} for a
    declared prefix, and {"kind": "cauchy", "c": [...]} to derive quotients
    from a Cauchy prefix.  Permutations are sorted [point, image] pair lists.
    """
    kind = obj.get("kind")
    if kind == "transpositions":
        return NullSequence.transpositions()
    if kind == "explicit":
        perms = [Perm.from_pairs(p) for p in obj["perms"]]
        return NullSequence.explicit(perms, obj.get("moverBound", []))
    if kind == "cauchy":
        return cauchy_to_null([Perm.from_pairs(p) for p in obj["c"]])
    raise ValueError(f"unknown null sequence kind {kind!r}")
