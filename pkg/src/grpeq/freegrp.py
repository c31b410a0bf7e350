"""Free group arithmetic and the root obstruction that blocks equation chains.

Elements are reduced words over generators z1, z2, ...  In a free group
roots are unique when they exist, so the forward-determined chain
b_{n+1} = t-th root of (d_{n+1}^-1 b_n) either continues uniquely or dies,
and one well-chosen exponent appended to the driving sequence kills a chain
for good.  Diagonalization interleaves those kill steps with zero stretches
wide enough to host stabilization witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .scale import Scale, make_witness
from .words import GroupOps, nu_words


class IdentityInput(ValueError):
    """The identity was passed where a non-identity element is required."""


class BadDSeq(ValueError):
    """The driving sequence violates distinctness or hits the identity."""


@dataclass(frozen=True)
class FreeElem:
    """A reduced word: syllables (generator index, nonzero exponent) with no
    two adjacent syllables on the same generator."""

    letters: tuple[tuple[int, int], ...] = ()

    @classmethod
    def identity(cls) -> "FreeElem":
        return cls()

    @classmethod
    def gen(cls, index: int, exp: int = 1) -> "FreeElem":
        if index < 1:
            raise ValueError("generator indices start at 1")
        if exp == 0:
            return cls()
        return cls(((index, exp),))

    @classmethod
    def from_syllables(cls, syllables: Iterable[Sequence[int]]) -> "FreeElem":
        out: list[list[int]] = []
        for index, exp in syllables:
            if index < 1:
                raise ValueError("generator indices start at 1")
            if exp == 0:
                continue
            if out and out[-1][0] == index:
                out[-1][1] += exp
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([index, exp])
        return cls(tuple((i, e) for i, e in out))

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def inverse(self) -> "FreeElem":
        return FreeElem(tuple((i, -e) for i, e in reversed(self.letters)))

    def __mul__(self, other: "FreeElem") -> "FreeElem":
        return FreeElem.from_syllables(self.letters + other.letters)

    def __pow__(self, n: int) -> "FreeElem":
        base = self if n >= 0 else self.inverse()
        acc = FreeElem()
        for _ in range(abs(n)):
            acc = acc * base
        return acc

    def units(self) -> list[tuple[int, int]]:
        """Unit-letter form: each syllable unrolled into (index, +-1) steps."""
        out = []
        for i, e in self.letters:
            sign = 1 if e > 0 else -1
            out.extend((i, sign) for _ in range(abs(e)))
        return out

    @classmethod
    def from_units(cls, units: Iterable[tuple[int, int]]) -> "FreeElem":
        return cls.from_syllables(units)

    def generators(self) -> set[int]:
        return {i for i, _ in self.letters}

    def __str__(self) -> str:
        return format_free(self)


def multiply(a: FreeElem, b: FreeElem) -> FreeElem:
    return a * b


def invert(a: FreeElem) -> FreeElem:
    return a.inverse()


FREE_OPS = GroupOps(
    multiply=multiply,
    inverse=invert,
    identity=FreeElem.identity(),
)


def format_free(g: FreeElem) -> str:
    """Text form "z1 z2^-3"; the identity renders as "e"."""
    if g.is_identity:
        return "e"
    parts = []
    for i, e in g.letters:
        parts.append(f"z{i}" if e == 1 else f"z{i}^{e}")
    return " ".join(parts)


def parse_free(text: str) -> FreeElem:
    import re

    text = text.strip()
    if text in ("", "e"):
        return FreeElem()
    syllables = []
    for token in text.split(" "):
        m = re.match(r"^z([0-9]+)(?:\^(-?[0-9]+))?$", token)
        if not m:
            raise ValueError(f"bad generator token {token!r}")
        syllables.append((int(m.group(1)), 1 if m.group(2) is None else int(m.group(2))))
    return FreeElem.from_syllables(syllables)


def cyclic_reduce(g: FreeElem) -> tuple[FreeElem, FreeElem]:
    """Split g as u * core * u^-1 with the core cyclically reduced and the
    product reduced as written.  The split is unique in a free group."""
    units = g.units()
    conj: list[tuple[int, int]] = []
    while len(units) >= 2:
        first, last = units[0], units[-1]
        if first[0] == last[0] and first[1] == -last[1]:
            conj.append(first)
            units = units[1:-1]
        else:
            break
    return FreeElem.from_units(conj), FreeElem.from_units(units)


def has_root(g: FreeElem, t: int) -> Optional[FreeElem]:
    """The unique t-th root of g when it exists, else None.

    Conjugation commutes with powers, so g = u c u^-1 has a t-th root
    exactly when the cyclically reduced core c splits into t identical
    letter blocks; the root is then u block u^-1.
    """
    if t < 2:
        raise ValueError("root exponents start at 2")
    conj, core = cyclic_reduce(g)
    units = core.units()
    size = len(units)
    if size == 0:
        return FreeElem()
    if size % t != 0:
        return None
    block = units[: size // t]
    if block * t != units:
        return None
    return conj * FreeElem.from_units(block) * conj.inverse()


def no_root_exponent(g: FreeElem) -> int:
    """The least t >= 2 such that g has no t-th root.

    Exists for every non-identity g: a t-th root forces the cyclically
    reduced core to carry t identical nonempty blocks, so t never exceeds
    the length of g, and length(g) + 1 always works.
    """
    if g.is_identity:
        raise IdentityInput("the identity has roots of every order")
    for t in range(2, g.length() + 2):
        if has_root(g, t) is None:
            return t
    raise AssertionError("unreachable: some exponent below length + 2 must fail")


@dataclass(frozen=True)
class SubBasis:
    """A finite or cofinite set of generator indices.

    For complement=False the set is exactly `indices`; for complement=True
    it is everything except `indices`.
    """

    indices: frozenset[int]
    complement: bool = False

    def __post_init__(self):
        if any(i < 1 for i in self.indices):
            raise ValueError("generator indices start at 1")
        if not self.complement and not self.indices:
            raise ValueError("a sub-basis must be nonempty")

    def __contains__(self, index: int) -> bool:
        inside = index in self.indices
        return not inside if self.complement else inside

    @classmethod
    def first(cls, k: int) -> "SubBasis":
        return cls(frozenset(range(1, k + 1)))


def project(g: FreeElem, z: SubBasis) -> FreeElem:
    """The retraction killing every generator outside z.  A homomorphism,
    idempotent, and the identity on words over z."""
    return FreeElem.from_syllables((i, e) for i, e in g.letters if i in z)


def h_elements(z: SubBasis) -> Iterator[FreeElem]:
    """All reduced words over a finite sub-basis in length-then-lex order.

    Letters are ordered z_i before z_i^-1, ascending in i.  The identity
    comes first.
    """
    if z.complement:
        raise ValueError("enumeration needs a finite sub-basis")
    letters = []
    for i in sorted(z.indices):
        letters.append((i, 1))
        letters.append((i, -1))

    def words_of_length(length: int, prefix: list[tuple[int, int]]) -> Iterator[FreeElem]:
        if len(prefix) == length:
            yield FreeElem.from_units(prefix)
            return
        for let in letters:
            if prefix and prefix[-1][0] == let[0] and prefix[-1][1] == -let[1]:
                continue
            prefix.append(let)
            yield from words_of_length(length, prefix)
            prefix.pop()

    yield FreeElem.identity()
    length = 1
    while True:
        yield from words_of_length(length, [])
        length += 1


def enumerate_h(z: SubBasis, n: int) -> FreeElem:
    """The n-th element of the length-then-lex enumeration, identity at 0."""
    if n < 0:
        raise IndexError("enumeration index must be a natural")
    return next(islice(h_elements(z), n, None))


def ascending_generators() -> Callable[[int], FreeElem]:
    """The driving sequence whose n-th term is the generator z_{n+1}:
    pairwise distinct and never the identity."""
    return lambda n: FreeElem.gen(n + 1)


DSeqLike = Union[Callable[[int], FreeElem], Sequence[FreeElem]]


def _d_at(d: DSeqLike, n: int) -> FreeElem:
    term = d(n) if callable(d) else d[n]
    if term.is_identity:
        raise BadDSeq(f"driving term {n} is the identity")
    return term


@dataclass(frozen=True)
class NoRoot:
    """Death reason: the step demanded a t-th root that does not exist."""

    exponent: int


@dataclass(frozen=True)
class ForcedMismatch:
    """Death reason reserved for verifiers that find a pinned value broken.

    Forward chains never produce it themselves: each step either copies,
    multiplies, or takes a root that exists uniquely or not at all.
    """


@dataclass(frozen=True)
class ChainState:
    """Progress of a forward-determined solution chain.  Dead states stay
    dead; position records where death happened."""

    position: int
    residual: Optional[FreeElem]
    reason: Union[NoRoot, ForcedMismatch, None] = None

    @property
    def is_alive(self) -> bool:
        return self.residual is not None

    @classmethod
    def start(cls, a: FreeElem) -> "ChainState":
        return cls(0, a)


def chain_step(st: ChainState, d_next: FreeElem, nu_n: int) -> ChainState:
    """Advance one equation.  Exponent 0 copies the residual; exponent 1
    pins the next value outright; exponent t >= 2 demands a t-th root and
    kills the chain when none exists."""
    if not st.is_alive:
        return st
    if d_next.is_identity:
        raise BadDSeq(f"driving term at position {st.position} is the identity")
    if nu_n < 0:
        raise ValueError("exponent entries must be naturals")
    if nu_n == 0:
        return ChainState(st.position + 1, st.residual)
    c = d_next.inverse() * st.residual
    if nu_n == 1:
        return ChainState(st.position + 1, c)
    root = has_root(c, nu_n)
    if root is None:
        return ChainState(st.position, None, NoRoot(nu_n))
    return ChainState(st.position + 1, root)


def chain_run(a: FreeElem, d: DSeqLike, entries: Sequence[int]) -> ChainState:
    """Fold the chain from b_0 = a through the exponent prefix, consuming
    the driving term at each position.  Dead absorbs the rest."""
    st = ChainState.start(a)
    for n, t in enumerate(entries):
        if not st.is_alive:
            break
        st = chain_step(st, _d_at(d, n), t)
    return st


@dataclass(frozen=True)
class ObeysSegment:
    n_star: int
    m_star: int
    i0: int
    i1: int

    def as_json(self) -> dict:
        return {
            "kind": "obeys",
            "nStar": self.n_star,
            "mStar": self.m_star,
            "i0": self.i0,
            "i1": self.i1,
        }


@dataclass(frozen=True)
class BlockSegment:
    target: Optional[int]
    exponent: int

    def as_json(self) -> dict:
        return {"kind": "block", "target": self.target, "exponent": self.exponent}


Segment = Union[ObeysSegment, BlockSegment]


@dataclass
class NuPrefix:
    """A finite exponent prefix plus the construction log that explains it.
    Beyond the prefix the sequence is zero."""

    entries: list[int] = field(default_factory=list)
    log: list[Segment] = field(default_factory=list)

    def nu(self) -> Callable[[int], int]:
        entries = list(self.entries)
        return lambda n: entries[n] if n < len(entries) else 0

    def word_seq(self):
        return nu_words(self.nu())

    def to_json(self) -> dict:
        return {
            "entries": list(self.entries),
            "log": [seg.as_json() for seg in self.log],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NuPrefix":
        log: list[Segment] = []
        for item in obj.get("log", []):
            if item.get("kind") == "obeys":
                log.append(
                    ObeysSegment(item["nStar"], item["mStar"], item["i0"], item["i1"])
                )
            elif item.get("kind") == "block":
                log.append(BlockSegment(item["target"], item["exponent"]))
            else:
                raise ValueError(f"unknown log segment {item!r}")
        return cls(entries=list(obj.get("entries", [])), log=log)


def block(
    a: FreeElem,
    prefix: NuPrefix,
    d: DSeqLike,
    target: Optional[int] = None,
) -> NuPrefix:
    """Extend the prefix by at most two entries so the chain from a dies.

    If the chain already died inside the prefix it is returned unchanged.
    Otherwise, with residual r at the end: when d^-1 r is not the identity
    its no-root exponent blocks immediately; when it is the identity, one
    zero entry shifts the chain to the next driving term, whose quotient
    cannot also be the identity because driving terms are distinct.
    """
    st = chain_run(a, d, prefix.entries)
    if not st.is_alive:
        return prefix
    entries = list(prefix.entries)
    log = list(prefix.log)
    residual = st.residual
    c = _d_at(d, len(entries)).inverse() * residual
    if c.is_identity:
        entries.append(0)
        c = _d_at(d, len(entries)).inverse() * residual
        if c.is_identity:
            raise BadDSeq(
                f"driving terms {len(entries) - 1} and {len(entries)} coincide"
            )
    t = no_root_exponent(c)
    entries.append(t)
    log.append(BlockSegment(target, t))
    result = NuPrefix(entries, log)
    final = chain_run(a, d, entries)
    if final.is_alive:
        raise AssertionError("blocking failed to kill the chain")
    return result


def _zero_interval(
    entries: list[int],
    s: Scale,
    n_star: int,
    m_star: int,
) -> tuple[int, int]:
    """The lexicographically least (i0, i1) whose witness interval carries
    only zeros once the prefix is extended with zeros.

    Entries beyond the current prefix count as zeros because the caller
    materializes them.  The search always terminates: as soon as the
    interval starts past the prefix there is nothing left to collide with.
    """

    def length_at(i: int) -> int:
        v = entries[i] if i < len(entries) else 0
        return 1 + v if v >= 1 else 1

    i0 = m_star + 1
    while True:
        j0 = s.value(i0)
        total = sum(length_at(i) for i in range(n_star, j0 + 1))
        i1 = max(i0 + total + 1, n_star + 1)
        j1 = s.value(i1)
        if all(entries[t] == 0 for t in range(j0, min(j1 + 1, len(entries)))):
            return i0, i1
        i0 += 1


def diagonalize(
    d: DSeqLike,
    s: Scale,
    enumeration: Callable[[int], FreeElem],
    count: int,
) -> NuPrefix:
    """Build a prefix that simultaneously hosts a stabilization witness for
    every pair (r, r) below count and kills the chain of every enumerated
    element below count.

    Rounds alternate: first a zero stretch wide enough for the round's
    witness, then a blocking step for the round's target.  Blocking appends
    only at the very end, past every interval placed so far, so earlier
    witnesses stay valid; and because later rounds start their sums at a
    larger n*, one generous stretch ends up hosting most of them.
    """
    if nu_words([]).var_budget > s.budget:
        raise ValueError("scale budget too small for the word family")
    prefix = NuPrefix()
    for r in range(count):
        i0, i1 = _zero_interval(prefix.entries, s, r, r)
        j1 = s.value(i1)
        if len(prefix.entries) < j1 + 1:
            prefix.entries.extend([0] * (j1 + 1 - len(prefix.entries)))
        prefix.log.append(ObeysSegment(r, r, i0, i1))
        prefix = block(enumeration(r), prefix, d, target=r)
    return prefix


def reverify(
    prefix: NuPrefix,
    d: DSeqLike,
    s: Optional[Scale],
    enumeration: Callable[[int], FreeElem],
    count: int,
) -> dict:
    """Independent post-hoc audit of a diagonalization output.

    Re-runs every chain from scratch and, when a scale is supplied, rebuilds
    every logged witness from its indices.  Returns a plain dict verdict.
    """
    verdicts = []
    survivors = []
    for r in range(count):
        st = chain_run(enumeration(r), d, prefix.entries)
        verdicts.append([r, "dead" if not st.is_alive else "alive"])
        if st.is_alive:
            survivors.append(r)
    witness_failures = []
    if s is not None:
        w = prefix.word_seq()
        for seg in prefix.log:
            if isinstance(seg, ObeysSegment):
                try:
                    make_witness(w, s, seg.n_star, seg.m_star, seg.i0, seg.i1)
                except (ValueError, IndexError):
                    witness_failures.append(seg.as_json())
    ok = not survivors and not witness_failures
    report: dict = {"verdicts": verdicts, "ok": ok}
    if survivors:
        report["survivor"] = survivors[0]
    if witness_failures:
        report["witnessFailures"] = witness_failures
    return report
