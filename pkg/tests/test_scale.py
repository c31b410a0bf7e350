"""Scale construction and the off-interval witness search."""

import pytest

from grpeq.perm import NullSequence, Perm
from grpeq.scale import (
    NotObeying,
    ObeysWitness,
    Scale,
    build_scale,
    check_witness,
    find_witness,
    make_witness,
    obeys_certificate,
    verify_scale,
)
from grpeq.words import TRIVIAL_WORD, WordSeq, canonicalize, nu_words, xvar, yvar


def naive_witness(w, s, n_star, m_star, bound):
    """Reference search straight from the witness clauses, no shortcuts."""
    for i0 in range(bound + 1):
        for i1 in range(bound + 1):
            if not (m_star < i0 < i1 and n_star < i1):
                continue
            j0, j1 = s.value(i0), s.value(i1)
            if any(not w.gen(t).is_trivial for t in range(j0, j1 + 1)):
                continue
            if sum(w.gen(i).length() for i in range(n_star, j0 + 1)) < i1 - i0:
                return (i0, i1)
    return None


def test_scale_golden_budget_one():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 10)
    assert s.prefix(10) == [0, 2, 4, 6, 8, 10, 12, 14, 16, 18]


def test_scale_golden_budget_zero():
    d = NullSequence.transpositions()
    s = build_scale(d, 0, 10)
    assert s.prefix(10) == list(range(10))


def test_scale_single_entry():
    s = build_scale(NullSequence.transpositions(), 1, 1)
    assert s.prefix(1) == [0]
    assert s.value(0) == 0


def test_scale_linear_law_for_transpositions():
    # for the builtin family every non-gap clause is dominated by the gap
    # clause, so entry n is exactly (budget + 1) * n
    d = NullSequence.transpositions()
    for budget in range(4):
        s = build_scale(d, budget, 12)
        assert s.prefix(12) == [(budget + 1) * n for n in range(12)]


def test_scale_lazy_extension():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 2)
    assert s.value(30) == 60
    assert len(s.materialized()) >= 31


def test_scale_from_values_validation():
    s = Scale.from_values([0, 2, 4], 1)
    assert s.value(2) == 4
    with pytest.raises(IndexError):
        s.value(3)
    with pytest.raises(ValueError):
        Scale.from_values([1, 3, 5], 1)
    with pytest.raises(ValueError):
        Scale.from_values([0, 1, 2], 1)  # gaps must exceed the budget
    raw = Scale.from_values([0, 1, 2], 1, validate=False)
    assert raw.value(1) == 1


def test_verify_scale_accepts_builder_output():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 10)
    assert verify_scale(d, s, 10)


def test_verify_scale_rejects_bumped_entry():
    d = NullSequence.transpositions()
    bumped = Scale.from_values([0, 2, 5, 7, 9, 11], 1, validate=False)
    assert not verify_scale(d, bumped, 6)


def test_verify_scale_rejects_short_gap():
    d = NullSequence.transpositions()
    tight = Scale.from_values([0, 1, 2], 1, validate=False)
    assert not verify_scale(d, tight, 3)


def test_find_witness_golden_all_zero():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words([])
    wit = find_witness(w, s, 0, 0, 64)
    assert wit is not None
    assert (wit.i0, wit.i1) == (1, 5)
    assert wit.cum_lengths == (0, 1, 2)
    assert check_witness(w, s, wit)


def test_find_witness_golden_single_pulse():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words([1])
    wit = find_witness(w, s, 0, 0, 64)
    assert (wit.i0, wit.i1) == (1, 6)
    assert check_witness(w, s, wit)


def test_find_witness_matches_naive_oracle():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    for prefix in [[], [1], [0, 2], [2, 0, 0, 1], [0, 0, 3], [1, 1, 1, 0, 2]]:
        w = nu_words(prefix)
        for n_star in range(3):
            for m_star in (0, 2, 5):
                wit = find_witness(w, s, n_star, m_star, 64)
                want = naive_witness(w, s, n_star, m_star, 64)
                if want is None:
                    assert wit is None
                else:
                    assert wit is not None
                    assert (wit.i0, wit.i1) == want


def test_find_witness_none_without_zero_tail():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words(lambda n: 1)
    assert find_witness(w, s, 0, 0, 32) is None


def test_find_witness_none_when_m_star_exhausts_bound():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words([])
    assert find_witness(w, s, 0, 40, 8) is None


def test_find_witness_budget_precondition():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    wide = WordSeq(gen=lambda n: canonicalize([xvar(2, 1)]), var_budget=2)
    with pytest.raises(ValueError):
        find_witness(wide, s, 0, 0, 16)


def test_make_witness_rejects_broken_clauses():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words([])
    wit = make_witness(w, s, 0, 0, 1, 5)
    assert isinstance(wit, ObeysWitness)
    with pytest.raises(ValueError):
        make_witness(w, s, 0, 0, 1, 2)  # sum bound fails
    with pytest.raises(ValueError):
        make_witness(w, s, 0, 1, 1, 5)  # m_star < i0 fails
    busy = nu_words(lambda n: 1)
    with pytest.raises(ValueError):
        make_witness(busy, s, 0, 0, 1, 9)  # interval not trivial


def test_check_witness_rejects_tampering():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words([])
    wit = find_witness(w, s, 0, 0, 64)
    bent = ObeysWitness(wit.n_star, 1, wit.i0, wit.i1, wit.cum_lengths)
    assert not check_witness(w, s, bent)
    padded = ObeysWitness(wit.n_star, wit.m_star, wit.i0, wit.i1, (0, 1, 3))
    assert not check_witness(w, s, padded)


def test_witness_json_shape():
    wit = ObeysWitness(0, 0, 1, 5, (0, 1, 2))
    assert wit.as_json() == {"nStar": 0, "mStar": 0, "i0": 1, "i1": 5}


def test_obeys_certificate_all_zero():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words([])
    cert = obeys_certificate(w, s, 5, 64)
    assert len(cert) == 25
    assert [(wit.n_star, wit.m_star) for wit in cert[:6]] == [
        (0, 0),
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 0),
    ]
    assert all(check_witness(w, s, wit) for wit in cert)


def test_obeys_certificate_raises_with_location():
    d = NullSequence.transpositions()
    s = build_scale(d, 1, 1)
    w = nu_words(lambda n: 1)
    with pytest.raises(NotObeying) as exc:
        obeys_certificate(w, s, 3, 32)
    assert (exc.value.n_star, exc.value.m_star) == (0, 0)


def test_certificate_on_sparse_corpus():
    import random

    from grpeq.words import random_sparse_nu_prefix

    rng = random.Random(31)
    d = NullSequence.transpositions()
    for _ in range(20):
        prefix = random_sparse_nu_prefix(rng)
        w = nu_words(prefix)
        s = build_scale(d, 1, 1)
        cert = obeys_certificate(w, s, 3, 128)
        assert len(cert) == 9
        assert all(check_witness(w, s, wit) for wit in cert)
