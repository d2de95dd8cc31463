"""Recurrences, closed forms, asymptotes, and the cross-check engine."""

from fractions import Fraction as F

import pytest

from parlab.exact import QSqrt2, SQRT2
from parlab.formulas import (
    BOUNDARY_VALUES,
    Check,
    asymptote_par,
    brute_force_pars,
    closed_form_par,
    cross_check,
    eval_closed_form,
    eval_recurrence,
    family_values,
    has_asymptote,
    lower_bound_objective,
    sequence_ids,
)
from parlab.problems import ProblemKind, ProtocolKind


def test_boundary_values():
    for seq_id, value in BOUNDARY_VALUES.items():
        assert eval_recurrence(seq_id, 1) == QSqrt2(value)


def test_named_recurrence_values():
    assert eval_recurrence("disjointness/alternating/h1", 2) == QSqrt2(13)
    assert eval_recurrence("disjointness/alternating/v1", 2) == QSqrt2(19)
    assert eval_recurrence("disjointness/one-first/nH0", 3) == QSqrt2(12)
    assert eval_recurrence("disjointness/one-first/nV0", 3) == QSqrt2(19)
    assert eval_recurrence("intersection/alternating/h", 2) == QSqrt2(20)
    assert eval_recurrence("intersection/trivial/v", 3) == QSqrt2(216)
    assert eval_recurrence("intersection/one-first/v", 3) == QSqrt2(216)


def test_recurrence_equals_closed_form_to_32():
    for seq_id in sequence_ids():
        for k in range(1, 33):
            assert eval_recurrence(seq_id, k) == eval_closed_form(seq_id, k), (
                seq_id,
                k,
            )


def test_closed_forms_collapse_to_rationals():
    # the alternating closed forms carry (1 +- sqrt(2))^k conjugate pairs
    for name in ("nH0", "nV0", "h0", "v0"):
        for k in (1, 5, 17, 32):
            value = eval_closed_form(f"disjointness/alternating/{name}", k)
            assert value.is_rational


def test_unknown_ids_rejected():
    with pytest.raises(KeyError):
        eval_recurrence("disjointness/alternating/bogus", 2)
    with pytest.raises(KeyError):
        eval_recurrence("nonsense", 2)


def test_closed_form_par_examples():
    D, I = ProblemKind.DISJOINTNESS, ProblemKind.INTERSECTION
    assert closed_form_par(D, ProtocolKind.ALTERNATING, "wrt1", 1) == QSqrt2(1)
    assert closed_form_par(D, ProtocolKind.ONE_FIRST, "wrt2", 1) == QSqrt2(F(3, 2))
    assert closed_form_par(D, ProtocolKind.TRIVIAL, "subjective", 1) == QSqrt2(F(3, 2))
    assert closed_form_par(I, ProtocolKind.ALTERNATING, "subjective", 3) == QSqrt2(
        F(75, 32)
    )
    assert closed_form_par(I, ProtocolKind.TRIVIAL, "ratio", 2) == QSqrt2(F(9, 4))


def test_asymptote_examples():
    D = ProblemKind.DISJOINTNESS
    assert asymptote_par(D, ProtocolKind.ALTERNATING, "ratio", 7) == SQRT2
    assert asymptote_par(D, ProtocolKind.ONE_FIRST, "ratio", 4) == QSqrt2(F(81, 32))
    assert asymptote_par(D, ProtocolKind.TRIVIAL, "subjective", 3) == QSqrt2(8)
    assert not has_asymptote(ProblemKind.INTERSECTION, ProtocolKind.TRIVIAL, "wrt2")
    assert has_asymptote(D, ProtocolKind.ALTERNATING, "subjective")


def test_asymptote_convergence_monotone():
    one = QSqrt2(1)
    for problem in ProblemKind:
        for protocol in ProtocolKind:
            for scope in ("objective", "wrt1", "wrt2", "subjective", "ratio"):
                if not has_asymptote(problem, protocol, scope):
                    continue
                errors = [
                    abs(
                        closed_form_par(problem, protocol, scope, k)
                        / asymptote_par(problem, protocol, scope, k)
                        - one
                    )
                    for k in range(8, 33)
                ]
                assert all(a >= b for a, b in zip(errors, errors[1:])), (
                    problem,
                    protocol,
                    scope,
                )


def test_lower_bounds_hold():
    for problem in ProblemKind:
        for protocol in ProtocolKind:
            for k in range(1, 6):
                brute = brute_force_pars(problem, protocol, k)
                assert brute["objective"] >= lower_bound_objective(problem, k)


def test_family_values_one_first_closed_identities():
    for k in (1, 2, 3, 4, 5, 6):
        vals = family_values(ProblemKind.DISJOINTNESS, ProtocolKind.ONE_FIRST, k)
        assert vals["nH0"] == k * 2 ** (k - 1)
        assert vals["nV0"] == 3 ** k - 2 ** k
        assert vals["h0"] == F(k, 6) * (3 * 4 ** k - 2 * 3 ** k)


def test_cross_check_all_pass():
    checks = cross_check(k_max=3)
    assert checks
    assert all(c.passed for c in checks)
    obj = checks[0].to_obj()
    assert set(obj) == {"identity", "k", "lhs", "rhs", "pass"}


def test_cross_check_negative_control():
    # a deliberately wrong identity must surface as a named failure
    bad = Check("negative-control", 3, QSqrt2(1), QSqrt2(2))
    report = cross_check(k_max=1) + [bad]
    failures = [c for c in report if not c.passed]
    assert failures == [bad]
    assert failures[0].to_obj()["pass"] is False


def test_cross_check_cap():
    with pytest.raises(ValueError):
        cross_check(k_max=9)
