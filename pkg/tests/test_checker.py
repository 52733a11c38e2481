"""Square checks, exploration, traces, and expected-cost squares.

Expected values for the hand-derived examples were computed by evaluating
the amortization equation directly (documented inline per check) and are
frozen here; exploration results are cross-checked against those.
"""

import random
from fractions import Fraction

import pytest

from amortcheck import (
    ArityMismatch,
    Mode,
    OrderUnavailable,
    Trace,
    TraceParseError,
    UNIT,
    UnsupportedArity,
    Verdict,
    check_expected_square,
    check_square,
    check_trace,
    explore,
    get_case,
    parse_trace,
    random_trace,
)
from amortcheck.structures import (
    allocator_case,
    batched_queue_case,
    broken_allocator_case,
    buffer_case,
    randomized_allocator_case,
)


def test_allocator_square_at_zero():
    # lhs = phi(0) + 1 = 7 + 1 = 8; rhs = 8 + phi(7) = 8 + 0 = 8
    check = check_square(allocator_case(), "alloc", (0,))
    assert check.verdict is Verdict.PASS
    assert check.lhs_cost == 8 and check.rhs_cost == 8


def test_allocator_square_at_three():
    # lhs = phi(3) + 1 = 4 + 1 = 5; rhs = 0 + phi(2) = 5
    check = check_square(allocator_case(), "alloc", (3,))
    assert check.verdict is Verdict.PASS
    assert check.lhs_cost == 5 and check.rhs_cost == 5


def test_queue_flush_square_dichotomy():
    # inbox stores newest first; flushing ("a","b") reverses two elements.
    # lhs = 2*2 + 0 = 4; rhs = per_element*2 + phi(empty inbox) = per*2.
    state = (("a", "b"), ())
    lax = batched_queue_case(1)
    exact_check = check_square(lax.with_mode(Mode.EXACT), "dequeue", (state,))
    assert exact_check.verdict is Verdict.COST_MISMATCH
    assert exact_check.lhs_cost == 4 and exact_check.rhs_cost == 2
    colax_check = check_square(lax, "dequeue", (state,))
    assert colax_check.verdict is Verdict.PASS

    exact_case = batched_queue_case(2)
    check = check_square(exact_case, "dequeue", (state,))
    assert check.verdict is Verdict.PASS
    assert check.lhs_cost == 4 and check.rhs_cost == 4


def test_check_square_is_deterministic():
    case = get_case("stack")
    a = check_square(case, "push", ((1, ("a",)),), "b")
    b = check_square(case, "push", ((1, ("a",)),), "b")
    assert a == b


def test_check_square_arity_and_order_errors():
    case = allocator_case()
    with pytest.raises(ArityMismatch):
        check_square(case, "alloc", (0, 1))
    with pytest.raises(OrderUnavailable):
        check_square(buffer_case(4).with_mode(Mode.COLAX), "write", ("",), "a")


def test_explore_allocator_closed_carrier():
    report = explore(allocator_case(), max_depth=16)
    assert report.passed
    assert report.states_explored == 8
    assert report.squares_checked == 8


def test_explore_dynamic_array_defaults():
    report = explore(get_case("dynarray"))
    assert report.passed  # state invariant enforced during exploration


def test_explore_broken_allocator_counterexample_at_zero():
    # lhs = phi'(0) + 1 = 1; rhs = 8 + phi'(7) = 15
    report = explore(broken_allocator_case())
    assert not report.passed
    zero = [c for c in report.counterexamples if c.inputs == (0,)]
    assert zero and zero[0].lhs_cost == 1 and zero[0].rhs_cost == 15


def test_counterexamples_round_trip_through_check_square():
    report = explore(broken_allocator_case())
    assert report.failures >= 1
    for c in report.counterexamples:
        again = check_square(broken_allocator_case(), c.method, c.inputs, c.arg)
        assert again.verdict is c.verdict
        assert again.lhs_cost == c.lhs_cost and again.rhs_cost == c.rhs_cost


def test_behavior_mismatch_takes_precedence_and_never_passes():
    report = explore(get_case("queue-lax").with_mode(Mode.EXACT))
    for c in report.counterexamples:
        assert c.verdict is not Verdict.PASS
        # these planted failures are cost-only: behavior still simulates
        assert c.verdict is Verdict.COST_MISMATCH


def test_behavior_mismatch_when_phi_forgets_to_reverse():
    import dataclasses

    from amortcheck import Charged, PotentialMorphism

    case = batched_queue_case(2)
    wrong = dataclasses.replace(
        case,
        phi=PotentialMorphism(lambda st: Charged(2 * len(st[0]), st[1] + st[0])),
    )
    # inbox ("a","b") holds b older than a; forgetting to reverse swaps the
    # dequeue order, so the spec observes the wrong element.
    check = check_square(wrong, "dequeue", ((("a", "b"), ()),))
    assert check.verdict is Verdict.BEHAVIOR_MISMATCH
    report = explore(wrong)
    assert not report.passed
    assert any(c.verdict is Verdict.BEHAVIOR_MISMATCH for c in report.counterexamples)


def test_explore_rejects_bad_bounds():
    case = allocator_case()
    with pytest.raises(ValueError):
        explore(case, max_depth=-1)
    with pytest.raises(ValueError):
        explore(case, max_states=3)  # fewer than the 8 seeds


def test_explore_counterexample_limit_is_configurable():
    report = explore(broken_allocator_case(), limit=2)
    assert report.failures == 8
    assert len(report.counterexamples) == 2


def test_trace_allocator_eight_steps_telescopes():
    case = allocator_case()
    trace = Trace((("alloc", UNIT),) * 8, seed_index=7)
    report = check_trace(case, trace)
    assert report.passed
    assert report.squares_checked == 8
    assert report.slack_max == 0  # total impl 8 equals total spec 8


def test_trace_empty_is_trivially_exact():
    report = check_trace(allocator_case(), Trace(()))
    assert report.passed and report.squares_checked == 0


def test_trace_buffer_emission_identity():
    # chop-concatenation: emitted ++ residue == all inputs, brute-forced
    case = buffer_case(4)
    trace = Trace((("write", "ab"), ("write", "cde"[:3].replace("c", "b")),))
    report = check_trace(case, trace)
    assert report.passed


def test_trace_rejects_multi_slot_methods():
    case = get_case("piggy")
    with pytest.raises(UnsupportedArity):
        check_trace(case, Trace((("merge", UNIT),)))


def test_square_implies_telescope_on_random_traces():
    rng = random.Random(12345)
    for name in ["allocator", "stack", "queue-exact", "buffer"]:
        case = get_case(name)
        assert explore(case).passed
        for _ in range(25):
            trace = random_trace(case, 64, rng)
            assert check_trace(case, trace).passed, (name, trace)


def test_expected_square_randomized_allocator_values():
    case = randomized_allocator_case(4, Fraction(1, 2))
    at0 = check_expected_square(case, "alloc", (0,))
    # lhs = 3/2 + 1/2 = 2 ; rhs = E[Bin(4,1/2)] + phi(3) = 2 + 0
    assert at0.verdict is Verdict.PASS
    assert at0.lhs_cost == 2 and at0.rhs_cost == 2
    at2 = check_expected_square(case, "alloc", (2,))
    # lhs = 1/2 + 1/2 = 1 ; rhs = 0 + phi(1) = 1
    assert at2.verdict is Verdict.PASS
    assert at2.lhs_cost == 1 and at2.rhs_cost == 1


def test_expected_point_distribution_matches_deterministic_verdict():
    rand = randomized_allocator_case(1, Fraction(0))
    expected = check_expected_square(rand, "alloc", (0,))
    assert expected.verdict is Verdict.PASS
    report = explore(rand)
    assert report.passed and report.states_explored == 1


def test_parse_trace_and_errors():
    case = buffer_case(4)
    trace = parse_trace(case, '# a comment\n\nwrite "ab"\nwrite ""\n')
    assert trace.steps == (("write", "ab"), ("write", ""))

    with pytest.raises(TraceParseError) as err:
        parse_trace(case, 'write "ab"\nbogus "a"\n')
    assert err.value.line == 2 and err.value.column == 1

    with pytest.raises(TraceParseError) as err:
        parse_trace(case, 'write "zzz"\n')
    assert err.value.line == 1 and err.value.column == 7

    with pytest.raises(TraceParseError) as err:
        parse_trace(case, "write\n")
    assert err.value.line == 1


def test_parse_trace_unit_and_int_literals():
    alloc = allocator_case()
    trace = parse_trace(alloc, "alloc ()\nalloc ()\n")
    assert trace.steps == (("alloc", UNIT), ("alloc", UNIT))
    assert check_trace(alloc, trace).passed
