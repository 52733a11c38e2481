"""Pointwise and trace-level verification of amortization claims.

The central check is the amortization square for one method at one input:

    lhs = potential(inputs) ; spec transition
    rhs = impl transition ; potential(successors)

Exact mode demands cost(lhs) = cost(rhs); colax mode demands
cost(rhs) <= cost(lhs) in the monoid order. Behaviors (Stop/Continue tag,
observable, specification successor states) must agree in both modes.

`explore` quantifies the square over a breadth-first-reachable state space,
`check_trace` verifies the telescoped identity over a concrete operation
sequence, and `check_expected_square` is the square on expected costs and
outcome distributions for randomized structures.
"""

import random
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Any, List, Optional, Sequence, Tuple, Union

from .charged import Charged, Dist, ExpectedCharged
from .coalgebra import (
    STOP,
    UNIT,
    Continue,
    MethodSig,
    Mode,
    NamedFn,
    VerificationCase,
    apply_phi_tuple,
)
from .encoding import encode
from .errors import (
    ArityMismatch,
    OrderUnavailable,
    StateInvariantViolation,
    TraceParseError,
    UnsupportedArity,
)


class Verdict(Enum):
    PASS = "pass"
    COST_MISMATCH = "cost-mismatch"
    BEHAVIOR_MISMATCH = "behavior-mismatch"


@dataclass(frozen=True)
class SquareCheck:
    """Result of one amortization-square check, fully reproducible."""

    method: str
    inputs: Tuple[Any, ...]
    arg: Any
    lhs: Union[Charged, ExpectedCharged]
    rhs: Union[Charged, ExpectedCharged]
    verdict: Verdict
    inputs_serialized: Tuple[str, ...]
    arg_literal: str

    @property
    def lhs_cost(self) -> Any:
        return _cost_of(self.lhs)

    @property
    def rhs_cost(self) -> Any:
        return _cost_of(self.rhs)


@dataclass(frozen=True)
class TraceMismatch:
    """A failing step or failing telescoped total along a trace."""

    step: int  # -1 marks the final telescoping comparison
    kind: str  # "observable" | "stop" | "telescope"
    detail: str


Counterexample = Union[SquareCheck, TraceMismatch]


@dataclass(frozen=True)
class Report:
    case_name: str
    mode: Mode
    states_explored: int
    squares_checked: int
    passed: bool
    failures: int
    counterexamples: Tuple[Counterexample, ...]
    wall_time: float
    slack_max: Optional[Any] = None

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass(frozen=True)
class Trace:
    """An operation sequence: (method name, argument) steps from a seed."""

    steps: Tuple[Tuple[str, Any], ...]
    seed_index: int = 0


def _cost_of(result: Union[Charged, ExpectedCharged]) -> Any:
    if isinstance(result, ExpectedCharged):
        return result.expected_cost
    return result.cost


def _require_mode_support(case: VerificationCase, mode: Mode) -> None:
    if mode is Mode.COLAX and not case.monoid.ordered:
        raise OrderUnavailable(
            f"{case.name}: colax check needs an ordered monoid, "
            f"got {case.monoid.name}"
        )


def _cost_ok(case: VerificationCase, mode: Mode, lhs_cost: Any, rhs_cost: Any) -> bool:
    if mode is Mode.EXACT:
        return lhs_cost == rhs_cost
    return case.monoid.leq(rhs_cost, lhs_cost)


def _mk_check(case, method, inputs, arg, lhs, rhs, verdict) -> SquareCheck:
    ser = tuple(case.impl.state_domain.serialize(s) for s in inputs)
    return SquareCheck(method, tuple(inputs), arg, lhs, rhs, verdict, ser, arg_literal(arg))


def _guard_outcome(sig: MethodSig, outcome: Any) -> None:
    """Transitions must honor their declared shape."""
    if outcome is STOP:
        if not sig.may_stop:
            raise ArityMismatch(f"{sig.name} returned Stop but is not may_stop")
    elif len(outcome.states) != sig.out_arity:
        raise ArityMismatch(
            f"{sig.name} produced {len(outcome.states)} successor state(s), "
            f"declared out_arity is {sig.out_arity}"
        )


def _deterministic_square(case, method, inputs, arg):
    """Build lhs/rhs of the square; returns (SquareCheck, impl successors)."""
    sig = case.sig(method)
    inputs = tuple(inputs)
    if len(inputs) != sig.in_arity:
        raise ArityMismatch(
            f"{method} takes {sig.in_arity} input state(s), got {len(inputs)}"
        )
    mode = case.phi.mode
    _require_mode_support(case, mode)
    monoid = case.monoid

    phi_in = apply_phi_tuple(monoid, case.phi, inputs)
    spec_res = case.spec.method(method).run(phi_in.value, arg)
    _guard_outcome(sig, spec_res.value)
    lhs = Charged(monoid.combine(phi_in.cost, spec_res.cost), spec_res.value)

    impl_res = case.impl.method(method).run(inputs, arg)
    _guard_outcome(sig, impl_res.value)
    if impl_res.value is STOP:
        rhs = Charged(impl_res.cost, STOP)
        successors: Tuple[Any, ...] = ()
    else:
        out = impl_res.value
        mapped = apply_phi_tuple(monoid, case.phi, out.states)
        rhs = Charged(
            monoid.combine(impl_res.cost, mapped.cost),
            Continue(out.obs, mapped.value),
        )
        successors = out.states

    behave_ok = lhs.value == rhs.value or encode(lhs.value) == encode(rhs.value)
    if not behave_ok:
        verdict = Verdict.BEHAVIOR_MISMATCH
    elif _cost_ok(case, mode, lhs.cost, rhs.cost):
        verdict = Verdict.PASS
    else:
        verdict = Verdict.COST_MISMATCH
    return _mk_check(case, method, inputs, arg, lhs, rhs, verdict), successors


def _expected_square(case, method, inputs, arg):
    sig = case.sig(method)
    inputs = tuple(inputs)
    if len(inputs) != sig.in_arity:
        raise ArityMismatch(
            f"{method} takes {sig.in_arity} input state(s), got {len(inputs)}"
        )
    mode = case.phi.mode
    _require_mode_support(case, mode)
    monoid = case.monoid

    phi_in = apply_phi_tuple(monoid, case.phi, inputs)
    spec_res = case.spec.method(method).run(phi_in.value, arg)
    for _w, out in spec_res.dist.branches:
        _guard_outcome(sig, out)
    lhs = ExpectedCharged(
        Fraction(phi_in.cost) + spec_res.expected_cost, spec_res.dist
    )

    impl_res = case.impl.method(method).run(inputs, arg)
    extra = Fraction(0)
    branches = []
    successors: List[Any] = []
    for w, out in impl_res.dist.branches:
        _guard_outcome(sig, out)
        if out is STOP:
            branches.append((w, STOP))
            continue
        mapped = apply_phi_tuple(monoid, case.phi, out.states)
        extra += w * Fraction(mapped.cost)
        branches.append((w, Continue(out.obs, mapped.value)))
        successors.extend(out.states)
    rhs = ExpectedCharged(
        impl_res.expected_cost + extra, Dist.from_branches(branches)
    )

    if lhs.dist != rhs.dist:
        verdict = Verdict.BEHAVIOR_MISMATCH
    elif _cost_ok(case, mode, lhs.expected_cost, rhs.expected_cost):
        verdict = Verdict.PASS
    else:
        verdict = Verdict.COST_MISMATCH
    return _mk_check(case, method, inputs, arg, lhs, rhs, verdict), tuple(successors)


def check_square(
    case: VerificationCase, method: str, inputs: Sequence[Any], arg: Any = UNIT
) -> SquareCheck:
    """Check the generalized amortization square at one input tuple."""
    check, _ = _deterministic_square(case, method, inputs, arg)
    return check


def check_expected_square(
    case: VerificationCase, method: str, inputs: Sequence[Any], arg: Any = UNIT
) -> SquareCheck:
    """The square on expected costs and canonical outcome distributions."""
    check, _ = _expected_square(case, method, inputs, arg)
    return check


def _slack(monoid, check: SquareCheck) -> Optional[Any]:
    if not monoid.numeric:
        return None
    return check.lhs_cost - check.rhs_cost


def explore(
    case: VerificationCase,
    max_depth: Optional[int] = None,
    max_states: Optional[int] = None,
    limit: int = 10,
) -> Report:
    """Breadth-first exploration from the seeds, checking every square.

    For every reached input tuple (all ordered in_arity-sized combinations
    of reached states, generated once each), every method and every
    argument in its domain, the amortization square is checked. Continue
    successors join the frontier, deduplicated by serialization, until the
    depth or state limits are hit; the case's `explore_filter` keeps
    out-of-scope successors from being admitted at all.
    """
    if max_depth is None:
        max_depth = case.max_depth
    if max_states is None:
        max_states = case.max_states
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if max_states < len(case.impl.seeds):
        raise ValueError("max_states must cover at least the seeds")

    t0 = time.perf_counter()
    square = _expected_square if case.randomized else _deterministic_square
    serialize = case.impl.state_domain.serialize
    invariant = case.impl.state_invariant

    states: List[Any] = []
    depths: List[int] = []
    index = {}

    def admit(s: Any, depth: int) -> None:
        if case.explore_filter is not None and not case.explore_filter(s):
            return
        key = serialize(s)
        if key in index or len(states) >= max_states:
            return
        if invariant is not None and not invariant(s):
            raise StateInvariantViolation(
                f"{case.name}: state {key} at depth {depth} breaks the invariant"
            )
        index[key] = len(states)
        states.append(s)
        depths.append(depth)

    for seed in case.impl.seeds:
        admit(seed, 0)

    squares = 0
    failures = 0
    counterexamples: List[SquareCheck] = []
    slack_max: Optional[Any] = None

    i = 0
    while i < len(states):
        for m in case.impl.methods:
            k = m.sig.in_arity
            if k == 1:
                tuples = [(i,)]
            else:
                # Every ordered k-tuple over reached states, generated once:
                # exactly those whose newest component is state i.
                tuples = [t for t in product(range(i + 1), repeat=k) if max(t) == i]
            for idx_tuple in tuples:
                inputs = tuple(states[j] for j in idx_tuple)
                succ_depth = 1 + max(depths[j] for j in idx_tuple)
                can_expand = succ_depth <= max_depth
                for arg in m.sig.arg_domain:
                    check, successors = square(case, m.sig.name, inputs, arg)
                    squares += 1
                    gap = _slack(case.monoid, check)
                    if gap is not None and (slack_max is None or gap > slack_max):
                        slack_max = gap
                    if check.verdict is not Verdict.PASS:
                        failures += 1
                        if len(counterexamples) < limit:
                            counterexamples.append(check)
                    if can_expand:
                        for s in successors:
                            admit(s, succ_depth)
        i += 1

    counterexamples.sort(key=lambda c: (c.method, c.inputs_serialized, c.arg_literal))
    return Report(
        case_name=case.name,
        mode=case.phi.mode,
        states_explored=len(states),
        squares_checked=squares,
        passed=failures == 0,
        failures=failures,
        counterexamples=tuple(counterexamples),
        wall_time=time.perf_counter() - t0,
        slack_max=slack_max,
    )


def _step_point(case, coalg, method, state, arg):
    """Run one 1-in/1-out step, unwrapping the randomized point outcome."""
    res = coalg.method(method).run((state,), arg)
    if case.randomized:
        if not res.dist.is_point():
            raise UnsupportedArity(
                f"{case.name}: trace checking needs point outcome "
                f"distributions, {method} branches"
            )
        return res.expected_cost, res.dist.branches[0][1]
    return res.cost, res.value


def check_trace(case: VerificationCase, trace: Trace) -> Report:
    """Verify the telescoped amortization identity along one trace.

    The implementation runs from the chosen seed; the specification runs
    from the seed's image under the potential. Per-step observables must
    agree, Stop must happen on both sides together, and the totals must
    satisfy  potential(start) + spec total  vs  impl total + potential(end)
    under the case's mode (the final potential term vanishes if the trace
    ends in Stop).
    """
    t0 = time.perf_counter()
    mode = case.phi.mode
    _require_mode_support(case, mode)
    monoid = case.monoid

    seed = case.impl.seeds[trace.seed_index]
    phi0_cost = case.phi.cost_of(seed)
    impl_state = seed
    spec_state = case.phi.beh_of(seed)

    total_impl = monoid.identity
    total_spec = monoid.identity
    steps_run = 0
    stopped = False
    mismatches: List[TraceMismatch] = []

    for step_no, (method, arg) in enumerate(trace.steps):
        sig = case.sig(method)
        if not sig.sequential:
            raise UnsupportedArity(
                f"{method} is {sig.in_arity}-in/{sig.out_arity}-out; "
                "traces cover sequential methods only"
            )
        impl_cost, impl_out = _step_point(case, case.impl, method, impl_state, arg)
        spec_cost, spec_out = _step_point(case, case.spec, method, spec_state, arg)
        total_impl = monoid.combine(total_impl, impl_cost)
        total_spec = monoid.combine(total_spec, spec_cost)
        steps_run += 1

        impl_stop = impl_out is STOP
        spec_stop = spec_out is STOP
        if impl_stop != spec_stop:
            side = "impl" if impl_stop else "spec"
            mismatches.append(
                TraceMismatch(step_no, "stop", f"{method}: only {side} stopped")
            )
            break
        if impl_stop:
            stopped = True
            break
        if impl_out.obs != spec_out.obs and encode(impl_out.obs) != encode(spec_out.obs):
            mismatches.append(
                TraceMismatch(
                    step_no,
                    "observable",
                    f"{method}: impl observed {impl_out.obs!r}, "
                    f"spec observed {spec_out.obs!r}",
                )
            )
            break
        impl_state = impl_out.states[0]
        spec_state = spec_out.states[0]

    slack = None
    if not mismatches:
        lhs = monoid.combine(phi0_cost, total_spec)
        if stopped:
            rhs = total_impl
        else:
            rhs = monoid.combine(total_impl, case.phi.cost_of(impl_state))
        if not _cost_ok(case, mode, lhs, rhs):
            rel = "=" if mode is Mode.EXACT else ">="
            mismatches.append(
                TraceMismatch(
                    -1,
                    "telescope",
                    f"wanted lhs {rel} rhs, got lhs={lhs!r} rhs={rhs!r}",
                )
            )
        if case.monoid.numeric:
            slack = lhs - rhs

    return Report(
        case_name=case.name,
        mode=mode,
        states_explored=steps_run + 1,
        squares_checked=steps_run,
        passed=not mismatches,
        failures=len(mismatches),
        counterexamples=tuple(mismatches),
        wall_time=time.perf_counter() - t0,
        slack_max=slack,
    )


def random_trace(
    case: VerificationCase, max_steps: int, rng: random.Random
) -> Trace:
    """A random trace over the case's sequential methods and argument domains."""
    sequential = [m.sig for m in case.impl.methods if m.sig.sequential]
    if not sequential:
        raise UnsupportedArity(f"{case.name} has no 1-in/1-out methods")
    n = rng.randint(0, max_steps)
    steps = []
    for _ in range(n):
        sig = rng.choice(sequential)
        steps.append((sig.name, rng.choice(sig.arg_domain)))
    return Trace(tuple(steps), seed_index=rng.randrange(len(case.impl.seeds)))


def arg_literal(arg: Any) -> str:
    """The documented textual encoding of a method argument."""
    if arg == UNIT and isinstance(arg, tuple):
        return "()"
    if isinstance(arg, bool):
        raise TypeError("boolean arguments have no trace encoding")
    if isinstance(arg, int):
        return str(arg)
    if isinstance(arg, str):
        return '"' + arg.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(arg, NamedFn):
        return arg.name
    raise TypeError(f"argument {arg!r} has no trace encoding")


def parse_arg(sig: MethodSig, token: str, line: int, column: int) -> Any:
    for candidate in sig.arg_domain:
        if arg_literal(candidate) == token:
            return candidate
    raise TraceParseError(
        line, column, f"argument {token!r} is not in the domain of {sig.name}"
    )


def parse_trace(case: VerificationCase, text: str, seed_index: int = 0) -> Trace:
    """Parse the plain-text trace format.

    One record per line: ``method_name argument_literal``. Lines starting
    with ``#`` and blank lines are ignored. Argument literals are integers,
    double-quoted strings, ``()`` for unit, or the name of a function in
    the method's domain.
    """
    steps = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        name = stripped.split(None, 1)[0]
        column = raw.index(name) + 1
        table = case.impl.sig_table
        if name not in table:
            raise TraceParseError(line_no, column, f"unknown method {name!r}")
        rest = stripped[len(name):].strip()
        if not rest:
            raise TraceParseError(
                line_no, column + len(name), f"missing argument for {name!r}"
            )
        arg_col = raw.index(rest[0], column + len(name) - 1) + 1
        steps.append((name, parse_arg(table[name], rest, line_no, arg_col)))
    return Trace(tuple(steps), seed_index=seed_index)
