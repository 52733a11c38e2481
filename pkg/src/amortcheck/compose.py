"""Composing amortization arguments.

Three constructions:

* `compose_phi` chains two potential morphisms end to end, so a doubly
  amortized implementation verifies against the outermost specification.
* `pair_cases` runs two structures side by side over a shared commutative
  cost model; the paired potential adds the component potentials.
* `translate_case` implements one interface by deterministic programs over
  another: each target method makes finitely many calls into a substrate
  coalgebra, threading its state and accumulating exactly the substrate's
  costs. Running the programs over the base case's specification isolates
  the translation's own potential; running them over the base case's
  implementation and composing potentials checks the whole pipeline.

A substrate call that Stops (e.g. popping an empty stack) is treated as an
unproductive observation: the program sees the refusal, the substrate state
is unchanged, and the Stop's cost (zero in every structure here) still
accumulates. Programs need this to probe emptiness and keep going.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Tuple

from .charged import Charged, charge, tensor
from .coalgebra import (
    STOP,
    UNIT,
    Coalgebra,
    Continue,
    Method,
    MethodSig,
    Mode,
    PotentialMorphism,
    StateDomain,
    VerificationCase,
)
from .cost import CostMonoid, NAT_COST
from .errors import (
    NonCommutativeTensor,
    OrderUnavailable,
    StepBudgetExceeded,
    UnsupportedArity,
)
from .structures import ALPHABET, cyclic_allocator, stack_case


def compose_phi(
    monoid: CostMonoid, first: PotentialMorphism, second: PotentialMorphism
) -> PotentialMorphism:
    """Sequential composition: apply `first`, then `second` to its behavior.

    Costs combine left to right. The composite is colax as soon as either
    component is, which requires the monoid to be ordered.
    """
    mode = Mode.COLAX if Mode.COLAX in (first.mode, second.mode) else Mode.EXACT
    if mode is Mode.COLAX and not monoid.ordered:
        raise OrderUnavailable("colax composition needs an ordered cost monoid")

    def phi(state):
        mid = first.phi(state)
        out = second.phi(mid.value)
        return Charged(monoid.combine(mid.cost, out.cost), out.value)

    return PotentialMorphism(phi, mode)


def _lift_method(method: Method, side: int, tag: str) -> Method:
    sig = MethodSig(
        name=f"{tag}.{method.sig.name}",
        in_arity=1,
        out_arity=1,
        arg_domain=method.sig.arg_domain,
        may_stop=method.sig.may_stop,
        obs_domain=method.sig.obs_domain,
    )

    def run(states, arg):
        (pair,) = states
        res = method.run((pair[side],), arg)
        if res.value is STOP:
            return res
        out = res.value
        if side == 0:
            successor = (out.states[0], pair[1])
        else:
            successor = (pair[0], out.states[0])
        return Charged(res.cost, Continue(out.obs, (successor,)))

    return Method(sig, run)


def _pair_coalgebra(left: Coalgebra, right: Coalgebra) -> Coalgebra:
    methods = tuple(
        [_lift_method(m, 0, "left") for m in left.methods]
        + [_lift_method(m, 1, "right") for m in right.methods]
    )
    invariant = None
    if left.state_invariant or right.state_invariant:
        li = left.state_invariant or (lambda s: True)
        ri = right.state_invariant or (lambda s: True)
        invariant = lambda pair: li(pair[0]) and ri(pair[1])
    seeds = tuple((a, b) for a in left.seeds for b in right.seeds)
    name = f"pair({left.state_domain.name},{right.state_domain.name})"
    return Coalgebra(StateDomain(name), seeds, methods, invariant)


def pair_cases(
    left: VerificationCase, right: VerificationCase, name: str = ""
) -> VerificationCase:
    """Run two cases side by side; the paired potential adds the parts.

    Methods are tagged ``left.<name>`` / ``right.<name>`` and act on their
    component only. Restricted to 1-in/1-out methods: an untouched
    component would otherwise be counted more than once in the potential
    sum, which is exactly what the tensor of potentials must not do.
    """
    if left.monoid != right.monoid:
        raise ValueError("paired cases must share one cost model")
    if not left.monoid.is_commutative:
        raise NonCommutativeTensor("pairing needs a commutative cost monoid")
    if left.randomized or right.randomized:
        raise ValueError("pairing of randomized cases is not supported")
    for case in (left, right):
        for m in case.impl.methods:
            if not m.sig.sequential:
                raise UnsupportedArity(
                    f"cannot pair {case.name}: {m.sig.name} is not 1-in/1-out"
                )

    monoid = left.monoid
    lphi, rphi = left.phi, right.phi

    def phi(pair):
        return tensor(monoid, lphi.phi(pair[0]), rphi.phi(pair[1]))

    mode = Mode.COLAX if Mode.COLAX in (lphi.mode, rphi.mode) else Mode.EXACT
    return VerificationCase(
        name=name or f"pair({left.name},{right.name})",
        monoid=monoid,
        impl=_pair_coalgebra(left.impl, right.impl),
        spec=_pair_coalgebra(left.spec, right.spec),
        phi=PotentialMorphism(phi, mode),
        max_depth=min(left.max_depth, right.max_depth),
        max_states=min(5000, left.max_states * right.max_states),
        description=f"product of {left.name} and {right.name}",
    )


class _Stopped:
    def __repr__(self) -> str:
        return "STOPPED"


#: Returned by `SubstrateRun.call` when the substrate method refuses.
STOPPED = _Stopped()


class SubstrateRun:
    """One translated-method execution over a substrate coalgebra.

    Threads the substrate state through `call`s, accumulates cost in the
    ambient monoid, and logs every call so cost accounting can be audited:
    the run's total cost is exactly the fold of the logged costs.
    """

    def __init__(self, coalg: Coalgebra, monoid: CostMonoid, state: Any, budget: int):
        self._coalg = coalg
        self._monoid = monoid
        self.state = state
        self.cost = monoid.identity
        self.calls: list = []
        self._budget = budget

    def call(self, method: str, arg: Any = UNIT) -> Any:
        if len(self.calls) >= self._budget:
            raise StepBudgetExceeded(
                f"translation program exceeded {self._budget} substrate calls"
            )
        res = self._coalg.method(method).run((self.state,), arg)
        self.cost = self._monoid.combine(self.cost, res.cost)
        self.calls.append((method, arg, res.cost))
        if res.value is STOP:
            return STOPPED
        out = res.value
        if len(out.states) != 1:
            raise UnsupportedArity(f"substrate method {method} is not 1-out")
        self.state = out.states[0]
        return out.obs

    def charge(self, cost: Any) -> None:
        """Explicitly charge cost not tied to a substrate call."""
        if len(self.calls) >= self._budget:
            raise StepBudgetExceeded("translation program exceeded its budget")
        self.cost = self._monoid.combine(self.cost, cost)
        self.calls.append(("charge", None, cost))


@dataclass(frozen=True)
class ProgramMethod:
    """A target method implemented as a program over the source interface."""

    sig: MethodSig
    program: Callable[[SubstrateRun, Any], Any]  # returns obs, or STOPPED


@dataclass(frozen=True)
class Translation:
    """Implements a target signature by programs over a source signature."""

    source: Dict[str, MethodSig]
    programs: Tuple[ProgramMethod, ...]
    step_budget: int = 10_000


def run_program(
    substrate: Coalgebra,
    monoid: CostMonoid,
    pm: ProgramMethod,
    state: Any,
    arg: Any,
    budget: int = 10_000,
) -> Tuple[Charged, Tuple]:
    """Execute one translated method; returns its outcome and the call log."""
    sub = SubstrateRun(substrate, monoid, state, budget)
    result = pm.program(sub, arg)
    if result is STOPPED:
        return Charged(sub.cost, STOP), tuple(sub.calls)
    return Charged(sub.cost, Continue(result, (sub.state,))), tuple(sub.calls)


def translate_case(
    base: VerificationCase,
    translation: Translation,
    target_spec: Coalgebra,
    phi_extra: PotentialMorphism,
    name: str,
    over: str = "spec",
    max_depth: int = 8,
    max_states: int = 2000,
) -> VerificationCase:
    """Build the case whose implementation runs translation programs.

    With ``over="spec"`` the substrate is the base case's specification
    coalgebra, so `phi_extra` alone is on trial. With ``over="impl"`` the
    substrate is the base implementation and the checked potential is
    `compose_phi(base.phi, phi_extra)`: the full pipeline.
    """
    if translation.source != base.spec.sig_table:
        raise ValueError(
            f"translation source table does not match {base.name}'s interface"
        )
    if base.randomized:
        raise ValueError("translation over randomized substrates is unsupported")
    if over not in ("spec", "impl"):
        raise ValueError("over must be 'spec' or 'impl'")
    substrate = base.spec if over == "spec" else base.impl
    monoid = base.monoid

    def make_runner(pm: ProgramMethod):
        def run(states, arg):
            (state,) = states
            out, _log = run_program(
                substrate, monoid, pm, state, arg, translation.step_budget
            )
            return out

        return run

    impl = Coalgebra(
        substrate.state_domain,
        substrate.seeds,
        tuple(Method(pm.sig, make_runner(pm)) for pm in translation.programs),
        substrate.state_invariant,
    )
    phi = phi_extra if over == "spec" else compose_phi(monoid, base.phi, phi_extra)
    return VerificationCase(
        name=name,
        monoid=monoid,
        impl=impl,
        spec=target_spec,
        phi=phi,
        max_depth=max_depth,
        max_states=max_states,
        description=f"{name}: programs over {base.name}.{over}",
    )


# ---------------------------------------------------------------------------
# Concrete composed cases.


def alloc16_to_8_phi() -> PotentialMorphism:
    """The morphism from the 16-burst allocator onto the 8-burst one.

    Behavior folds the 16-cycle onto the 8-cycle; the potential pays the
    8-burst forward during the first half of each 16-cycle.
    """
    return PotentialMorphism(lambda d: Charged(8 if d < 8 else 0, d % 8))


def alloc16_to_8_case() -> VerificationCase:
    """Intermediate stage: 16-burst allocator against the 8-burst one."""
    return VerificationCase(
        name="alloc16-to-8",
        monoid=NAT_COST,
        impl=cyclic_allocator(16),
        spec=cyclic_allocator(8),
        phi=alloc16_to_8_phi(),
        max_depth=32,
        max_states=64,
        description="16-cycle allocator simulated by the 8-cycle one",
    )


def alloc16_via_8_case() -> VerificationCase:
    """16-burst allocator against the unit-cost spec, by composing stages.

    The composite potential works out to 15 - d.
    """
    stage2 = PotentialMorphism(lambda d: Charged(7 - d, UNIT))
    composed = compose_phi(NAT_COST, alloc16_to_8_phi(), stage2)

    def spec_step(states, arg):
        return charge(1, Continue(UNIT, (UNIT,)))

    spec = Coalgebra(
        StateDomain("unit"), (UNIT,), (Method(MethodSig("alloc"), spec_step),)
    )
    return VerificationCase(
        name="alloc16-via-8",
        monoid=NAT_COST,
        impl=cyclic_allocator(16),
        spec=spec,
        phi=composed,
        max_depth=32,
        max_states=64,
        description="composed potential through the 8-burst allocator",
    )


SENTINEL = ALPHABET[0]


def counter_via_stack_case() -> VerificationCase:
    """A counter implemented by pushing/popping a sentinel on a stack.

    The substrate is the stack specification, so increments cost 3 and
    decrements cost 2 (or refuse when empty), exactly like the target
    counter spec; the potential is pure behavior (the stack's length).
    """
    base = stack_case()

    def increment(sub: SubstrateRun, arg):
        sub.call("push", SENTINEL)
        return UNIT

    def decrement(sub: SubstrateRun, arg):
        got = sub.call("pop")
        return STOPPED if got is STOPPED else UNIT

    translation = Translation(
        source=base.spec.sig_table,
        programs=(
            ProgramMethod(MethodSig("increment"), increment),
            ProgramMethod(MethodSig("decrement", may_stop=True), decrement),
        ),
    )

    def spec_increment(states, arg):
        (n,) = states
        return charge(3, Continue(UNIT, (n + 1,)))

    def spec_decrement(states, arg):
        (n,) = states
        if n == 0:
            return charge(0, STOP)
        return charge(2, Continue(UNIT, (n - 1,)))

    target_spec = Coalgebra(
        StateDomain("nat"),
        (0,),
        (
            Method(MethodSig("increment"), spec_increment),
            Method(MethodSig("decrement", may_stop=True), spec_decrement),
        ),
    )
    phi = PotentialMorphism(lambda l: Charged(0, len(l)))
    return translate_case(
        base,
        translation,
        target_spec,
        phi,
        name="counter-via-stack",
        max_depth=8,
        max_states=64,
    )


def _queue_target_spec() -> Coalgebra:
    """Queue spec with the costs derived from the stack spec.

    A flush moves each element at pop(2)+push(3)=5, so the potential is 5
    per inbox element, and an enqueue costs its push (3) plus the
    potential increase (5).
    """

    def enqueue(states, e):
        (l,) = states
        return charge(8, Continue(UNIT, (l + (e,),)))

    def dequeue(states, arg):
        (l,) = states
        if not l:
            return charge(0, STOP)
        return charge(2, Continue(l[0], (l[1:],)))

    return Coalgebra(
        StateDomain("list"),
        ((),),
        (
            Method(MethodSig("enqueue", arg_domain=ALPHABET), enqueue),
            Method(MethodSig("dequeue", may_stop=True), dequeue),
        ),
    )


def queue_via_stacks_case(over: str = "spec") -> VerificationCase:
    """A queue as programs over a pair of stacks (inbox left, outbox right).

    ``over="spec"`` checks the translation's own potential against the
    derived queue costs; ``over="impl"`` runs the same programs over the
    array-backed stacks and checks the composed potential laxly.
    """
    base = pair_cases(stack_case(), stack_case())

    def enqueue(sub: SubstrateRun, e):
        sub.call("left.push", e)
        return UNIT

    def dequeue(sub: SubstrateRun, arg):
        got = sub.call("right.pop")
        if got is not STOPPED:
            return got
        while True:
            moved = sub.call("left.pop")
            if moved is STOPPED:
                break
            sub.call("right.push", moved)
        got = sub.call("right.pop")
        return STOPPED if got is STOPPED else got

    translation = Translation(
        source=base.spec.sig_table,
        programs=(
            ProgramMethod(MethodSig("enqueue", arg_domain=ALPHABET), enqueue),
            ProgramMethod(MethodSig("dequeue", may_stop=True), dequeue),
        ),
    )

    def phi(pair):
        inbox, outbox = pair
        return Charged(5 * len(inbox), outbox + tuple(reversed(inbox)))

    name = "queue-via-stacks" if over == "spec" else "queue-via-stacks-full"
    return translate_case(
        base,
        translation,
        _queue_target_spec(),
        PotentialMorphism(phi),
        name=name,
        over=over,
        max_depth=6 if over == "spec" else 5,
        max_states=2000,
    )
