"""Argumentation reformulation of Language E.

A domain translates into a program of background facts and rules plus grounded
argument rules of six schemata. Sets of argument rules attack each other when
they derive complementary `HoldsAt` literals and the attacker's responsible
subset is not lower in priority. Admissible sets defend themselves against all
attackers; maximal ones correspond to models.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, ClassVar

from e_planner.common.error import CapExceededError
from e_planner.common.log import get_log
from e_planner.core import Effect, FluentLiteral, HoldsAt, complement

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

    from e_planner.core import CausalLaw, Constraint, HappensAt, PlanningProblem

log = get_log("argumentation")

DEFAULT_MAX_FLUENTS = 16


class Schema(StrEnum):
    PG = "PG"
    NG = "NG"
    PP = "PP"
    NP = "NP"
    PA = "PA"
    NA = "NA"

    @property
    def positive(self) -> bool:
        return self.value[0] == "P"

    @property
    def family(self) -> str:
        """`G`eneration, `P`ersistence or `A`ssumption."""
        return self.value[1]


_SCHEMA_ORDER = {s: i for i, s in enumerate(Schema)}
_RULE_RE = re.compile(r"^(PG|NG|PP|NP|PA|NA)\[([A-Za-z][A-Za-z0-9_]*),(\d+)(?:;(\d+))?\]$")


@dataclass(frozen=True, slots=True)
class ArgumentRule:
    """A grounded instance of one of the six argument schemata.

    `at` is the conclusion time; `since` is the body time of generation and
    persistence rules (strictly earlier) and None for assumptions.
    """

    schema: Schema
    fluent: str
    at: int
    since: int | None = None

    def __post_init__(self) -> None:
        if (self.since is None) != (self.schema.family == "A"):
            msg = f"{self.schema} rules {'take no' if self.schema.family == 'A' else 'need a'} body time"
            raise ValueError(msg)
        if self.since is not None and not 0 <= self.since < self.at:
            msg = f"body time {self.since} must precede conclusion time {self.at}"
            raise ValueError(msg)

    @classmethod
    def parse(cls, text: str) -> ArgumentRule:
        """Parse `PG[Running,7;5]` / `PA[Petrol,5]` notation."""
        m = _RULE_RE.match(text.replace(" ", ""))
        if m is None:
            msg = f"not an argument rule: {text!r}"
            raise ValueError(msg)
        schema, fluent, at, since = m.groups()
        return cls(Schema(schema), fluent, int(at), None if since is None else int(since))

    @property
    def conclusion(self) -> HoldsAt:
        return HoldsAt(FluentLiteral(self.fluent, self.schema.positive), self.at)

    @property
    def is_generation(self) -> bool:
        return self.schema.family == "G"

    @property
    def is_persistence(self) -> bool:
        return self.schema.family == "P"

    @property
    def is_assumption(self) -> bool:
        return self.schema.family == "A"

    def sort_key(self) -> tuple[int, str, int, int]:
        """Schema, fluent, then conclusion time descending."""
        return (_SCHEMA_ORDER[self.schema], self.fluent, -self.at, -(self.since if self.since is not None else -1))

    def __str__(self) -> str:
        if self.since is None:
            return f"{self.schema}[{self.fluent},{self.at}]"
        return f"{self.schema}[{self.fluent},{self.at};{self.since}]"


def _schema(family: str, positive: bool) -> Schema:  # noqa: FBT001
    return Schema(("P" if positive else "N") + family)


def assumption(lit: HoldsAt) -> ArgumentRule:
    return ArgumentRule(_schema("A", lit.literal.positive), lit.literal.fluent, lit.time)


def generation(lit: HoldsAt, since: int) -> ArgumentRule:
    return ArgumentRule(_schema("G", lit.literal.positive), lit.literal.fluent, lit.time, since)


def persistence(lit: HoldsAt, since: int) -> ArgumentRule:
    return ArgumentRule(_schema("P", lit.literal.positive), lit.literal.fluent, lit.time, since)


def negate(lit: HoldsAt) -> HoldsAt:
    return HoldsAt(complement(lit.literal), lit.time)


def fmt_rules(rules: Iterable[ArgumentRule]) -> str:
    return "{" + ", ".join(str(r) for r in sorted(rules, key=ArgumentRule.sort_key)) + "}"


def rules_key(rules: Iterable[ArgumentRule]) -> tuple[int, tuple[tuple[int, str, int, int], ...]]:
    """Deterministic ordering of rule sets: smaller first, then by member keys."""
    keys = tuple(sorted(r.sort_key() for r in rules))
    return (len(keys), keys)


# Background theory


@dataclass(frozen=True, slots=True)
class CausalRule:
    """`Initiation(F,t) <- HappensAt(A,t), HoldsAt(..)` (or `Termination`) for one c-proposition."""

    law: CausalLaw

    def __str__(self) -> str:
        head = "Initiation" if self.law.effect is Effect.INITIATES else "Termination"
        body = [f"HappensAt({self.law.action},t)"]
        body.extend(
            f"{'' if lit.positive else '-'}HoldsAt({lit.fluent},t)" for lit in self.law.condition
        )
        return f"{head}({self.law.fluent},t) <- {', '.join(body)}"


@dataclass(frozen=True, slots=True)
class BackgroundTheory:
    happens_facts: frozenset[HappensAt]
    causal_rules: tuple[CausalRule, ...]


@dataclass(frozen=True, slots=True)
class Requirements:
    """What an admissible set must confirm: t-propositions to derive and r-propositions to respect."""

    observations: frozenset[HoldsAt] = frozenset()
    constraints: tuple[Constraint, ...] = ()

    def extended(self, observations: Iterable[HoldsAt]) -> Requirements:
        return Requirements(self.observations | frozenset(observations), self.constraints)


@dataclass(frozen=True, slots=True)
class Confirmation:
    violated: bool = False
    missing: HoldsAt | None = None

    @property
    def ok(self) -> bool:
        return not self.violated and self.missing is None


@dataclass(frozen=True)
class ArgumentationProgram:
    """Background theory, grounded rules (all schemata), base (generation and assumptions) and requirements."""

    problem: PlanningProblem
    background: BackgroundTheory
    horizon: int
    theory_rules: frozenset[ArgumentRule]
    base: frozenset[ArgumentRule]
    requirements: Requirements
    _views: dict[frozenset[HappensAt], ProgramView] = field(default_factory=dict, compare=False, repr=False)

    @property
    def fluents(self) -> tuple[str, ...]:
        return self.problem.fluent_order

    def view(self, extra_facts: Iterable[HappensAt] = ()) -> ProgramView:
        """The program read under background facts plus `extra_facts` (cached per fact set)."""
        facts = self.background.happens_facts | frozenset(extra_facts)
        if (cached := self._views.get(facts)) is None:
            cached = self._views[facts] = ProgramView(self, facts)
        return cached


def translate(d: PlanningProblem, horizon: int | None = None) -> ArgumentationProgram:
    """Translate a domain into its argumentation program, grounding every schema up to `horizon`."""
    h = d.horizon if horizon is None else horizon
    background = BackgroundTheory(frozenset(d.occurrences), tuple(CausalRule(law) for law in d.laws))

    theory: set[ArgumentRule] = set()
    for f in d.fluent_order:
        for positive in (True, False):
            for t in range(h + 1):
                lit = HoldsAt(FluentLiteral(f, positive), t)
                theory.add(assumption(lit))
                for since in range(t):
                    theory.add(generation(lit, since))
                    theory.add(persistence(lit, since))

    base = frozenset(r for r in theory if not r.is_persistence)
    requirements = Requirements(frozenset(d.observations), d.constraints)
    log.debug("translated %s: %d rules, %d in base", d.name or "<problem>", len(theory), len(base))
    return ArgumentationProgram(d, background, h, frozenset(theory), base, requirements)


# Priorities


def _conflicting(a: ArgumentRule, b: ArgumentRule) -> bool:
    return a.fluent == b.fluent and a.at == b.at and a.schema.positive != b.schema.positive


def rule_less(a: ArgumentRule, b: ArgumentRule) -> bool:
    """Strict priority between conflicting rules; later events beat earlier ones.

    - persistence < generation firing at or after the persistence body time
    - generation < generation firing strictly later
    - assumption < any generation or persistence rule
    """
    if not _conflicting(a, b) or b.is_assumption:
        return False
    if a.is_assumption:
        return True
    if not b.is_generation:
        return False
    assert a.since is not None and b.since is not None  # noqa: S101
    if a.is_persistence:
        return b.since >= a.since
    return a.since < b.since


def set_lower(a: Iterable[ArgumentRule], b: Iterable[ArgumentRule]) -> bool:
    """`a` has a rule below some rule of `b` and no rule above any rule of `b`."""
    pairs = list(itertools.product(tuple(a), tuple(b)))
    return any(rule_less(x, y) for x, y in pairs) and not any(rule_less(y, x) for x, y in pairs)


# Supports


def _minimal(candidates: Iterable[frozenset[ArgumentRule]]) -> tuple[frozenset[ArgumentRule], ...]:
    kept: list[frozenset[ArgumentRule]] = []
    for s in sorted(set(candidates), key=rules_key):
        if not any(k <= s for k in kept):
            kept.append(s)
    return tuple(kept)


class Supports:
    """Minimal sets of rules responsible for deriving literals, drawn from a fixed pool.

    The pool is either an explicit rule set (any schema) or, when None, the
    whole base of the program (generation rules and assumptions).
    """

    __slots__ = ("_index", "_memo", "_view")

    def __init__(self, view: ProgramView, rules: Iterable[ArgumentRule] | None) -> None:
        self._view = view
        self._memo: dict[HoldsAt, tuple[frozenset[ArgumentRule], ...]] = {}
        self._index: dict[HoldsAt, list[ArgumentRule]] | None = None
        if rules is not None:
            self._index = {}
            for r in rules:
                self._index.setdefault(r.conclusion, []).append(r)

    def _candidates(self, lit: HoldsAt) -> Iterable[ArgumentRule]:
        if self._index is not None:
            return self._index.get(lit, ())
        if not 0 <= lit.time <= self._view.horizon or lit.literal.fluent not in self._view.fluents:
            return ()
        return (assumption(lit), *(generation(lit, since) for since in range(lit.time)))

    def of(self, lit: HoldsAt) -> tuple[frozenset[ArgumentRule], ...]:
        if (cached := self._memo.get(lit)) is not None:
            return cached

        found: list[frozenset[ArgumentRule]] = []
        for r in self._candidates(lit):
            if r.is_assumption:
                found.append(frozenset((r,)))
            elif r.is_generation:
                assert r.since is not None  # noqa: S101
                found.extend(body | {r} for body in self.bodies(r.conclusion.literal, r.since))
            else:
                assert r.since is not None  # noqa: S101
                found.extend(s | {r} for s in self.of(HoldsAt(lit.literal, r.since)))

        result = self._memo[lit] = _minimal(found)
        return result

    def bodies(self, lit: FluentLiteral, since: int) -> list[frozenset[ArgumentRule]]:
        """Supports of `Initiation`/`Termination` of `lit`'s fluent at `since`."""
        out: list[frozenset[ArgumentRule]] = []
        for law in self._view.firing_laws(since):
            if law.fluent != lit.fluent or law.literal.positive != lit.positive:
                continue
            per_condition = [self.of(HoldsAt(c, since)) for c in law.condition]
            out.extend(frozenset().union(*combo) for combo in itertools.product(*per_condition))
        return out

    def derives(self, lit: HoldsAt) -> bool:
        return bool(self.of(lit))

    def closure(self) -> frozenset[HoldsAt]:
        """Every literal derivable from the pool (explicit pools only)."""
        if self._index is None:
            msg = "closure of the whole base is not enumerable"
            raise TypeError(msg)
        return frozenset(lit for lit in self._index if self.of(lit))


class ProgramView:
    """A program read under a fixed set of `HappensAt` facts; caches supports and attackers."""

    _WITHIN_CACHE_LIMIT: ClassVar[int] = 20_000

    def __init__(self, program: ArgumentationProgram, facts: frozenset[HappensAt]) -> None:
        self.program = program
        self.facts = facts
        self.horizon = program.horizon
        self.fluents = frozenset(program.fluents)
        laws_at: dict[int, list[CausalLaw]] = {}
        for occ in sorted(facts):
            laws_at.setdefault(occ.time, []).extend(program.problem.laws_for(occ.action))
        self._laws_at = {t: tuple(laws) for t, laws in laws_at.items()}
        self.base = Supports(self, None)
        self._canonical: dict[HoldsAt, tuple[frozenset[ArgumentRule], ...]] = {}
        self._within: dict[frozenset[ArgumentRule], Supports] = {}

    def firing_laws(self, t: int) -> tuple[CausalLaw, ...]:
        """Laws of actions that happen at `t` (their conditions still have to be derived)."""
        return self._laws_at.get(t, ())

    def within(self, rules: frozenset[ArgumentRule]) -> Supports:
        if (cached := self._within.get(rules)) is None:
            if len(self._within) >= self._WITHIN_CACHE_LIMIT:
                self._within.clear()
            cached = self._within[rules] = Supports(self, rules)
        return cached

    def canonical_supports(self, lit: HoldsAt) -> tuple[frozenset[ArgumentRule], ...]:
        """Minimal supports in the full rule set with at most one persistence step, on top."""
        if (cached := self._canonical.get(lit)) is None:
            found = list(self.base.of(lit))
            for since in range(lit.time):
                step = persistence(lit, since)
                found.extend(s | {step} for s in self.base.of(HoldsAt(lit.literal, since)))
            cached = self._canonical[lit] = _minimal(found)
        return cached

    def attackers(self, lit: HoldsAt) -> tuple[frozenset[ArgumentRule], ...]:
        """Canonical attackers of a derived literal: canonical supports of its complement."""
        return self.canonical_supports(negate(lit))

    def attacks(self, attacker: frozenset[ArgumentRule], attacked: frozenset[ArgumentRule]) -> bool:
        sa = self.within(attacker)
        sb = self.within(attacked)
        derived_b = sb.closure()
        for mu in sorted(sa.closure()):
            if negate(mu) not in derived_b:
                continue
            if any(not set_lower(a, b) for a in sa.of(mu) for b in sb.of(negate(mu))):
                return True
        return False

    def self_attacking(self, rules: frozenset[ArgumentRule]) -> bool:
        return self.attacks(rules, rules)

    def undefended(self, rules: frozenset[ArgumentRule]) -> Iterator[tuple[HoldsAt, frozenset[ArgumentRule]]]:
        """Canonical attackers of `rules` it does not counterattack, in deterministic order."""
        derived = sorted(self.within(rules).closure(), key=lambda h: (h.literal.fluent, -h.time, h.literal.positive))
        for lit in derived:
            for attacker in self.attackers(lit):
                if self.attacks(attacker, rules) and not self.attacks(rules, attacker):
                    yield lit, attacker

    def confirmation(self, rules: frozenset[ArgumentRule], requirements: Requirements) -> Confirmation:
        return confirm(self.within(rules).closure(), requirements, self.horizon)


def confirm(derived: frozenset[HoldsAt], requirements: Requirements, horizon: int) -> Confirmation:
    """Check t-propositions (must be derived) and r-propositions (implication at every tick)."""
    missing: HoldsAt | None = None
    for obs in sorted(requirements.observations, key=lambda h: (h.time, h.literal)):
        if negate(obs) in derived:
            return Confirmation(violated=True)
        if missing is None and obs not in derived:
            missing = obs

    for c in requirements.constraints:
        for t in range(horizon + 1):
            if not all(HoldsAt(lit, t) in derived for lit in c.condition):
                continue
            consequent = HoldsAt(c.literal, t)
            if negate(consequent) in derived:
                return Confirmation(violated=True)
            if missing is None and consequent not in derived:
                missing = consequent

    return Confirmation(missing=missing)


# Module-level operations


def derive(
    prog: ArgumentationProgram,
    extra_facts: Iterable[HappensAt],
    s: Iterable[ArgumentRule],
    lit: HoldsAt,
) -> tuple[bool, tuple[frozenset[ArgumentRule], ...]]:
    """Monotonic derivability of `lit` from background, facts and `s`, with all minimal supports."""
    supports = prog.view(extra_facts).within(frozenset(s)).of(lit)
    return bool(supports), supports


def attacks(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    attacker: Iterable[ArgumentRule],
    attacked: Iterable[ArgumentRule],
) -> bool:
    return prog.view(delta).attacks(frozenset(attacker), frozenset(attacked))


def is_admissible(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    s: Iterable[ArgumentRule],
    *,
    requirements: Requirements | None = None,
    confirm_requirements: bool = True,
) -> bool:
    """Non-self-attacking, counterattacks every canonical attacker, and confirms the requirements.

    Raises:
        ValueError: If `s` holds rules outside the base
    """
    rules = frozenset(s)
    if stray := rules - prog.base:
        msg = f"not in the base: {fmt_rules(stray)}"
        raise ValueError(msg)

    view = prog.view(delta)
    if view.self_attacking(rules):
        return False
    if next(view.undefended(rules), None) is not None:
        return False
    if confirm_requirements:
        return view.confirmation(rules, requirements or prog.requirements).ok
    return True


# Complete extensions


@dataclass(frozen=True, slots=True)
class Extension:
    """A complete admissible set: one assumption per (fluent, tick) plus every non-conflicting generation rule."""

    rules: frozenset[ArgumentRule]
    values: tuple[tuple[str, tuple[bool, ...]], ...]

    def holds(self, lit: HoldsAt) -> bool:
        row = dict(self.values)[lit.literal.fluent]
        return row[lit.time] == lit.literal.positive

    def literals(self) -> frozenset[HoldsAt]:
        return frozenset(
            HoldsAt(FluentLiteral(f, v), t) for f, row in self.values for t, v in enumerate(row)
        )


class _ExtensionSearch:
    """Tick-by-tick construction of complete extensions, pruning literals left undefended."""

    def __init__(self, view: ProgramView, required: frozenset[ArgumentRule]) -> None:
        self.view = view
        self.order = tuple(sorted(view.fluents))
        self.horizon = view.horizon
        self.values: dict[tuple[str, int], bool] = {}
        self.rules: set[ArgumentRule] = set()
        self.forced = {(r.fluent, r.at): r.schema.positive for r in required if r.is_assumption}
        self.required = required

    def _fired(self, t: int) -> dict[str, set[bool]] | None:
        """Effects firing at `t` under the chosen values; None on a same-tick clash."""
        effects: dict[str, set[bool]] = {}
        for law in self.view.firing_laws(t):
            if all(self.values[lit.fluent, t] == lit.positive for lit in law.condition):
                effects.setdefault(law.fluent, set()).add(law.effect is Effect.INITIATES)
        if any(len(v) > 1 for v in effects.values()):
            return None
        return effects

    def _countered_by_assumption(self, attacker: frozenset[ArgumentRule]) -> bool:
        return any(
            r.is_assumption and self.values.get((r.fluent, r.at), r.schema.positive) != r.schema.positive
            for r in attacker
        )

    def _defended(self, lit: HoldsAt) -> bool:
        current = frozenset(self.rules)
        for attacker in self.view.attackers(lit):
            if self._countered_by_assumption(attacker):
                continue
            if self.view.attacks(attacker, current) and not self.view.attacks(current, attacker):
                return False
        return True

    def _closing_rules(self, fired: dict[int, dict[str, set[bool]]]) -> set[ArgumentRule]:
        """Generation rules whose bodies never hold; they derive nothing and are always safe to add."""
        out: set[ArgumentRule] = set()
        for f in self.order:
            for positive in (True, False):
                for at in range(1, self.horizon + 1):
                    lit = HoldsAt(FluentLiteral(f, positive), at)
                    out.update(
                        generation(lit, since) for since in range(at) if positive not in fired[since].get(f, ())
                    )
        return out

    def run(self) -> Iterator[Extension]:
        fired: dict[int, dict[str, set[bool]]] = {}
        yield from self._tick(0, 0, fired)

    def _tick(self, t: int, i: int, fired: dict[int, dict[str, set[bool]]]) -> Iterator[Extension]:
        if i == len(self.order):
            if t == self.horizon:
                yield from self._leaf(fired)
                return
            effects = self._fired(t)
            if effects is None:
                return
            fired[t] = effects
            yield from self._tick(t + 1, 0, fired)
            del fired[t]
            return

        f = self.order[i]
        for value in (False, True):
            if self.forced.get((f, t), value) != value:
                continue
            lit = HoldsAt(FluentLiteral(f, value), t)
            added = {assumption(lit)}
            added.update(generation(lit, since) for since in range(t) if value in fired[since].get(f, ()))
            new = added - self.rules
            self.values[f, t] = value
            self.rules |= new
            if self._defended(lit):
                yield from self._tick(t, i + 1, fired)
            self.rules -= new
            del self.values[f, t]

    def _leaf(self, fired: dict[int, dict[str, set[bool]]]) -> Iterator[Extension]:
        # conclusions only exist up to the horizon, so effects at the last tick never clash
        full = dict(fired)
        full[self.horizon] = {}
        rules = frozenset(self.rules | self._closing_rules(full))
        if not self.required <= rules:
            return
        values = tuple((f, tuple(self.values[f, t] for t in range(self.horizon + 1))) for f in self.order)
        yield Extension(rules, values)


def complete_extensions(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt] = (),
    *,
    required: Iterable[ArgumentRule] = (),
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> Iterator[Extension]:
    """Maximal admissible sets before confirmation, optionally containing `required`.

    Raises:
        CapExceededError: If the program has more than `max_fluents` fluents
    """
    if len(prog.fluents) > max_fluents:
        raise CapExceededError("max_fluents", max_fluents)
    yield from _ExtensionSearch(prog.view(delta), frozenset(required)).run()


def _confirms(ext: Extension, requirements: Requirements, horizon: int) -> bool:
    return confirm(ext.literals(), requirements, horizon).ok


def maximal_admissible(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt] = (),
    *,
    requirements: Requirements | None = None,
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> tuple[Extension, ...]:
    """Maximal admissible sets that confirm the program's t- and r-propositions."""
    req = requirements or prog.requirements
    found = tuple(
        ext for ext in complete_extensions(prog, delta, max_fluents=max_fluents) if _confirms(ext, req, prog.horizon)
    )
    log.debug("%d maximal admissible set(s)", len(found))
    return found


def extend_to_maximal(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    s: Iterable[ArgumentRule],
    *,
    requirements: Requirements | None = None,
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> Extension | None:
    """First confirming maximal admissible set containing `s`, if any."""
    req = requirements or prog.requirements
    exts = complete_extensions(prog, delta, required=s, max_fluents=max_fluents)
    return next((ext for ext in exts if _confirms(ext, req, prog.horizon)), None)


def sceptical(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    lit: HoldsAt,
    *,
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> bool:
    return all(ext.holds(lit) for ext in maximal_admissible(prog, delta, max_fluents=max_fluents))


def credulous(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    lit: HoldsAt,
    *,
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> bool:
    return any(ext.holds(lit) for ext in maximal_admissible(prog, delta, max_fluents=max_fluents))


def dump(prog: ArgumentationProgram, *, include_theory: bool = False) -> str:
    """Background facts and rules, then base (or all) argument rules, one per line."""
    lines = [f"HappensAt({h.action},{h.time})" for h in sorted(prog.background.happens_facts)]
    lines.extend(str(rule) for rule in prog.background.causal_rules)
    rules = prog.theory_rules if include_theory else prog.base
    lines.extend(str(r) for r in sorted(rules, key=lambda r: (r.fluent, r.at, _SCHEMA_ORDER[r.schema], r.since or 0)))
    return "\n".join(lines) + "\n"
