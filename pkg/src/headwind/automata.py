"""k-head two-way nondeterministic finite automata.

A machine has one read-only tape holding ``^ w $`` (left and right
endmarkers around the input word) and k heads that each read one cell per
step.  The transition mapping takes (state, k symbols under the heads) to a
set of (next state, k movements) options.  Membership is decided by
exhaustive search of the configuration graph, which is finite: at most
|Q| * (n+2)^k configurations for an input of length n.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional

LEFT_END = "^"
RIGHT_END = "$"
ENDMARKERS = (LEFT_END, RIGHT_END)
MOVES = (-1, 0, 1)

DEFAULT_CONFIG_CAP = 1_000_000


class AutomatonError(ValueError):
    """Base class for malformed machine descriptions."""


class UnknownState(AutomatonError):
    pass


class UnknownSymbol(AutomatonError):
    pass


class ReservedSymbolInAlphabet(AutomatonError):
    pass


class TransitionIntoInitial(AutomatonError):
    pass


class ArityMismatch(AutomatonError):
    pass


class ResourceLimit(RuntimeError):
    """A bounded search exceeded its configured budget."""


TransitionKey = tuple[str, tuple[str, ...]]
TransitionOption = tuple[str, tuple[int, ...]]


@dataclass(frozen=True, eq=True)
class AutomatonSpec:
    """Canonical, validated machine description.

    ``transitions`` maps (state, symbols) to a tuple of options ordered by
    (next-state index, movement vector); branch indices used by certificates
    refer to this order.  Instances are immutable; build them via
    :func:`validate`.
    """

    head_count: int
    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    initial: str
    accepting: str
    transitions: Mapping[TransitionKey, tuple[TransitionOption, ...]] = field(hash=False)

    @property
    def gamma(self) -> tuple[str, ...]:
        """Tape alphabet: input symbols plus the two endmarkers."""
        return self.alphabet + ENDMARKERS

    def options(self, state: str, symbols: tuple[str, ...]) -> tuple[TransitionOption, ...]:
        return self.transitions.get((state, symbols), ())

    def __hash__(self) -> int:
        return hash((self.head_count, self.alphabet, self.states, self.initial, self.accepting))


class Configuration(NamedTuple):
    state: str
    positions: tuple[int, ...]


@dataclass(frozen=True)
class RunVerdict:
    outcome: str  # "accept" | "reject" | "loop"
    explored_configurations: int
    witness_path: Optional[tuple[tuple[Configuration, Optional[int]], ...]] = None


ACCEPT = "accept"
REJECT = "reject"
LOOP = "loop"


def validate(raw: Mapping) -> AutomatonSpec:
    """Check a parsed description and return the canonical machine.

    ``raw`` needs keys ``heads``, ``alphabet``, ``states``, ``initial``,
    ``accept`` and ``transitions`` (an iterable of
    (from_state, symbols, to_state, moves) entries).  Duplicate options
    collapse; option order is canonicalized.
    """
    try:
        k = int(raw["heads"])
        alphabet = tuple(str(s) for s in raw["alphabet"])
        states = tuple(str(s) for s in raw["states"])
        initial = str(raw["initial"])
        accepting = str(raw["accept"])
        entries = list(raw["transitions"])
    except KeyError as exc:
        raise AutomatonError(f"missing field {exc.args[0]!r}") from None

    if k < 1:
        raise AutomatonError(f"head count must be positive, got {k}")
    for sym in alphabet:
        if sym in ENDMARKERS:
            raise ReservedSymbolInAlphabet(f"symbol {sym!r} is a reserved endmarker")
    if len(set(alphabet)) != len(alphabet):
        raise AutomatonError("duplicate symbol in alphabet")
    if len(set(states)) != len(states):
        raise AutomatonError("duplicate state name")
    state_index = {q: i for i, q in enumerate(states)}
    if initial not in state_index:
        raise UnknownState(f"initial state {initial!r} not declared")
    if accepting not in state_index:
        raise UnknownState(f"accepting state {accepting!r} not declared")

    gamma = set(alphabet) | set(ENDMARKERS)
    collected: dict[TransitionKey, set[TransitionOption]] = {}
    for entry in entries:
        src, symbols, dst, moves = entry
        src, dst = str(src), str(dst)
        symbols = tuple(str(s) for s in symbols)
        moves = tuple(int(d) for d in moves)
        if src not in state_index:
            raise UnknownState(f"transition from undeclared state {src!r}")
        if dst not in state_index:
            raise UnknownState(f"transition into undeclared state {dst!r}")
        if dst == initial:
            raise TransitionIntoInitial(f"transition {src!r} -> {dst!r} targets the initial state")
        if len(symbols) != k:
            raise ArityMismatch(f"transition from {src!r} reads {len(symbols)} symbols, expected {k}")
        if len(moves) != k:
            raise ArityMismatch(f"transition into {dst!r} has {len(moves)} movements, expected {k}")
        for sym in symbols:
            if sym not in gamma:
                raise UnknownSymbol(f"transition symbol {sym!r} not in tape alphabet")
        for d in moves:
            if d not in MOVES:
                raise AutomatonError(f"movement {d} not in {{-1, 0, 1}}")
        collected.setdefault((src, symbols), set()).add((dst, moves))

    transitions = {
        key: tuple(sorted(opts, key=lambda o: (state_index[o[0]], o[1])))
        for key, opts in collected.items()
    }
    return AutomatonSpec(k, alphabet, states, initial, accepting, transitions)


def tape_of(a: AutomatonSpec, word: Iterable[str]) -> tuple[str, ...]:
    """Tape contents ``^ w $`` for a word over the input alphabet."""
    cells = tuple(word)
    for sym in cells:
        if sym not in a.alphabet:
            raise UnknownSymbol(f"word symbol {sym!r} not in alphabet")
    return (LEFT_END,) + cells + (RIGHT_END,)


def branch_successors(
    a: AutomatonSpec, tape: tuple[str, ...], cfg: Configuration
) -> list[tuple[int, Configuration]]:
    """(branch index, successor) pairs; branches that leave the tape crash.

    Branch indices refer to the full canonical option list at the current
    reading, so indices stay stable even when a crashing option is skipped.
    """
    reading = tuple(tape[p] for p in cfg.positions)
    out = []
    last = len(tape) - 1
    for branch, (nxt, moves) in enumerate(a.options(cfg.state, reading)):
        pos = tuple(p + d for p, d in zip(cfg.positions, moves))
        if all(0 <= p <= last for p in pos):
            out.append((branch, Configuration(nxt, pos)))
    return out


def successors(a: AutomatonSpec, word: Iterable[str], cfg: Configuration) -> tuple[Configuration, ...]:
    tape = tape_of(a, word)
    return tuple(c for _, c in branch_successors(a, tape, cfg))


def decide_membership(
    a: AutomatonSpec, word: Iterable[str], *, config_cap: int = DEFAULT_CONFIG_CAP
) -> RunVerdict:
    """Classify a word as accept, reject or loop.

    Accept iff the accepting state is reachable from the start
    configuration.  Otherwise loop iff the reachable part of the
    configuration graph contains a cycle (some branch runs forever), else
    reject.  For accepts, a witness path of (configuration, branch taken)
    pairs is returned; the final pair carries branch ``None``.
    """
    tape = tape_of(a, word)
    start = Configuration(a.initial, (0,) * a.head_count)

    if start.state == a.accepting:
        return RunVerdict(ACCEPT, 1, ((start, None),))

    parents: dict[Configuration, tuple[Configuration, int]] = {}
    seen = {start}
    queue = deque([start])
    accept_cfg = None
    while queue:
        cfg = queue.popleft()
        for branch, nxt in branch_successors(a, tape, cfg):
            if nxt in seen:
                continue
            seen.add(nxt)
            if len(seen) > config_cap:
                raise ResourceLimit(f"more than {config_cap} configurations explored")
            parents[nxt] = (cfg, branch)
            if nxt.state == a.accepting:
                accept_cfg = nxt
                queue.clear()
                break
            queue.append(nxt)

    if accept_cfg is not None:
        path: list[tuple[Configuration, Optional[int]]] = [(accept_cfg, None)]
        cur = accept_cfg
        while cur != start:
            prev, branch = parents[cur]
            path.append((prev, branch))
            cur = prev
        path.reverse()
        return RunVerdict(ACCEPT, len(seen), tuple(path))

    # No accept: a reachable cycle means some branch never halts.
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {cfg: WHITE for cfg in seen}
    succ_cache: dict[Configuration, list[Configuration]] = {}

    def succs(cfg: Configuration) -> list[Configuration]:
        if cfg not in succ_cache:
            succ_cache[cfg] = [c for _, c in branch_successors(a, tape, cfg)]
        return succ_cache[cfg]

    for root in seen:
        if color[root] != WHITE:
            continue
        stack: list[tuple[Configuration, int]] = [(root, 0)]
        color[root] = GRAY
        while stack:
            cfg, idx = stack[-1]
            nexts = succs(cfg)
            if idx < len(nexts):
                stack[-1] = (cfg, idx + 1)
                nxt = nexts[idx]
                if color[nxt] == GRAY:
                    return RunVerdict(LOOP, len(seen))
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
            else:
                color[cfg] = BLACK
                stack.pop()

    return RunVerdict(REJECT, len(seen))


def is_deterministic(a: AutomatonSpec) -> bool:
    return all(len(opts) <= 1 for opts in a.transitions.values())


def is_one_way(a: AutomatonSpec) -> bool:
    return all(
        d >= 0 for opts in a.transitions.values() for _, moves in opts for d in moves
    )


def clamp_endmarkers(a: AutomatonSpec) -> AutomatonSpec:
    """Drop options that would push a head past an endmarker.

    Such options crash their branch in the base semantics, so verdicts are
    unchanged; the returned machine simply never attempts the move.
    """
    kept: dict[TransitionKey, tuple[TransitionOption, ...]] = {}
    for (state, symbols), opts in a.transitions.items():
        good = tuple(
            (nxt, moves)
            for nxt, moves in opts
            if not any(
                (sym == LEFT_END and d < 0) or (sym == RIGHT_END and d > 0)
                for sym, d in zip(symbols, moves)
            )
        )
        if good:
            kept[(state, symbols)] = good
    return AutomatonSpec(a.head_count, a.alphabet, a.states, a.initial, a.accepting, kept)


def make_halting(a: AutomatonSpec) -> AutomatonSpec:
    """Equip a machine with a step odometer so that every branch halts.

    The result has 2k heads: the original k plus k counter heads whose
    positions act as digits of a base-(n+2) counter, incremented once per
    simulated step.  Digit resets (carry) expand into short runs of
    intermediate states that rewind one counter head to the left endmarker.
    A simple accepting path visits at most |Q|*(n+2)^k configurations, so a
    wrap counter in the state allows |Q| full odometer wraps before the
    machine rejects; that preserves the accepted language exactly while
    bounding every branch.

    The output's transition table enumerates all counter-head readings, so
    this is intended for small alphabets and head counts.
    """
    k = a.head_count
    wraps = len(a.states)

    if a.initial == a.accepting:
        # Accepts everything immediately; two extra idle heads keep the contract.
        return AutomatonSpec(
            2 * k, a.alphabet, (a.initial,), a.initial, a.initial, {}
        )

    def run_state(q: str, c: int) -> str:
        return f"{q}@r{c}"

    def carry_state(q: str, digit: int, c: int) -> str:
        return f"{q}@c{digit}.{c}"

    acc = "@acc"
    gamma = a.alphabet + ENDMARKERS
    counter_reads = list(_tuples(gamma, k))

    states: list[str] = []
    transitions: dict[TransitionKey, list[TransitionOption]] = {}
    zeros = (0,) * k

    def add(state: str, symbols: tuple[str, ...], option: TransitionOption) -> None:
        transitions.setdefault((state, symbols), []).append(option)

    for q in a.states:
        for c in range(wraps):
            states.append(run_state(q, c))
    for q in a.states:
        if q in (a.initial, a.accepting):
            continue
        for digit in range(1, k + 1):
            for c in range(wraps):
                states.append(carry_state(q, digit, c))
    states.append(acc)

    # Run states: perform one original step and start the counter increment.
    for (q, symbols), opts in a.transitions.items():
        for c in range(wraps):
            src = run_state(q, c)
            for t in counter_reads:
                key = symbols + t
                for nxt, moves in opts:
                    if nxt == a.accepting:
                        add(src, key, (acc, moves + zeros))
                    elif t[0] != RIGHT_END:
                        bump = (1,) + (0,) * (k - 1)
                        add(src, key, (run_state(nxt, c), moves + bump))
                    else:
                        pull = (-1,) + (0,) * (k - 1)
                        add(src, key, (carry_state(nxt, 1, c), moves + pull))

    # Carry states: rewind digit i to zero, then bump digit i+1 (or wrap).
    all_reads = list(_tuples(gamma, 2 * k))
    for q in a.states:
        if q in (a.initial, a.accepting):
            continue
        for digit in range(1, k + 1):
            for c in range(wraps):
                src = carry_state(q, digit, c)
                for key in all_reads:
                    t = key[k:]
                    if t[digit - 1] != LEFT_END:
                        moves = [0] * (2 * k)
                        moves[k + digit - 1] = -1
                        add(src, key, (src, tuple(moves)))
                    elif digit == k:
                        if c + 1 < wraps:
                            add(src, key, (run_state(q, c + 1), zeros + zeros))
                        # else: counter exhausted, no option, branch rejects
                    elif t[digit] != RIGHT_END:
                        moves = [0] * (2 * k)
                        moves[k + digit] = 1
                        add(src, key, (run_state(q, c), tuple(moves)))
                    else:
                        moves = [0] * (2 * k)
                        moves[k + digit] = -1
                        add(src, key, (carry_state(q, digit + 1, c), tuple(moves)))

    return validate(
        {
            "heads": 2 * k,
            "alphabet": a.alphabet,
            "states": states,
            "initial": run_state(a.initial, 0),
            "accept": acc,
            "transitions": [
                (state, symbols, nxt, moves)
                for (state, symbols), opts in transitions.items()
                for nxt, moves in opts
            ],
        }
    )


def _tuples(symbols: tuple[str, ...], length: int):
    if length == 0:
        yield ()
        return
    for rest in _tuples(symbols, length - 1):
        for s in symbols:
            yield (s,) + rest
