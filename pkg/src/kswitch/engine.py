"""k-switch trials with switch-and-hold semantics.

A trial picks k distinct edges (a_i, b_i) and a uniformly random permutation
sigma of their slots, then proposes replacing every (a_i, b_i) by
(a_i, b_sigma(i)). The proposal is rejected if it would create a self-loop,
an arc a_i -> b_sigma(i) that a_i already has (other than b_i itself), or
violate the constraint. A rejected trial still counts: the walk holds.

Undirected edges are given a random orientation before the permutation.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .constraints import Constraint, EdgeDelta, NoConstraint
from .errors import KTooLarge, StarterViolatesConstraint
from .graph import Graph
from .observables import Observable, ObservableTrace, measure_all


class RejectReason(enum.Enum):
    NONE = "none"
    SELF_LOOP = "self-loop"
    MULTI_EDGE = "multi-edge"
    CONSTRAINT_VIOLATED = "constraint"


_REASON = {
    K.ACCEPT_CHANGE: RejectReason.NONE,
    K.ACCEPT_HOLD: RejectReason.NONE,
    K.REJ_SELF_LOOP: RejectReason.SELF_LOOP,
    K.REJ_MULTI_EDGE: RejectReason.MULTI_EDGE,
    K.REJ_CONSTRAINT: RejectReason.CONSTRAINT_VIOLATED,
}


@dataclass(frozen=True)
class TrialOutcome:
    accepted: bool
    reject_reason: RejectReason
    changed: bool = False  # accepted and the edge set differs

    def __post_init__(self):
        if self.accepted != (self.reject_reason is RejectReason.NONE):
            raise ValueError("accepted iff no reject reason")


@dataclass(frozen=True)
class SwitchProposal:
    edge_indices: tuple[int, ...]
    permutation: tuple[int, ...]
    orientation: tuple[int, ...]  # 1 = use the stored edge reversed (undirected only)
    sources: tuple[int, ...]
    old_targets: tuple[int, ...]
    new_targets: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.edge_indices)

    def delta(self) -> EdgeDelta:
        return EdgeDelta(tuple(zip(self.sources, self.old_targets)),
                         tuple(zip(self.sources, self.new_targets)))

    def inverse_on(self, g: Graph) -> "SwitchProposal":
        """Proposal on the switched graph ``g`` that undoes this one."""
        inv = [0] * self.k
        for i, p in enumerate(self.permutation):
            inv[p] = i
        orient = tuple(int(g.src[e] != a) for e, a in zip(self.edge_indices, self.sources))
        return make_proposal(g, self.edge_indices, inv, orient)


def make_proposal(g: Graph, indices: Sequence[int], permutation: Sequence[int],
                  orientation: Sequence[int] | None = None) -> SwitchProposal:
    idx = [int(i) for i in indices]
    perm = [int(p) for p in permutation]
    if sorted(perm) != list(range(len(idx))):
        raise ValueError("permutation must be a bijection on the selected slots")
    orient = [0] * len(idx) if orientation is None or g.directed else [int(o) for o in orientation]
    src, dst = g.src, g.dst
    a = [int(dst[e]) if o else int(src[e]) for e, o in zip(idx, orient)]
    b = [int(src[e]) if o else int(dst[e]) for e, o in zip(idx, orient)]
    return SwitchProposal(tuple(idx), tuple(perm), tuple(orient), tuple(a), tuple(b),
                          tuple(b[p] for p in perm))


def propose(g: Graph, k: int, rng: np.random.Generator) -> SwitchProposal:
    """Uniform k-subset of edges, uniform permutation (identity included)."""
    idx = g.random_edge_indices(k, rng)
    perm = rng.permutation(k)
    orient = None if g.directed else rng.integers(0, 2, size=k)
    return make_proposal(g, idx, perm, orient)


class _Workspace:
    """Per-walk scratch buffers for the compiled trial."""

    def __init__(self, g: Graph, k: int, constraint: Constraint):
        self.k = k
        self.scratch = K.make_scratch(g.n_nodes, k)
        self.ckind = K.CK_NONE if constraint.kernel is None else constraint.kernel
        self.cparam = constraint.kernel_param(g)
        self.a = np.empty(k, np.int64)
        self.b = np.empty(k, np.int64)
        self.nb = np.empty(k, np.int64)
        self.ch = np.empty(k, np.int64)

    def evaluate(self, g: Graph, p: SwitchProposal, commit: bool) -> int:
        return K.evaluate(
            g.src, g.dst, g.out_ptr, g.out_adj, g.in_ptr, g.in_adj, g.directed,
            p.k, np.array(p.edge_indices, np.int64), np.array(p.permutation, np.int64),
            np.array(p.orientation, np.int64), self.a, self.b, self.nb, self.ch,
            self.ckind, self.cparam, *self.scratch, commit,
        )


def _outcome(code: int) -> TrialOutcome:
    return TrialOutcome(code in (K.ACCEPT_CHANGE, K.ACCEPT_HOLD), _REASON[code], code == K.ACCEPT_CHANGE)


def _trial(g: Graph, p: SwitchProposal, c: Constraint, ws: _Workspace, commit: bool) -> TrialOutcome:
    code = ws.evaluate(g, p, commit=commit and c.kernel is not None)
    if c.kernel is None and code == K.ACCEPT_CHANGE:
        if not c.check_incremental(g, p.delta()):
            code = K.REJ_CONSTRAINT
        elif commit:
            g.apply_switch(p.edge_indices, p.new_targets, p.sources)
    return _outcome(code)


def validate(g: Graph, p: SwitchProposal, c: Constraint | None = None) -> TrialOutcome:
    """Decide a proposal on the current graph without modifying it."""
    c = NoConstraint() if c is None else c
    return _trial(g, p, c, _Workspace(g, p.k, c), commit=False)


def try_switch(g: Graph, p: SwitchProposal, c: Constraint | None = None) -> TrialOutcome:
    """Validate and, if accepted, apply the proposal in place."""
    c = NoConstraint() if c is None else c
    return _trial(g, p, c, _Workspace(g, p.k, c), commit=True)


# -- walks -----------------------------------------------------------------


@dataclass(frozen=True)
class WalkConfig:
    k: int
    n_trials: int
    seed: int | np.random.SeedSequence | None = None
    observation_interval: int | None = None  # default: n_trials // 1000, at least 1

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.n_trials < 0:
            raise ValueError("n_trials must be non-negative")
        if self.observation_interval is not None and self.observation_interval < 1:
            raise ValueError("observation_interval must be at least 1")

    @property
    def interval(self) -> int:
        if self.observation_interval is not None:
            return self.observation_interval
        return max(1, self.n_trials // 1000)


@dataclass
class WalkReport:
    trials: int
    successes: int
    trace: ObservableTrace
    final_graph: Graph
    outcome_counts: dict[str, int] = field(default_factory=dict)

    @property
    def rejections(self) -> int:
        return self.trials - self.outcome_counts.get("accepted", 0)


class Walker:
    """A switch-and-hold walk advanced in chunks of trials.

    Owns a private copy of the starter and one random generator; the trial
    loop runs compiled whenever the constraint has a kernel.
    """

    def __init__(self, g0: Graph, constraint: Constraint | None, k: int, seed=None):
        self.constraint = NoConstraint() if constraint is None else constraint
        if k < 2:
            raise ValueError("k must be at least 2")
        if k > g0.n_edges:
            raise KTooLarge(f"k={k} exceeds M={g0.n_edges}")
        if not self.constraint.check_full(g0):
            raise StarterViolatesConstraint(f"starter graph violates {self.constraint!r}")
        self.graph = g0.copy()
        self.k = k
        self.rng = np.random.default_rng(seed)
        self.ws = _Workspace(self.graph, k, self.constraint)
        self.counts = np.zeros(K.N_CODES, np.int64)
        self.trials = 0

    @property
    def successes(self) -> int:
        return int(self.counts[K.ACCEPT_CHANGE])

    def advance(self, n: int) -> None:
        g = self.graph
        if self.constraint.kernel is not None:
            K.walk(g.src, g.dst, g.out_ptr, g.out_adj, g.in_ptr, g.in_adj, g.directed,
                   self.k, n, self.rng, self.ws.ckind, self.ws.cparam, *self.ws.scratch,
                   g._pool, self.counts)
        else:
            for _ in range(n):
                p = propose(g, self.k, self.rng)
                out = _trial(g, p, self.constraint, self.ws, commit=True)
                code = (K.ACCEPT_CHANGE if out.changed else K.ACCEPT_HOLD if out.accepted else
                        {RejectReason.SELF_LOOP: K.REJ_SELF_LOOP, RejectReason.MULTI_EDGE: K.REJ_MULTI_EDGE}
                        .get(out.reject_reason, K.REJ_CONSTRAINT))
                self.counts[code] += 1
        self.trials += n

    def outcome_counts(self) -> dict[str, int]:
        c = self.counts.tolist()
        return {
            "accepted": c[K.ACCEPT_CHANGE] + c[K.ACCEPT_HOLD],
            "changed": c[K.ACCEPT_CHANGE],
            "held_unchanged": c[K.ACCEPT_HOLD],
            "self_loop": c[K.REJ_SELF_LOOP],
            "multi_edge": c[K.REJ_MULTI_EDGE],
            "constraint": c[K.REJ_CONSTRAINT],
        }


def run_walk(g0: Graph, c: Constraint | None, cfg: WalkConfig,
             obs: Sequence[Observable] = ()) -> WalkReport:
    """Run ``cfg.n_trials`` trials from ``g0`` (which is not modified).

    Observables are measured on the current graph at trial 0 and after every
    ``cfg.interval`` trials. Successes count trials that changed the graph.
    """
    walker = Walker(g0, c, cfg.k, cfg.seed)
    trace = ObservableTrace()
    if obs:
        trace.append(0, measure_all(obs, walker.graph))
    done = 0
    step = cfg.interval
    while done < cfg.n_trials:
        n = min(step, cfg.n_trials - done)
        walker.advance(n)
        done += n
        if obs and (done % step == 0 or done == cfg.n_trials):
            trace.append(done, measure_all(obs, walker.graph))
    return WalkReport(done, walker.successes, trace, walker.graph, walker.outcome_counts())


def sample_walk(g0: Graph, c: Constraint | None, k: int, n_samples: int, spacing: int,
                seed=None, burn_in: int = 0) -> list[tuple]:
    """Canonical keys of the walk's graph every ``spacing`` trials after ``burn_in``."""
    walker = Walker(g0, c, k, seed)
    if burn_in:
        walker.advance(burn_in)
    keys = []
    for _ in range(n_samples):
        walker.advance(spacing)
        keys.append(walker.graph.key())
    return keys
