"""Declarative policy-to-entity routing compiled into a process plan.

A MatchSpec names policies and lists environment entries; each entry assigns
every entity of its environment to a policy, either individually or as a
group handled by one worker. ``resolve_plan`` expands this (with replication)
into concrete env/worker nodes plus the two families of communication
groups: per-environment exchange groups and per-policy gradient groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    DuplicateEntity,
    IncompleteCoverage,
    TooFewPolicies,
    UnknownPolicy,
)


@dataclass(frozen=True)
class EntityAssignment:
    """Entities handed to one worker: a single id or an ordered group."""

    entity_ids: tuple

    def __post_init__(self):
        if not self.entity_ids:
            raise ValueError("assignment must name at least one entity")
        if len(set(self.entity_ids)) != len(self.entity_ids):
            raise ValueError("assignment repeats an entity id")

    @property
    def is_group(self) -> bool:
        return len(self.entity_ids) > 1


def single(entity_id: int) -> EntityAssignment:
    return EntityAssignment((int(entity_id),))


def group(entity_ids) -> EntityAssignment:
    return EntityAssignment(tuple(int(e) for e in entity_ids))


@dataclass(frozen=True)
class PolicyDecl:
    kind: str  # "trainable" | "frozen" | "scripted"
    algorithm: str = ""       # trainable: learner name
    checkpoint: str = ""      # frozen: checkpoint path
    scripted: str = ""        # scripted: "static" | "random"
    hyper: tuple = ()         # sorted (key, value) overrides

    def __post_init__(self):
        if self.kind not in ("trainable", "frozen", "scripted"):
            raise ValueError(f"unknown policy kind {self.kind!r}")

    @property
    def trainable(self) -> bool:
        return self.kind == "trainable"


@dataclass(frozen=True)
class MatchEntry:
    env_kind: str
    env_config: tuple  # sorted (key, value) pairs, hashable
    assignments: tuple  # of (policy_name, EntityAssignment)


@dataclass(frozen=True)
class MatchSpec:
    policies: dict
    matches: tuple
    replication: int = 1

    def __post_init__(self):
        if self.replication < 1:
            raise ValueError("replication must be >= 1")


@dataclass(frozen=True)
class EnvNodeSpec:
    node_id: int
    env_kind: str
    env_config: tuple
    replica: int
    entry_index: int


@dataclass(frozen=True)
class WorkerNodeSpec:
    node_id: int
    policy_name: str
    env_node_id: int
    assignment: EntityAssignment


@dataclass(frozen=True)
class ProcessPlan:
    policies: tuple  # of (name, PolicyDecl), declaration order
    env_nodes: tuple
    worker_nodes: tuple
    env_groups: tuple     # of (env node id, tuple of worker node ids)
    policy_groups: tuple  # of (policy name, tuple of worker node ids)

    @property
    def node_count(self) -> int:
        return len(self.env_nodes) + len(self.worker_nodes)

    def policy_group(self, name) -> tuple:
        for pname, members in self.policy_groups:
            if pname == name:
                return members
        raise UnknownPolicy(name)


def make_spec(policies, matches, replication=1) -> MatchSpec:
    """Build a MatchSpec from plain structures.

    ``matches`` items are (env_kind, env_config dict, [(policy, assignment)])
    where an assignment is an int, an iterable of ints, or EntityAssignment.
    """
    entries = []
    for env_kind, env_config, assigns in matches:
        norm = []
        for pname, a in assigns:
            if isinstance(a, EntityAssignment):
                pass
            elif isinstance(a, int):
                a = single(a)
            else:
                a = group(a)
            norm.append((pname, a))
        entries.append(MatchEntry(env_kind, _freeze(env_config), tuple(norm)))
    return MatchSpec(policies=dict(policies), matches=tuple(entries), replication=replication)


def _freeze(config):
    if config is None:
        return ()
    if isinstance(config, tuple):
        return config
    return tuple(sorted(config.items()))


def _validate(spec: MatchSpec, entity_counts: dict | None):
    for idx, entry in enumerate(spec.matches):
        seen = set()
        for pname, assign in entry.assignments:
            if pname not in spec.policies:
                raise UnknownPolicy(pname)
            for eid in assign.entity_ids:
                if eid in seen:
                    raise DuplicateEntity(idx, eid)
                seen.add(eid)
        expected = (
            entity_counts.get(entry.env_kind)
            if entity_counts is not None
            else max(seen) + 1
        )
        if expected is not None:
            missing = set(range(expected)) - seen
            extra = seen - set(range(expected))
            if extra:
                raise DuplicateEntity(idx, min(extra))
            if missing:
                raise IncompleteCoverage(idx, missing)


def resolve_plan(spec: MatchSpec, entity_counts: dict | None = None) -> ProcessPlan:
    """Expand a MatchSpec into dense, deterministically ordered nodes.

    Node ids are assigned replica-major: for each replica, env nodes for all
    entries first, then that replica's workers in entry/assignment order.
    ``entity_counts`` maps env kind -> entity count for coverage checking;
    when omitted, coverage is checked against the ids actually used.
    """
    _validate(spec, entity_counts)
    env_nodes = []
    worker_nodes = []
    env_groups = []
    policy_members = {name: [] for name in spec.policies}
    next_id = 0
    for replica in range(spec.replication):
        for entry_index, entry in enumerate(spec.matches):
            env_id = next_id
            next_id += 1
            env_nodes.append(
                EnvNodeSpec(env_id, entry.env_kind, entry.env_config, replica, entry_index)
            )
            members = []
            for pname, assign in entry.assignments:
                wid = next_id
                next_id += 1
                worker_nodes.append(WorkerNodeSpec(wid, pname, env_id, assign))
                members.append(wid)
                policy_members[pname].append(wid)
            env_groups.append((env_id, tuple(members)))
    return ProcessPlan(
        policies=tuple(spec.policies.items()),
        env_nodes=tuple(env_nodes),
        worker_nodes=tuple(worker_nodes),
        env_groups=tuple(env_groups),
        policy_groups=tuple(
            (name, tuple(policy_members[name])) for name in spec.policies
        ),
    )


def replicate(spec: MatchSpec, n: int) -> ProcessPlan:
    """Resolve ``spec`` duplicated ``n`` times; policy groups span replicas."""
    if n < 1:
        raise ValueError("replication must be >= 1")
    return resolve_plan(
        MatchSpec(policies=spec.policies, matches=spec.matches, replication=n)
    )


def round_robin_pairings(policy_names, env_kind, env_config=None, team_entity_ids=((0, 1), (2, 3))):
    """One match entry per unordered policy pair, lexicographic order.

    Each entry gives the first policy of the pair the team-A entity slots and
    the second the team-B slots, every slot as its own worker.
    """
    names = list(policy_names)
    if len(names) < 2:
        raise TooFewPolicies("round robin needs at least two policies")
    entries = []
    for a, b in combinations(sorted(names), 2):
        assigns = [(a, eid) for eid in team_entity_ids[0]]
        assigns += [(b, eid) for eid in team_entity_ids[1]]
        entries.append((env_kind, env_config, assigns))
    return entries


def plan_summary(plan: ProcessPlan) -> str:
    """Stable human-readable listing of nodes and groups."""
    lines = [
        f"nodes: {plan.node_count} ({len(plan.env_nodes)} env, "
        f"{len(plan.worker_nodes)} worker)"
    ]
    for env_id, members in plan.env_groups:
        env = plan.env_nodes[0]
        for e in plan.env_nodes:
            if e.node_id == env_id:
                env = e
                break
        lines.append(
            f"env {env_id} [{env.env_kind} r{env.replica}.{env.entry_index}]: "
            f"workers {list(members)}"
        )
    workers_by_id = {w.node_id: w for w in plan.worker_nodes}
    for name, members in plan.policy_groups:
        if not members:
            lines.append(f"policy {name}: 0 workers")
            continue
        grouped = sum(1 for wid in members if workers_by_id[wid].assignment.is_group)
        sizes = {len(workers_by_id[wid].assignment.entity_ids) for wid in members}
        if grouped == len(members) and len(sizes) == 1:
            per = next(iter(sizes))
            lines.append(
                f"policy {name}: {len(members)} workers (grouped, {per} entities each)"
            )
        else:
            lines.append(f"policy {name}: {len(members)} workers")
    return "\n".join(lines)
