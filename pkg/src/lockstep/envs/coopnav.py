"""Cooperative navigation: three agents covering three fixed targets.

Agents move in the [-1, 1]^2 plane under damped point-mass dynamics. Every
step each target that has at least one agent within the occupancy radius
contributes +1 to a shared reward, so the team ceiling over a 300-step
episode is 900. An optional collision penalty (off by default) subtracts
``w`` per collision an agent is involved in, which serves as the knob for
penalty curricula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SamplingFailure, StepAfterDone
from ..spaces import EntitySpec, box, make_batch, resolve_action
from .base import MultiEntityEnv, episode_rng

OBS_DIM = 14
N_AGENTS = 3


@dataclass(frozen=True)
class CoopNavConfig:
    n_agents: int = 3
    n_targets: int = 3
    episode_len: int = 300
    occupancy_radius: float = 0.1
    agent_radius: float = 0.05
    collision_penalty_weight: float = 0.0
    world_half_extent: float = 1.0
    velocity_damping: float = 0.5
    accel_gain: float = 0.1
    max_speed: float = 0.1
    min_target_separation: float = 0.3
    seed: int = 0

    def __post_init__(self):
        if self.episode_len < 1:
            raise ValueError("episode_len must be >= 1")
        if self.occupancy_radius <= 0:
            raise ValueError("occupancy_radius must be > 0")
        if self.collision_penalty_weight < 0:
            raise ValueError("collision_penalty_weight must be >= 0")


def occupancy_count(agent_pos, target_pos, radius: float) -> int:
    """Number of targets with at least one agent inside the closed ball."""
    agent_pos = np.asarray(agent_pos, dtype=np.float64)
    target_pos = np.asarray(target_pos, dtype=np.float64)
    dists = np.linalg.norm(agent_pos[:, None, :] - target_pos[None, :, :], axis=-1)
    return int(np.sum(np.any(dists <= radius, axis=0)))


def collision_count(agent_pos, agent_radius: float) -> np.ndarray:
    """Per-agent count of other agents within twice the body radius."""
    agent_pos = np.asarray(agent_pos, dtype=np.float64)
    n = agent_pos.shape[0]
    dists = np.linalg.norm(agent_pos[:, None, :] - agent_pos[None, :, :], axis=-1)
    hit = (dists <= 2.0 * agent_radius) & ~np.eye(n, dtype=bool)
    return hit.sum(axis=1)


class CoopNavEnv(MultiEntityEnv):
    def __init__(self, config: CoopNavConfig = CoopNavConfig()):
        self.config = config
        obs_space = box([OBS_DIM], -4.0, 4.0)
        act_space = box([2], -1.0, 1.0)
        self.entity_specs = tuple(
            EntitySpec(i, obs_space, act_space) for i in range(config.n_agents)
        )
        self.agent_pos = None
        self.agent_vel = None
        self.target_pos = None
        self.t = 0
        self._done = True

    def reset(self, episode_seed: int):
        cfg = self.config
        rng = episode_rng(cfg.seed, episode_seed)
        self.target_pos = _sample_targets(rng, cfg.n_targets, cfg.min_target_separation)
        self.agent_pos = rng.uniform(-0.9, 0.9, size=(cfg.n_agents, 2))
        self.agent_vel = np.zeros((cfg.n_agents, 2))
        self.t = 0
        self._done = False
        return self._observations()

    def step(self, actions):
        cfg = self.config
        if self._done or self.t >= cfg.episode_len:
            raise StepAfterDone("coopnav episode already finished")
        acts = np.stack(
            [np.asarray(resolve_action(s.act_space, a), dtype=np.float64)
             for s, a in zip(self.entity_specs, actions)]
        )
        vel = cfg.velocity_damping * self.agent_vel + cfg.accel_gain * acts
        speed = np.linalg.norm(vel, axis=1, keepdims=True)
        scale = np.where(speed > cfg.max_speed, cfg.max_speed / np.maximum(speed, 1e-12), 1.0)
        self.agent_vel = vel * scale
        half = cfg.world_half_extent
        self.agent_pos = np.clip(self.agent_pos + self.agent_vel, -half, half)
        self.t += 1

        occ = occupancy_count(self.agent_pos, self.target_pos, cfg.occupancy_radius)
        coll = collision_count(self.agent_pos, cfg.agent_radius)
        rewards = occ - cfg.collision_penalty_weight * coll
        self._done = self.t >= cfg.episode_len
        return make_batch(self._observations(), rewards, self._done)

    def _observations(self):
        obs = []
        for i in range(self.config.n_agents):
            own = self.agent_pos[i]
            others = [self.agent_pos[j] - own for j in range(self.config.n_agents) if j != i]
            obs.append(np.concatenate(
                [own, self.agent_vel[i], (self.target_pos - own).ravel()] + others
            ))
        return obs


def _sample_targets(rng, n_targets, min_sep, max_attempts=1000):
    for _ in range(max_attempts):
        pts = rng.uniform(-0.9, 0.9, size=(n_targets, 2))
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        off_diag = d[~np.eye(n_targets, dtype=bool)]
        if np.all(off_diag >= min_sep):
            return pts
    raise SamplingFailure(
        f"could not place {n_targets} targets with separation {min_sep}"
    )


def greedy_assignment(agent_pos, target_pos):
    """Unique agent->target map, repeatedly taking the closest free pair."""
    agent_pos = np.asarray(agent_pos)
    target_pos = np.asarray(target_pos)
    n = agent_pos.shape[0]
    dists = np.linalg.norm(agent_pos[:, None, :] - target_pos[None, :, :], axis=-1)
    assignment = {}
    free_agents = set(range(n))
    free_targets = set(range(target_pos.shape[0]))
    while free_agents and free_targets:
        best = min(
            ((a, t) for a in free_agents for t in free_targets),
            key=lambda at: (dists[at[0], at[1]], at),
        )
        assignment[best[0]] = best[1]
        free_agents.discard(best[0])
        free_targets.discard(best[1])
    return assignment


def greedy_oracle_actions(env: CoopNavEnv) -> list:
    """Reference controller: drive each agent to its greedily assigned target."""
    cfg = env.config
    assignment = greedy_assignment(env.agent_pos, env.target_pos)
    actions = []
    for i in range(cfg.n_agents):
        delta = env.target_pos[assignment[i]] - env.agent_pos[i]
        norm = np.linalg.norm(delta)
        v_des = delta if norm <= cfg.max_speed else delta * (cfg.max_speed / norm)
        accel = (v_des - cfg.velocity_damping * env.agent_vel[i]) / cfg.accel_gain
        actions.append(np.clip(accel, -1.0, 1.0))
    return actions
