"""Deterministic echo environment used by the protocol tests.

Each entity's observation is ``(t, entity_id)`` and its reward equals the
numeric value of the action it just sent, so any trajectory can be predicted
by hand and compared byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import StepAfterDone
from ..spaces import EntitySpec, SpaceSpec, box, discrete, make_batch, resolve_action
from .base import MultiEntityEnv


@dataclass(frozen=True)
class EchoEnvConfig:
    n_entities: int = 2
    horizon: int = 10
    act_space: SpaceSpec = field(default_factory=lambda: discrete(10))

    def __post_init__(self):
        if self.n_entities < 1 or self.horizon < 1:
            raise ValueError("n_entities and horizon must be >= 1")


def action_value(space: SpaceSpec, action) -> float:
    if space.kind == "discrete":
        return float(action)
    return float(np.sum(np.asarray(action, dtype=np.float64)))


class EchoEnv(MultiEntityEnv):
    def __init__(self, config: EchoEnvConfig = EchoEnvConfig()):
        self.config = config
        obs_space = box([2], -1e9, 1e9)
        self.entity_specs = tuple(
            EntitySpec(i, obs_space, config.act_space)
            for i in range(config.n_entities)
        )
        self.t = 0
        self._done = True

    def reset(self, episode_seed: int):
        self.t = 0
        self._done = False
        return self._observations()

    def step(self, actions):
        if self._done:
            raise StepAfterDone("echo episode already finished")
        rewards = [
            action_value(s.act_space, resolve_action(s.act_space, a))
            for s, a in zip(self.entity_specs, actions)
        ]
        self.t += 1
        self._done = self.t >= self.config.horizon
        return make_batch(self._observations(), rewards, self._done)

    def _observations(self):
        return [
            np.array([float(self.t), float(i)])
            for i in range(self.config.n_entities)
        ]
