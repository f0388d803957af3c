"""Multi-entity environment contract.

An environment owns E entities stepped in lock-step: ``step`` takes a list of
E actions and returns one StepBatch. Exactly one execution context may drive
a given instance; instances hold their own RNG state.
"""

from __future__ import annotations

import numpy as np

from ..spaces import EntitySpec, StepBatch


class MultiEntityEnv:
    entity_specs: tuple

    @property
    def n_entities(self) -> int:
        return len(self.entity_specs)

    def reset(self, episode_seed: int):
        """Start a new episode; returns the list of initial observations."""
        raise NotImplementedError

    def step(self, actions) -> StepBatch:
        raise NotImplementedError


def episode_rng(base_seed: int, episode_seed: int) -> np.random.Generator:
    """Deterministic per-episode generator derived from (config, episode)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([base_seed, episode_seed])))
