"""Single-entity cart-pole balancing task (Euler-integrated).

Desk-scale control problem used by the population-evolution scheme. Discrete
push-left/push-right actions, +1 reward per surviving step, termination when
the cart leaves +-2.4, the pole passes 12 degrees, or 500 steps elapse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import StepAfterDone
from ..spaces import EntitySpec, box, discrete, make_batch, resolve_action
from .base import MultiEntityEnv, episode_rng

GRAVITY = 9.8
CART_MASS = 1.0
POLE_MASS = 0.1
POLE_HALF_LENGTH = 0.5
FORCE_MAG = 10.0
DT = 0.02
X_LIMIT = 2.4
THETA_LIMIT = 12.0 * np.pi / 180.0
MAX_STEPS = 500


@dataclass(frozen=True)
class CartPoleConfig:
    seed: int = 0


class CartPoleEnv(MultiEntityEnv):
    def __init__(self, config: CartPoleConfig = CartPoleConfig()):
        self.config = config
        self.entity_specs = (EntitySpec(0, box([4], -1e9, 1e9), discrete(2)),)
        self.state = np.zeros(4)
        self.t = 0
        self._done = True

    def reset(self, episode_seed: int):
        rng = episode_rng(self.config.seed, episode_seed)
        self.state = rng.uniform(-0.05, 0.05, size=4)
        self.t = 0
        self._done = False
        return [self.state.copy()]

    def step(self, actions):
        if self._done:
            raise StepAfterDone("cart-pole episode already finished")
        action = int(resolve_action(self.entity_specs[0].act_space, actions[0]))
        x, x_dot, theta, theta_dot = self.state
        force = FORCE_MAG if action == 1 else -FORCE_MAG

        total_mass = CART_MASS + POLE_MASS
        pole_ml = POLE_MASS * POLE_HALF_LENGTH
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        temp = (force + pole_ml * theta_dot**2 * sin_t) / total_mass
        theta_acc = (GRAVITY * sin_t - cos_t * temp) / (
            POLE_HALF_LENGTH * (4.0 / 3.0 - POLE_MASS * cos_t**2 / total_mass)
        )
        x_acc = temp - pole_ml * theta_acc * cos_t / total_mass

        x += DT * x_dot
        x_dot += DT * x_acc
        theta += DT * theta_dot
        theta_dot += DT * theta_acc
        self.state = np.array([x, x_dot, theta, theta_dot])
        self.t += 1

        self._done = (
            abs(x) > X_LIMIT or abs(theta) > THETA_LIMIT or self.t >= MAX_STEPS
        )
        return make_batch([self.state.copy()], [1.0], self._done)
