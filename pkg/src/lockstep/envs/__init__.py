from .base import MultiEntityEnv, episode_rng
from .cartpole import CartPoleConfig, CartPoleEnv
from .coopnav import (
    CoopNavConfig,
    CoopNavEnv,
    collision_count,
    greedy_assignment,
    greedy_oracle_actions,
    occupancy_count,
)
from .echo import EchoEnv, EchoEnvConfig

ENV_KINDS = {
    "coopnav": (CoopNavEnv, CoopNavConfig),
    "echo": (EchoEnv, EchoEnvConfig),
    "cartpole": (CartPoleEnv, CartPoleConfig),
}


def make_env(kind: str, config: dict | None = None) -> MultiEntityEnv:
    """Instantiate a built-in environment from its registry name."""
    if kind not in ENV_KINDS:
        raise KeyError(f"unknown environment kind {kind!r}")
    env_cls, cfg_cls = ENV_KINDS[kind]
    return env_cls(cfg_cls(**(config or {})))
