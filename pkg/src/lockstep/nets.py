"""Small multilayer perceptrons with hand-written exact gradients.

Networks are tanh-hidden, linear-output MLPs whose parameters live in one
flat float64 vector, which is also the unit of exchange for gradient
collectives and checkpoints. ``backward`` returns both the parameter
gradient (flat, same layout) and the input gradient, so losses composed of
several networks can be differentiated by chaining calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch


def param_count(sizes) -> int:
    return sum((i + 1) * o for i, o in zip(sizes[:-1], sizes[1:]))


def init_params(sizes, rng: np.random.Generator) -> np.ndarray:
    """Scaled-normal init, laid out layer by layer as (W flat, b)."""
    chunks = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        w = rng.normal(0.0, np.sqrt(1.0 / fan_in), size=(fan_in, fan_out))
        chunks.append(w.ravel())
        chunks.append(np.zeros(fan_out))
    return np.concatenate(chunks)


class Mlp:
    """Stateless-weights MLP: parameters are given per call as a flat vector."""

    def __init__(self, sizes):
        self.sizes = tuple(int(s) for s in sizes)
        if len(self.sizes) < 2:
            raise ValueError("need at least input and output sizes")
        self.n_params = param_count(self.sizes)

    def unpack(self, theta: np.ndarray):
        if theta.shape != (self.n_params,):
            raise ShapeMismatch(f"expected {self.n_params} params, got {theta.shape}")
        layers = []
        off = 0
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            w = theta[off : off + fan_in * fan_out].reshape(fan_in, fan_out)
            off += fan_in * fan_out
            b = theta[off : off + fan_out]
            off += fan_out
            layers.append((w, b))
        return layers

    def forward(self, theta: np.ndarray, x: np.ndarray):
        """Returns (output, cache). ``x`` is (batch, in) or (in,)."""
        squeeze = x.ndim == 1
        h = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if h.shape[1] != self.sizes[0]:
            raise ShapeMismatch(f"input dim {h.shape[1]} != {self.sizes[0]}")
        layers = self.unpack(theta)
        activations = [h]
        for i, (w, b) in enumerate(layers):
            z = h @ w + b
            h = np.tanh(z) if i < len(layers) - 1 else z
            activations.append(h)
        out = h[0] if squeeze else h
        return out, (layers, activations, squeeze)

    def backward(self, cache, upstream: np.ndarray):
        """Gradient of sum(output * upstream) w.r.t. params and input."""
        layers, activations, squeeze = cache
        g = np.atleast_2d(np.asarray(upstream, dtype=np.float64))
        if g.shape != activations[-1].shape:
            raise ShapeMismatch("upstream shape does not match output")
        grads = [None] * len(layers)
        for i in range(len(layers) - 1, -1, -1):
            w, _ = layers[i]
            if i < len(layers) - 1:
                g = g * (1.0 - activations[i + 1] ** 2)  # through tanh
            gw = activations[i].T @ g
            gb = g.sum(axis=0)
            grads[i] = (gw, gb)
            g = g @ w.T
        flat = np.concatenate([np.concatenate([gw.ravel(), gb]) for gw, gb in grads])
        dinput = g[0] if squeeze else g
        return flat, dinput

    def __call__(self, theta, x):
        out, _ = self.forward(theta, x)
        return out


@dataclass
class ParamVector:
    """Flat parameter vector with an update version, tagged by policy."""

    policy_name: str
    values: np.ndarray
    version: int = 0

    def bump(self, new_values: np.ndarray):
        if new_values.shape != self.values.shape:
            raise ShapeMismatch("parameter length changed")
        self.values = new_values
        self.version += 1


@dataclass
class Adam:
    """Standard Adam over a flat vector."""

    lr: float = 3e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    m: np.ndarray | None = None
    v: np.ndarray | None = None
    t: int = 0

    def step(self, theta: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self.m is None:
            self.m = np.zeros_like(theta)
            self.v = np.zeros_like(theta)
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad**2
        m_hat = self.m / (1 - self.beta1**self.t)
        v_hat = self.v / (1 - self.beta2**self.t)
        return theta - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def finite_difference(loss_fn, theta: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar loss; test oracle."""
    grad = np.zeros_like(theta)
    for i in range(theta.size):
        up = theta.copy()
        up[i] += h
        down = theta.copy()
        down[i] -= h
        grad[i] = (loss_fn(up) - loss_fn(down)) / (2 * h)
    return grad
