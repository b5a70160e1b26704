import re
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np

from app.core.errors import ConfigError

ARCH_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def parse_arch(arch: str) -> Tuple[int, int]:
    """'5x64' -> (5 hidden layers, 64 units each)."""
    match = ARCH_PATTERN.match(arch)
    if not match:
        raise ConfigError(f"Architecture must look like '<layers>x<width>', got '{arch}'")
    layers, width = int(match.group(1)), int(match.group(2))
    if layers < 1 or width < 1:
        raise ConfigError(f"Architecture needs at least one hidden layer and unit, got '{arch}'")
    return layers, width


def layer_dims_for(arch: str, input_dim: int = 3, output_dim: int = 1) -> List[int]:
    layers, width = parse_arch(arch)
    return [input_dim] + [width] * layers + [output_dim]


@dataclass(eq=False)
class Mlp:
    """
    Fully connected rectifier network with a linear output layer.

    Parameters are stored as float32; ``weights[i]`` has shape (out, in).
    """
    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self):
        if not self.weights or len(self.weights) != len(self.biases):
            raise ValueError("Mlp needs one bias vector per weight matrix")
        self.weights = [np.ascontiguousarray(w, dtype=np.float32) for w in self.weights]
        self.biases = [np.ascontiguousarray(b, dtype=np.float32).reshape(-1) for b in self.biases]
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or w.shape[0] != b.shape[0]:
                raise ValueError(f"Layer {i}: weight {w.shape} and bias {b.shape} disagree")
            if i > 0 and w.shape[1] != self.weights[i - 1].shape[0]:
                raise ValueError(f"Layer {i} expects {w.shape[1]} inputs, previous layer gives {self.weights[i - 1].shape[0]}")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"Layer {i} has non-finite parameters")

    @property
    def layer_dims(self) -> List[int]:
        return [int(self.weights[0].shape[1])] + [int(w.shape[0]) for w in self.weights]

    @property
    def input_dim(self) -> int:
        return self.layer_dims[0]

    @property
    def output_dim(self) -> int:
        return self.layer_dims[-1]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    @cached_property
    def params64(self) -> Tuple[List[np.ndarray], List[np.ndarray]]:
        return [w.astype(np.float64) for w in self.weights], [b.astype(np.float64) for b in self.biases]

    @classmethod
    def initialize(cls, layer_dims: Sequence[int], rng: np.random.Generator) -> "Mlp":
        """He-uniform weights, zero biases."""
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
            limit = np.sqrt(6.0 / fan_in)
            weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
            biases.append(np.zeros(fan_out))
        return cls(weights, biases)
