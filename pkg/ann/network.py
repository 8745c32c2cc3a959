"""Growable fully connected network: forward pass, backpropagation, SGD and text serialization."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from core.errors import ArgumentError, ParseError

logger = logging.getLogger(__name__)

FORMAT_HEADER = "# adaptive-dense-network v1"
INITIAL_HIDDEN = (5, 5)
ACTIVATIONS = ("tanh", "identity")


def xavier_limit(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


@dataclass(eq=False)
class DenseNetwork:
    """Layer k maps h_{k-1} -> h_k with weights[k] of shape (h_k, h_{k-1}).

    `frozen_weights`/`frozen_biases` mirror the parameters; a True entry is
    held fixed by frozen-mode updates.
    """

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    hidden_activation: str = "tanh"
    output_activation: str = "identity"
    rng_seed: int = 0
    frozen_weights: list[np.ndarray] = field(default_factory=list)
    frozen_biases: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.hidden_activation not in ACTIVATIONS or self.output_activation not in ACTIVATIONS:
            raise ArgumentError(f"activations must be one of {ACTIVATIONS}")
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ArgumentError("need one bias vector per weight matrix")
        for k, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.ndim != 2 or b.shape != (W.shape[0],):
                raise ArgumentError(f"layer {k}: weight {W.shape} and bias {b.shape} disagree")
            if k and W.shape[1] != self.weights[k - 1].shape[0]:
                raise ArgumentError(f"layer {k}: expects {W.shape[1]} inputs, previous layer has "
                                    f"{self.weights[k - 1].shape[0]} outputs")
        if not self.frozen_weights:
            self.frozen_weights = [np.zeros(W.shape, dtype=bool) for W in self.weights]
            self.frozen_biases = [np.zeros(b.shape, dtype=bool) for b in self.biases]

    @property
    def layer_dims(self) -> list[int]:
        return [self.weights[0].shape[1]] + [W.shape[0] for W in self.weights]

    @property
    def hidden(self) -> list[int]:
        return self.layer_dims[1:-1]

    @property
    def d_in(self) -> int:
        return self.layer_dims[0]

    @property
    def d_out(self) -> int:
        return self.layer_dims[-1]

    @property
    def parameter_count(self) -> int:
        return sum(W.size + b.size for W, b in zip(self.weights, self.biases))

    @property
    def architecture(self) -> str:
        return "-".join(str(d) for d in self.layer_dims)

    def copy(self) -> "DenseNetwork":
        return DenseNetwork(
            [W.copy() for W in self.weights], [b.copy() for b in self.biases],
            self.hidden_activation, self.output_activation, self.rng_seed,
            [m.copy() for m in self.frozen_weights], [m.copy() for m in self.frozen_biases],
        )

    def freeze_all(self) -> None:
        for m in self.frozen_weights + self.frozen_biases:
            m[...] = True

    def unfreeze_all(self) -> None:
        for m in self.frozen_weights + self.frozen_biases:
            m[...] = False

    def all_finite(self) -> bool:
        return all(np.all(np.isfinite(p)) for p in self.weights + self.biases)


@dataclass
class ForwardCache:
    pre: list[np.ndarray]  # pre-activation of each layer
    post: list[np.ndarray]  # post[0] is the input


@dataclass
class Gradients:
    weights: list[np.ndarray]
    biases: list[np.ndarray]


def init_network(
    d_in: int, d_out: int, seed: int = 0, hidden: Sequence[int] = INITIAL_HIDDEN,
    output_activation: str = "identity", hidden_activation: str = "tanh",
) -> DenseNetwork:
    """Xavier-uniform weights, zero biases, nothing frozen."""
    if d_in < 1 or d_out < 1 or any(h < 1 for h in hidden):
        raise ArgumentError("layer sizes must be at least 1")
    rng = np.random.default_rng(seed)
    dims = [d_in, *hidden, d_out]
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        limit = xavier_limit(fan_in, fan_out)
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return DenseNetwork(weights, biases, hidden_activation, output_activation, rng_seed=seed)


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    return np.tanh(z) if name == "tanh" else z


def _derivative(name: str, a: np.ndarray) -> np.ndarray | float:
    """Activation derivative expressed through the activation output `a`."""
    return 1.0 - a ** 2 if name == "tanh" else 1.0


def forward(net: DenseNetwork, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    x = np.asarray(x, dtype=float)
    if x.shape != (net.d_in,):
        raise ArgumentError(f"input has shape {x.shape}, network expects ({net.d_in},)")
    pre, post = [], [x]
    a = x
    last = len(net.weights) - 1
    for k, (W, b) in enumerate(zip(net.weights, net.biases)):
        z = W @ a + b
        a = _activate(net.output_activation if k == last else net.hidden_activation, z)
        pre.append(z)
        post.append(a)
    return a, ForwardCache(pre, post)


def forward_batch(net: DenseNetwork, X: np.ndarray) -> np.ndarray:
    """Rows of X are inputs; returns rows of outputs."""
    A = np.asarray(X, dtype=float)
    if A.ndim != 2 or A.shape[1] != net.d_in:
        raise ArgumentError(f"input batch has shape {A.shape}, network expects (*, {net.d_in})")
    last = len(net.weights) - 1
    for k, (W, b) in enumerate(zip(net.weights, net.biases)):
        A = _activate(net.output_activation if k == last else net.hidden_activation, A @ W.T + b)
    return A


def backprop(net: DenseNetwork, x: np.ndarray, target: np.ndarray) -> Gradients:
    """Exact gradients of 0.5 * ||target - forward(net, x)||^2."""
    y, cache = forward(net, x)
    return backprop_cached(net, cache, np.asarray(target, dtype=float) - y)


def backprop_cached(net: DenseNetwork, cache: ForwardCache, residual: np.ndarray) -> Gradients:
    """Gradients given a forward cache and residual = target - output."""
    L = len(net.weights)
    grad_w: list[np.ndarray] = [None] * L  # type: ignore[list-item]
    grad_b: list[np.ndarray] = [None] * L  # type: ignore[list-item]
    delta = -residual
    delta = delta * _derivative(net.output_activation, cache.post[L])
    for k in range(L - 1, -1, -1):
        grad_w[k] = np.outer(delta, cache.post[k])
        grad_b[k] = delta
        if k:
            delta = (net.weights[k].T @ delta) * _derivative(net.hidden_activation, cache.post[k])
    return Gradients(grad_w, grad_b)


def sgd_step(net: DenseNetwork, grads: Gradients, lr: float, respect_frozen: bool = False) -> DenseNetwork:
    """In-place p <- p - lr*g; frozen entries stay bit-identical when respect_frozen is set."""
    for params, gs, masks in ((net.weights, grads.weights, net.frozen_weights),
                              (net.biases, grads.biases, net.frozen_biases)):
        for p, g, frozen in zip(params, gs, masks):
            if p.shape != g.shape:
                raise ArgumentError(f"gradient shape {g.shape} does not match parameter {p.shape}")
            if respect_frozen:
                np.subtract(p, lr * g, out=p, where=~frozen)
            else:
                p -= lr * g
    return net


def dumps(net: DenseNetwork) -> str:
    """Versioned plain-text form; floats are written with repr so a reload is bit-exact."""
    lines = [
        FORMAT_HEADER,
        "layer_dims " + " ".join(str(d) for d in net.layer_dims),
        f"hidden_activation {net.hidden_activation}",
        f"output_activation {net.output_activation}",
        f"seed {net.rng_seed}",
    ]
    for k, (W, b) in enumerate(zip(net.weights, net.biases)):
        lines.append(f"weights {k} {W.shape[0]} {W.shape[1]}")
        lines.extend(" ".join(repr(float(v)) for v in row) for row in W)
        lines.append(f"biases {k} {b.shape[0]}")
        lines.append(" ".join(repr(float(v)) for v in b))
    return "\n".join(lines) + "\n"


def loads(text: str) -> DenseNetwork:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ParseError("not an adaptive-dense-network v1 file", line=1)
    header: dict[str, str] = {}
    cursor = 1
    while cursor < len(lines) and not lines[cursor].startswith("weights"):
        key, _, value = lines[cursor].partition(" ")
        header[key] = value.strip()
        cursor += 1
    try:
        dims = [int(v) for v in header["layer_dims"].split()]
        seed = int(header.get("seed", "0"))
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad network header: {exc}") from exc

    def floats(line_no: int) -> list[float]:
        try:
            return [float(v) for v in lines[line_no].split()]
        except (IndexError, ValueError) as exc:
            raise ParseError(f"bad parameter row: {exc}", line=line_no + 1) from exc

    weights, biases = [], []
    for k, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        expected = f"weights {k} {fan_out} {fan_in}"
        if cursor >= len(lines) or lines[cursor].strip() != expected:
            raise ParseError(f"expected '{expected}'", line=cursor + 1)
        W = np.array([floats(cursor + 1 + r) for r in range(fan_out)])
        cursor += 1 + fan_out
        if lines[cursor].strip() != f"biases {k} {fan_out}":
            raise ParseError(f"expected 'biases {k} {fan_out}'", line=cursor + 1)
        b = np.array(floats(cursor + 1))
        cursor += 2
        if W.shape != (fan_out, fan_in) or b.shape != (fan_out,):
            raise ParseError(f"layer {k} parameter count disagrees with layer_dims")
        weights.append(W)
        biases.append(b)
    return DenseNetwork(
        weights, biases,
        header.get("hidden_activation", "tanh"), header.get("output_activation", "identity"), seed,
    )


def save_network(net: DenseNetwork, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(dumps(net))
    return path


def load_network(path: str | Path) -> DenseNetwork:
    return loads(Path(path).read_text())
