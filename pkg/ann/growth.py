"""Architecture growth: widen every hidden layer by one node, or deepen before the output.

Growth freezes every pre-existing parameter and leaves only the new ones
trainable, ready for frozen repair training.
"""

import logging
from typing import Literal

import numpy as np

from ann.network import DenseNetwork, xavier_limit
from core.errors import ArgumentError

logger = logging.getLogger(__name__)

WidenMode = Literal["paper_random", "function_preserving"]
DeepenMode = Literal["paper_random", "near_identity"]

NEW_PARAMETER_SCALE = 0.1
IDENTITY_NOISE_SCALE = 0.01


def widen(net: DenseNetwork, mode: WidenMode = "paper_random", seed: int = 0) -> DenseNetwork:
    """Add one node to every hidden layer.

    New incoming weights and bias are drawn at 0.1x the Xavier limit. Outgoing
    weights of a new node into pre-existing nodes are random at the same scale
    (paper_random) or zero (function_preserving).
    """
    if mode not in ("paper_random", "function_preserving"):
        raise ArgumentError(f"unknown widen mode {mode!r}")
    L = len(net.weights)
    if L < 2:
        raise ArgumentError("widen needs at least one hidden layer")
    rng = np.random.default_rng(seed)
    dims = net.layer_dims
    new_dims = [dims[0]] + [d + 1 for d in dims[1:-1]] + [dims[-1]]

    weights, biases, frozen_w, frozen_b = [], [], [], []
    for k, (W, b) in enumerate(zip(net.weights, net.biases)):
        rows, cols = W.shape
        new_rows, new_cols = new_dims[k + 1], new_dims[k]
        scale = NEW_PARAMETER_SCALE * xavier_limit(new_cols, new_rows)
        W2 = np.zeros((new_rows, new_cols))
        W2[:rows, :cols] = W
        mask = np.zeros((new_rows, new_cols), dtype=bool)
        mask[:rows, :cols] = True
        if new_rows > rows:
            # incoming weights of the new node of this layer
            W2[rows:, :] = rng.uniform(-scale, scale, size=(new_rows - rows, new_cols))
        if new_cols > cols and mode == "paper_random":
            # outgoing weights of the new node of the previous layer
            W2[:rows, cols:] = rng.uniform(-scale, scale, size=(rows, new_cols - cols))
        b2 = np.zeros(new_rows)
        b2[:rows] = b
        bmask = np.zeros(new_rows, dtype=bool)
        bmask[:rows] = True
        if new_rows > rows:
            b2[rows:] = rng.uniform(-scale, scale, size=new_rows - rows)
        weights.append(W2)
        biases.append(b2)
        frozen_w.append(mask)
        frozen_b.append(bmask)

    grown = DenseNetwork(weights, biases, net.hidden_activation, net.output_activation, net.rng_seed,
                         frozen_w, frozen_b)
    logger.debug("widen (%s): %s -> %s", mode, net.architecture, grown.architecture)
    return grown


def deepen(net: DenseNetwork, mode: DeepenMode = "paper_random", seed: int = 0) -> DenseNetwork:
    """Insert a hidden layer as wide as the last hidden layer, just before the output layer."""
    if mode not in ("paper_random", "near_identity"):
        raise ArgumentError(f"unknown deepen mode {mode!r}")
    rng = np.random.default_rng(seed)
    width = net.layer_dims[-2]
    limit = xavier_limit(width, width)
    if mode == "near_identity":
        W_new = np.eye(width) + rng.uniform(-1.0, 1.0, size=(width, width)) * IDENTITY_NOISE_SCALE * limit
    else:
        W_new = rng.uniform(-limit, limit, size=(width, width))
    b_new = np.zeros(width)

    weights = [W.copy() for W in net.weights[:-1]] + [W_new, net.weights[-1].copy()]
    biases = [b.copy() for b in net.biases[:-1]] + [b_new, net.biases[-1].copy()]
    frozen_w = [np.ones(W.shape, dtype=bool) for W in weights]
    frozen_b = [np.ones(b.shape, dtype=bool) for b in biases]
    frozen_w[-2][...] = False
    frozen_b[-2][...] = False

    grown = DenseNetwork(weights, biases, net.hidden_activation, net.output_activation, net.rng_seed,
                         frozen_w, frozen_b)
    logger.debug("deepen (%s): %s -> %s", mode, net.architecture, grown.architecture)
    return grown
