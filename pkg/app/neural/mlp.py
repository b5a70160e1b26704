"""
Forward pass and exact input gradients of rectifier MLPs, batched over rows.
"""
import numpy as np

from app.models.mlp import Mlp


def _as_batch(net: Mlp, x) -> tuple:
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    batch = arr[None, :] if single else arr
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise ValueError(f"Network expects inputs of size {net.input_dim}, got shape {arr.shape}")
    return batch, single


def mlp_forward(net: Mlp, x) -> np.ndarray:
    """
    Evaluate the network.

    Args:
        net: The network
        x: One input vector or an (M, in) batch

    Returns:
        (out,) for a single input, (M, out) for a batch
    """
    h, single = _as_batch(net, x)
    weights, biases = net.params64
    for w, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ w.T + b, 0.0)
    out = h @ weights[-1].T + biases[-1]
    return out[0] if single else out


def mlp_input_gradient(net: Mlp, x) -> np.ndarray:
    """
    Reverse-mode Jacobian of the outputs with respect to the inputs.

    For a single-output network the output row axis is dropped, so a batch
    gives (M, in) and one input gives (in,). Otherwise (M, out, in) / (out, in).
    """
    h, single = _as_batch(net, x)
    weights, biases = net.params64
    masks = []
    for w, b in zip(weights[:-1], biases[:-1]):
        z = h @ w.T + b
        active = z > 0.0
        masks.append(active)
        h = np.where(active, z, 0.0)

    grad = np.broadcast_to(weights[-1], (h.shape[0],) + weights[-1].shape)
    for w, active in zip(reversed(weights[:-1]), reversed(masks)):
        grad = (grad * active[:, None, :]) @ w

    if net.output_dim == 1:
        grad = grad[:, 0, :]
    return grad[0] if single else grad
