"""
Least-squares training of the distance and moment-arm networks with Adam.

Parameters are optimized in float64 and handed back as float32 networks.
"""
import logging
import math
import time
from typing import List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import ConfigError, NumericalError, TrainingDivergedError
from app.models.dataset import ContactDataset
from app.models.mlp import Mlp, layer_dims_for
from app.neural.contact_map import NeuralContactMap, map_features
from app.neural.dataset import derive_seed
from app.neural.mlp import mlp_input_gradient
from app.schemas.training import HyperParams, TrainingReport

logger = logging.getLogger(__name__)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
LOG_EVERY = 10


def _backprop(weights, biases, x: np.ndarray, y: np.ndarray):
    activations = [x]
    h = x
    for w, b in zip(weights[:-1], biases[:-1]):
        h = np.maximum(h @ w.T + b, 0.0)
        activations.append(h)
    pred = h @ weights[-1].T + biases[-1]
    diff = pred - y
    loss = float(np.mean(diff * diff))

    grad_out = 2.0 * diff / diff.size
    grads_w = [None] * len(weights)
    grads_b = [None] * len(weights)
    for i in range(len(weights) - 1, -1, -1):
        grads_w[i] = grad_out.T @ activations[i]
        grads_b[i] = grad_out.sum(axis=0)
        if i > 0:
            grad_out = (grad_out @ weights[i]) * (activations[i] > 0.0)
    return loss, grads_w, grads_b


def fit_mlp(net: Mlp, x: np.ndarray, y: np.ndarray, hyper: HyperParams, seed: int, label: str = "net") -> Tuple[Mlp, List[float]]:
    """
    Minimize the mean squared error of ``net`` on (x, y).

    Returns:
        (trained network, per-epoch mean loss)

    Raises:
        TrainingDivergedError: if the loss stops being finite
    """
    if len(x) == 0:
        raise ConfigError(f"Cannot train {label} on an empty dataset")
    if hyper.epochs == 0:
        return net, []

    weights = [w.astype(np.float64) for w in net.weights]
    biases = [b.astype(np.float64) for b in net.biases]
    m_w = [np.zeros_like(w) for w in weights]
    v_w = [np.zeros_like(w) for w in weights]
    m_b = [np.zeros_like(b) for b in biases]
    v_b = [np.zeros_like(b) for b in biases]
    rng = np.random.default_rng(seed)
    n = len(x)
    step = 0
    history: List[float] = []

    for epoch in range(hyper.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, hyper.batch_size):
            batch = order[start:start + hyper.batch_size]
            loss, grads_w, grads_b = _backprop(weights, biases, x[batch], y[batch])
            if not math.isfinite(loss):
                last = history[-1] if history else float("nan")
                raise TrainingDivergedError(
                    f"{label}: loss became {loss} at epoch {epoch}, batch starting {start}; last epoch loss {last}"
                )
            total += loss * len(batch)

            step += 1
            lr = hyper.learning_rate * math.sqrt(1.0 - ADAM_BETA2 ** step) / (1.0 - ADAM_BETA1 ** step)
            for params, grads, m, v in ((weights, grads_w, m_w, v_w), (biases, grads_b, m_b, v_b)):
                for i in range(len(params)):
                    m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * grads[i]
                    v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * grads[i] * grads[i]
                    params[i] -= lr * m[i] / (np.sqrt(v[i]) + ADAM_EPS)

        history.append(total / n)
        if epoch % LOG_EVERY == 0 or epoch == hyper.epochs - 1:
            logger.info(f"{label} epoch {epoch + 1}/{hyper.epochs}: loss {history[-1]:.3e}")

    if not all(np.all(np.isfinite(w)) for w in weights):
        raise TrainingDivergedError(f"{label}: parameters became non-finite")
    return Mlp(weights, biases), history


def train_distance(dataset: ContactDataset, arch: Optional[str] = None, hyper: Optional[HyperParams] = None) -> Tuple[Mlp, List[float]]:
    """Fit d / R_sum as a function of the normalized relative pose."""
    arch = arch or settings.DEFAULT_ARCH
    hyper = hyper or HyperParams()
    seed = derive_seed(dataset.shapeA_name, dataset.shapeB_name, hyper.seed, "dist")
    net = Mlp.initialize(layer_dims_for(arch, 3, 1), np.random.default_rng(seed))
    x = map_features(dataset.q_rel, dataset.radius_sum)
    y = (dataset.d / dataset.radius_sum)[:, None]
    return fit_mlp(net, x, y, hyper, seed, label=f"{dataset.shapeA_name}/{dataset.shapeB_name} distance")


def arm_targets(dataset: ContactDataset, dist_net: Mlp) -> Tuple[np.ndarray, np.ndarray]:
    """
    Targets (-r_A . n, r_B . n) / R_sum with n the normalized translation
    gradient of the distance net, plus the mask of samples kept.
    """
    x = map_features(dataset.q_rel, dataset.radius_sum)
    grad = np.atleast_2d(mlp_input_gradient(dist_net, x))[:, 1:]
    norm = np.linalg.norm(grad, axis=1)
    keep = norm >= settings.MIN_GRADIENT_NORM
    normal = grad[keep] / norm[keep, None]
    targets = np.stack([
        -np.einsum("ni,ni->n", dataset.r_a[keep], normal),
        np.einsum("ni,ni->n", dataset.r_b[keep], normal),
    ], axis=1) / dataset.radius_sum
    return targets, keep


def train_arms(
    dataset: ContactDataset,
    dist_net: Mlp,
    arch: Optional[str] = None,
    hyper: Optional[HyperParams] = None,
) -> Tuple[Mlp, List[float], int]:
    """
    Fit the projected moment arms, using normals from the trained distance net.

    Returns:
        (arm network, loss history, number of samples dropped for a vanishing gradient)
    """
    arch = arch or settings.DEFAULT_ARCH
    hyper = hyper or HyperParams()
    targets, keep = arm_targets(dataset, dist_net)
    dropped = int(np.count_nonzero(~keep))
    if not np.any(keep):
        raise NumericalError(
            f"Distance net for {dataset.shapeA_name}/{dataset.shapeB_name} has a vanishing gradient on every sample"
        )
    if dropped:
        logger.warning(f"Dropped {dropped} samples with a degenerate distance gradient from arm training")

    seed = derive_seed(dataset.shapeA_name, dataset.shapeB_name, hyper.seed, "arms")
    net = Mlp.initialize(layer_dims_for(arch, 3, 2), np.random.default_rng(seed))
    x = map_features(dataset.q_rel[keep], dataset.radius_sum)
    trained, history = fit_mlp(net, x, targets, hyper, seed, label=f"{dataset.shapeA_name}/{dataset.shapeB_name} arms")
    return trained, history, dropped


def evaluate_holdout(contact_map: NeuralContactMap, holdout: ContactDataset, report: TrainingReport) -> TrainingReport:
    if len(holdout) == 0:
        return report
    result = contact_map.evaluate(holdout.q_rel)
    err = np.abs(result.d - holdout.d)
    near = holdout.near_mask
    signed = np.abs(holdout.d) > holdout.band / 10.0

    targets, keep = arm_targets(holdout, contact_map.dist_net)
    predicted = np.stack([result.proj_rA, result.proj_rB], axis=1)[keep]

    return report.model_copy(update={
        "holdout_mae": float(np.mean(err)),
        "holdout_mae_near": float(np.mean(err[near])) if np.any(near) else None,
        "sign_agreement": float(np.mean(np.sign(result.d[signed]) == np.sign(holdout.d[signed]))) if np.any(signed) else None,
        "arm_mae": float(np.mean(np.abs(predicted - targets * holdout.radius_sum))) if np.any(keep) else None,
    })


def train_map(dataset: ContactDataset, arch: Optional[str] = None, hyper: Optional[HyperParams] = None) -> Tuple[NeuralContactMap, TrainingReport]:
    """Holdout split, distance net, arm net, and fidelity metrics on the holdout."""
    arch = arch or settings.DEFAULT_ARCH
    hyper = hyper or HyperParams()
    started = time.perf_counter()

    train, holdout = dataset.split(hyper.holdout_fraction, derive_seed(dataset.shapeA_name, dataset.shapeB_name, hyper.seed, "split"))
    logger.info(f"Training {arch} map for {dataset.shapeA_name}/{dataset.shapeB_name} on {len(train)} samples, {len(holdout)} held out")

    dist_net, dist_loss = train_distance(train, arch, hyper)
    arm_net, arm_loss, dropped = train_arms(train, dist_net, arch, hyper)
    contact_map = NeuralContactMap(dist_net, arm_net, dataset.shapeA_name, dataset.shapeB_name, dataset.radius_sum)

    report = TrainingReport(
        shapeA=dataset.shapeA_name,
        shapeB=dataset.shapeB_name,
        arch=arch,
        n_train=len(train),
        n_holdout=len(holdout),
        dist_loss=dist_loss,
        arm_loss=arm_loss,
        dropped_arm_samples=dropped,
    )
    report = evaluate_holdout(contact_map, holdout, report)
    report = report.model_copy(update={"seconds": time.perf_counter() - started})
    logger.info(
        f"Map {dataset.shapeA_name}/{dataset.shapeB_name}: holdout MAE {report.holdout_mae}, "
        f"near-band MAE {report.holdout_mae_near}, sign agreement {report.sign_agreement}"
    )
    return contact_map, report
