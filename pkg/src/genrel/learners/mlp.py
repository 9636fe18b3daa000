"""Fully connected ReLU network for conditional means.

Squared loss with a linear output (gaussian) or logistic loss with a sigmoid
output (binomial), plus a small L2 penalty on the weights.  Trained with
minibatch Adam.  Under the "adaptive" schedule the step size is halved
whenever the epoch loss has not improved by ``tol`` for ``patience`` epochs,
and training stops once it falls below ``min_learning_rate``.
"""

from __future__ import annotations

import numpy as np

from genrel.errors import NonFiniteLoss, TooFewRows
from genrel.learners.base import MlpSettings, RegressionFit, _sigmoid

_BETA1, _BETA2, _EPS = 0.9, 0.999, 1e-8


def init_params(sizes, rng):
    """Glorot-uniform weights, zero biases; ``sizes`` includes input and output widths."""
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def forward(weights, biases, x):
    """Return the output pre-activation and the list of layer activations."""
    acts = [x]
    h = x
    last = len(weights) - 1
    for k, (w, b) in enumerate(zip(weights, biases)):
        h = h @ w + b
        if k < last:
            h = np.maximum(h, 0.0)
        acts.append(h)
    return h[:, 0], acts


def loss_and_grad(weights, biases, x, y, family="gaussian", alpha=0.0):
    """Penalized mean loss on a batch and its gradient with respect to every parameter."""
    n = x.shape[0]
    out, acts = forward(weights, biases, x)
    if family == "gaussian":
        resid = out - y
        loss = 0.5 * np.mean(resid * resid)
        delta = (resid / n)[:, None]
    else:
        loss = float(np.mean(np.logaddexp(0.0, out) - y * out))
        delta = ((_sigmoid(out) - y) / n)[:, None]
    loss += 0.5 * alpha * sum(float(np.sum(w * w)) for w in weights) / n

    gw = [None] * len(weights)
    gb = [None] * len(weights)
    for k in range(len(weights) - 1, -1, -1):
        gw[k] = acts[k].T @ delta + alpha * weights[k] / n
        gb[k] = delta.sum(axis=0)
        if k > 0:
            delta = (delta @ weights[k].T) * (acts[k] > 0)
    return loss, gw, gb


def fit_mlp(x, y, settings=None, family="gaussian", seed=0):
    s = settings or MlpSettings()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    n, p = x.shape
    if n < 2:
        raise TooFewRows("the network needs at least two rows")
    rng = np.random.default_rng(s.seed if s.seed is not None else seed)

    x_mean = x.mean(axis=0)
    x_scale = x.std(axis=0)
    x_scale[x_scale == 0] = 1.0
    xs = (x - x_mean) / x_scale
    if family == "gaussian":
        y_mean = float(y.mean())
        y_scale = float(y.std()) or 1.0
    else:
        y_mean, y_scale = 0.0, 1.0
    ys = (y - y_mean) / y_scale

    weights, biases = init_params([p, *map(int, s.hidden), 1], rng)
    mw = [np.zeros_like(w) for w in weights]
    vw = [np.zeros_like(w) for w in weights]
    mb = [np.zeros_like(b) for b in biases]
    vb = [np.zeros_like(b) for b in biases]

    lr = s.learning_rate_init
    best = np.inf
    stall = 0
    step = 0
    epochs = 0
    history = []
    bs = min(s.batch_size, n)
    for epoch in range(s.max_iter):
        perm = rng.permutation(n)
        total = 0.0
        for start in range(0, n, bs):
            idx = perm[start:start + bs]
            loss, gw, gb = loss_and_grad(weights, biases, xs[idx], ys[idx], family, s.alpha)
            if not np.isfinite(loss):
                raise NonFiniteLoss(
                    f"loss became {loss} at epoch {epoch}, step {step}, learning rate {lr:g}; "
                    f"last finite epoch loss {history[-1] if history else 'n/a'}")
            step += 1
            c1 = 1.0 - _BETA1 ** step
            c2 = 1.0 - _BETA2 ** step
            for params, grads, m, v in ((weights, gw, mw, vw), (biases, gb, mb, vb)):
                for k in range(len(params)):
                    m[k] = _BETA1 * m[k] + (1.0 - _BETA1) * grads[k]
                    v[k] = _BETA2 * v[k] + (1.0 - _BETA2) * grads[k] ** 2
                    params[k] -= lr * (m[k] / c1) / (np.sqrt(v[k] / c2) + _EPS)
            total += loss * idx.size
        epoch_loss = total / n
        history.append(epoch_loss)
        epochs = epoch + 1
        if epoch_loss < best - s.tol:
            best = epoch_loss
            stall = 0
        else:
            stall += 1
        if stall >= s.patience:
            if s.learning_rate == "constant":
                break
            lr *= 0.5
            stall = 0
            if lr < s.min_learning_rate:
                break

    return RegressionFit(
        kind="mlp",
        family=family,
        p=p,
        params={"weights": weights, "biases": biases, "x_mean": x_mean, "x_scale": x_scale,
                "y_mean": y_mean, "y_scale": y_scale},
        info={"epochs": epochs, "final_loss": history[-1] if history else None,
              "final_learning_rate": lr},
    )


def mlp_predict(fit, x):
    prm = fit.params
    out, _ = forward(prm["weights"], prm["biases"], (x - prm["x_mean"]) / prm["x_scale"])
    if fit.family == "binomial":
        return _sigmoid(out)
    return prm["y_mean"] + prm["y_scale"] * out
