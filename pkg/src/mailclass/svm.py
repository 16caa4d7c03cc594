"""Soft-margin SVM: kernel functions, a primal linear trainer, and
one-vs-rest multiclass composition.

Only the linear kernel is trainable; the polynomial, RBF and sigmoid
kernels are provided as evaluable functions. Text problems have far more
features than instances, where the linear kernel is the standard choice.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import IO, Sequence, Union

import numpy as np

from . import accel
from .errors import DataError
from .features import DocumentVector

SPARSE_DUMP_THRESHOLD = 1024  # dump w sparsely above this dimension


class KernelKind(enum.Enum):
    LINEAR = "linear"
    POLYNOMIAL = "polynomial"
    RBF = "rbf"
    SIGMOID = "sigmoid"


@dataclass(frozen=True)
class KernelParams:
    gamma: float = 1.0
    r: float = 0.0
    d: int = 3

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("polynomial degree d must be a positive integer")


@dataclass(frozen=True)
class TrainConfig:
    c: float = 1.0
    tolerance: float = 1e-4
    max_epochs: int = 200
    seed: int = 42

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("penalty parameter c must be > 0")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


@dataclass
class BinarySvmModel:
    w: np.ndarray  # dense weights over vocabulary indices
    b: float
    objective: float  # achieved primal objective of the returned iterate
    converged: bool
    epochs_run: int


@dataclass
class OvrSvmModel:
    classes: tuple[str, ...]  # lexicographic
    models: tuple[BinarySvmModel, ...]  # one per class, same order


def kernel_eval(kind: KernelKind, params: KernelParams, x, y) -> float:
    """Evaluate one of the four standard kernels on dense vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if kind is KernelKind.LINEAR:
        return float(x @ y)
    if kind is KernelKind.POLYNOMIAL:
        if params.gamma <= 0:
            raise ValueError("polynomial kernel requires gamma > 0")
        return float((params.gamma * (x @ y) + params.r) ** params.d)
    if kind is KernelKind.RBF:
        if params.gamma <= 0:
            raise ValueError("RBF kernel requires gamma > 0")
        diff = x - y
        return float(np.exp(-params.gamma * (diff @ diff)))
    if kind is KernelKind.SIGMOID:
        return float(np.tanh(params.gamma * (x @ y) + params.r))
    raise ValueError(f"unknown kernel kind: {kind}")


def _stack_csr(xs: Sequence[DocumentVector]) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    dim = xs[0].dim
    for x in xs:
        if x.dim != dim:
            raise ValueError(f"dimension mismatch among documents: {x.dim} vs {dim}")
    indptr = np.zeros(len(xs) + 1, dtype=np.int64)
    for i, x in enumerate(xs):
        indptr[i + 1] = indptr[i] + len(x.indices)
    indices = np.concatenate([x.indices for x in xs]) if len(xs) else np.zeros(0, np.int64)
    values = np.concatenate([x.values for x in xs]) if len(xs) else np.zeros(0, np.float64)
    return indptr, indices.astype(np.int64), values.astype(np.float64), dim


def train_binary_linear_svm(
    xs: Sequence[DocumentVector],
    ys: Sequence[int],
    config: TrainConfig,
) -> BinarySvmModel:
    """Train a linear soft-margin SVM on +/-1 labels by deterministic
    per-example subgradient descent on the primal objective
    0.5*||w||^2 + c * sum_i max(0, 1 - y_i*(w.x_i + b)).

    Step size at global step t is 1/(lam*(t + t0)) with lam = 1/(c*n)
    and t0 = ceil(c*n); the shift bounds the first steps near 1, which
    the unshifted 1/(lam*t) schedule needs to recover from for the rest
    of the run. Examples are visited in a fixed seed-derived order each
    epoch. Training stops when the epoch-end objective changes by less
    than tolerance relative, or after max_epochs (the model then carries
    converged=False). The returned iterate is the best epoch-end one.
    """
    if len(xs) != len(ys):
        raise ValueError(f"got {len(xs)} documents but {len(ys)} labels")
    if len(xs) < 2:
        raise DataError("need at least 2 training examples")
    y = np.asarray(ys, dtype=np.float64)
    if not (np.any(y == 1.0) and np.any(y == -1.0)):
        raise DataError("both labels (+1 and -1) must be present")
    if np.any((y != 1.0) & (y != -1.0)):
        raise ValueError("labels must be +1 or -1")

    indptr, indices, values, dim = _stack_csr(xs)
    n = len(xs)
    lam = 1.0 / (config.c * n)
    t0 = int(np.ceil(config.c * n))
    order = np.random.default_rng(config.seed).permutation(n).astype(np.int64)
    w, b, obj, epochs_run, converged = accel.svm_subgradient_loop(
        indptr, indices, values, y, order, dim, lam, t0,
        config.c, config.tolerance, config.max_epochs,
    )
    return BinarySvmModel(w=w, b=float(b), objective=float(obj),
                          converged=bool(converged), epochs_run=int(epochs_run))


def primal_objective(model: BinarySvmModel, xs: Sequence[DocumentVector],
                     ys: Sequence[int], c: float) -> float:
    """Recompute 0.5*||w||^2 + c * total hinge loss for a model."""
    total = 0.5 * float(model.w @ model.w)
    for x, y in zip(xs, ys):
        margin = y * (float(model.w[x.indices] @ x.values) + model.b)
        total += c * max(0.0, 1.0 - margin)
    return total


def decision_value(model: BinarySvmModel, x: Union[DocumentVector, np.ndarray, Sequence[float]]) -> float:
    """w.x + b for a sparse document vector or a dense vector."""
    if isinstance(x, DocumentVector):
        if x.dim != len(model.w):
            raise ValueError(f"dimension mismatch: {x.dim} vs {len(model.w)}")
        return float(model.w[x.indices] @ x.values + model.b)
    dense = np.asarray(x, dtype=np.float64)
    if dense.shape != model.w.shape:
        raise ValueError(f"dimension mismatch: {dense.shape} vs {model.w.shape}")
    return float(model.w @ dense + model.b)


def train_ovr(
    examples: Sequence[tuple[DocumentVector, str]],
    config: TrainConfig,
) -> OvrSvmModel:
    """Train one binary model per class (that class vs. the rest),
    classes in lexicographic order."""
    classes = tuple(sorted({cls for _, cls in examples}))
    if len(classes) < 2:
        raise DataError(f"one-vs-rest needs at least 2 classes, got {len(classes)}")
    xs = [x for x, _ in examples]
    models = []
    for cls in classes:
        ys = [1 if c == cls else -1 for _, c in examples]
        models.append(train_binary_linear_svm(xs, ys, config))
    return OvrSvmModel(classes=classes, models=tuple(models))


def predict_ovr(model: OvrSvmModel, x: DocumentVector) -> str:
    """Class with the largest decision value; ties go to the lowest
    class index."""
    values = [decision_value(m, x) for m in model.models]
    return model.classes[int(np.argmax(values))]


# -- model dump --

def dump_ovr_model(model: OvrSvmModel, dest: Union[str, IO[str]]) -> None:
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8") as fh:
            dump_ovr_model(model, fh)
        return
    payload = {"classes": list(model.classes), "models": []}
    for m in model.models:
        entry: dict = {
            "b": m.b,
            "objective": m.objective,
            "converged": m.converged,
            "epochs_run": m.epochs_run,
            "dim": int(len(m.w)),
        }
        if len(m.w) > SPARSE_DUMP_THRESHOLD:
            nz = np.flatnonzero(m.w)
            entry["w_sparse"] = {str(int(i)): float(m.w[i]) for i in nz}
        else:
            entry["w"] = [float(v) for v in m.w]
        payload["models"].append(entry)
    json.dump(payload, dest, sort_keys=True)
    dest.write("\n")


def load_ovr_model(source: Union[str, IO[str]]) -> OvrSvmModel:
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_ovr_model(fh)
    payload = json.load(source)
    models = []
    for entry in payload["models"]:
        dim = entry["dim"]
        if "w" in entry:
            w = np.array(entry["w"], dtype=np.float64)
        else:
            w = np.zeros(dim, dtype=np.float64)
            for i, v in entry["w_sparse"].items():
                w[int(i)] = v
        models.append(BinarySvmModel(w=w, b=entry["b"], objective=entry["objective"],
                                     converged=entry["converged"],
                                     epochs_run=entry["epochs_run"]))
    return OvrSvmModel(classes=tuple(payload["classes"]), models=tuple(models))
