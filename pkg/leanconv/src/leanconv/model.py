"""The convolutional classifier: embedding, two 1-D convolutions around a
max-pool, global max-pool, softmax head. Trained for a fixed five epochs
with Adam on sparse categorical cross-entropy."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .tokenizer import Tokenizer

LABELS = ("left", "center", "right")
LABEL_TO_ID = {label: i for i, label in enumerate(LABELS)}


@dataclass(frozen=True)
class ConvSpec:
    vocab_size: int = 100_000
    embed_dim: int = 32
    filters: int = 32
    kernel: int = 7
    pool: int = 5
    classes: int = 3
    epochs: int = 5


def expected_param_count(spec: ConvSpec = ConvSpec()) -> int:
    """Closed-form parameter total for the fixed layer stack."""
    embedding = spec.vocab_size * spec.embed_dim
    conv1 = (spec.kernel * spec.embed_dim + 1) * spec.filters
    conv2 = (spec.kernel * spec.filters + 1) * spec.filters
    dense = (spec.filters + 1) * spec.classes
    return embedding + conv1 + conv2 + dense


def build_model(spec: ConvSpec = ConvSpec(), sequence_length: int | None = None):
    from tensorflow import keras
    from tensorflow.keras import layers

    model = keras.Sequential([
        keras.Input(shape=(sequence_length,), dtype="int32"),
        layers.Embedding(spec.vocab_size, spec.embed_dim),
        layers.Conv1D(spec.filters, spec.kernel, activation="relu"),
        layers.MaxPooling1D(spec.pool),
        layers.Conv1D(spec.filters, spec.kernel, activation="relu"),
        layers.GlobalMaxPooling1D(),
        layers.Dense(spec.classes, activation="softmax"),
    ])
    model.compile(loss="sparse_categorical_crossentropy", optimizer="adam",
                  metrics=["accuracy"])
    return model


@dataclass
class EpochPoint:
    epoch: int
    train_accuracy: float
    val_accuracy: float


@dataclass
class ConvClassifier:
    model: object
    tokenizer: Tokenizer
    spec: ConvSpec = field(default_factory=ConvSpec)

    def predict_proba(self, texts: list[str]) -> np.ndarray:
        x = self.tokenizer.encode_batch(texts)
        return self.predict_ids(x)

    def predict_ids(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.model.predict(x, verbose=0))

    def predict_labels(self, texts: list[str]) -> list[str]:
        probs = self.predict_proba(texts)
        return [LABELS[i] for i in probs.argmax(axis=1)]

    def save(self, out_dir: str | Path, meta: dict | None = None) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        self.model.save(out_dir / "model.keras")
        (out_dir / "tokenizer.json").write_text(self.tokenizer.to_json(), encoding="utf-8")
        doc = {"labels": list(LABELS), "spec": self.spec.__dict__}
        if meta:
            doc.update(meta)
        (out_dir / "meta.json").write_text(json.dumps(doc, indent=1), encoding="utf-8")

    @classmethod
    def load(cls, out_dir: str | Path) -> "ConvClassifier":
        from tensorflow import keras

        out_dir = Path(out_dir)
        model = keras.models.load_model(out_dir / "model.keras")
        tokenizer = Tokenizer.from_json((out_dir / "tokenizer.json").read_text(encoding="utf-8"))
        meta = json.loads((out_dir / "meta.json").read_text(encoding="utf-8"))
        return cls(model=model, tokenizer=tokenizer, spec=ConvSpec(**meta["spec"]))


def train_conv(texts: list[str], labels: list[str], val_fraction: float = 0.1,
               seed: int = 0, spec: ConvSpec = ConvSpec(),
               ) -> tuple[ConvClassifier, list[EpochPoint]]:
    """Fit tokenizer and model; returns the classifier plus the per-epoch curve."""
    import tensorflow as tf

    if len(texts) != len(labels):
        raise ValueError(f"{len(texts)} texts vs {len(labels)} labels")
    bad = sorted({l for l in labels} - set(LABELS))
    if bad:
        raise ValueError(f"unknown class labels: {bad}")

    tf.keras.utils.set_random_seed(seed)
    order = list(range(len(texts)))
    random.Random(seed).shuffle(order)
    n_val = max(1, int(round(val_fraction * len(order)))) if len(order) > 1 else 0
    val_idx, train_idx = order[:n_val], order[n_val:]
    if not train_idx:
        raise ValueError("training set is empty after the validation split")

    tokenizer = Tokenizer.fit([texts[i] for i in train_idx], vocab_limit=spec.vocab_size)
    x_train = tokenizer.encode_batch([texts[i] for i in train_idx])
    y_train = np.array([LABEL_TO_ID[labels[i]] for i in train_idx], dtype=np.int32)
    x_val = tokenizer.encode_batch([texts[i] for i in val_idx]) if val_idx else None
    y_val = np.array([LABEL_TO_ID[labels[i]] for i in val_idx], dtype=np.int32) if val_idx else None

    model = build_model(spec, sequence_length=tokenizer.sequence_length)
    history = model.fit(
        x_train, y_train,
        validation_data=(x_val, y_val) if val_idx else None,
        epochs=spec.epochs, batch_size=32, verbose=0, shuffle=True,
    )
    curve = [
        EpochPoint(
            epoch=i + 1,
            train_accuracy=float(history.history["accuracy"][i]),
            val_accuracy=float(history.history.get("val_accuracy", [float("nan")] * spec.epochs)[i]),
        )
        for i in range(spec.epochs)
    ]
    return ConvClassifier(model=model, tokenizer=tokenizer, spec=spec), curve


def curve_csv(curve: list[EpochPoint]) -> str:
    lines = ["epoch,train_accuracy,val_accuracy"]
    for p in curve:
        lines.append(f"{p.epoch},{p.train_accuracy:.6f},{p.val_accuracy:.6f}")
    return "\n".join(lines) + "\n"


def save_curve_figure(curve: list[EpochPoint], path: str | Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    epochs = [p.epoch for p in curve]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(epochs, [p.train_accuracy for p in curve], marker="o", label="training")
    ax.plot(epochs, [p.val_accuracy for p in curve], marker="s", label="validation")
    ax.set_xlabel("epoch")
    ax.set_ylabel("accuracy")
    ax.set_xticks(epochs)
    ax.set_ylim(0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
