"""Desk-scale low-rank adaptation: adapted linear maps with exact gradient
formulas, a toy pick-prediction model trained on frozen base weights, and a
rank ablation driver.

The adapted map is y = W x + s * A (B x) with scale s = alpha / rank by
default (a flag switches to the unscaled literal W + AB). Only A and B ever
receive updates; W stays frozen, byte-identical across training.
"""

from __future__ import annotations

import hashlib
import json
import struct
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .agents import FrequencyTable, frequency_agent
from .cards import Card, CardSet, build_card_set
from .datalog import PickEvent
from .draft import color_profile
from .errors import (
    DimensionMismatchError,
    DivergenceError,
    EmptyDatasetError,
    RankOutOfRangeError,
)

CHECKPOINT_MAGIC = b"DKTM"
CHECKPOINT_VERSION = 1


@dataclass
class LoraLayer:
    """Frozen base matrix W (d x k) with trainable low-rank factors
    A (d x r) and B (r x k).

    At initialization B is zero, so the effective weight equals W exactly.
    W is marked read-only; updates that touch it raise.
    """

    W: np.ndarray
    A: np.ndarray
    B: np.ndarray
    rank: int
    alpha: float
    use_scaling: bool = True

    @property
    def scale(self) -> float:
        return self.alpha / self.rank if self.use_scaling else 1.0

    @property
    def shape(self) -> tuple[int, int]:
        return self.W.shape


def lora_init(
    W: np.ndarray,
    rank: int,
    alpha: float,
    seed: int,
    use_scaling: bool = True,
) -> LoraLayer:
    """Attach fresh adapters to a base matrix: A ~ N(0, 1/d), B = 0.

    The base matrix's dtype carries through to the adapters (float64 bases
    give float64 math).
    """
    W = np.asarray(W)
    d, k = W.shape
    if not 1 <= rank <= min(d, k):
        raise RankOutOfRangeError(rank, min(d, k))
    rng = np.random.default_rng(seed)
    frozen = np.array(W, copy=True)
    frozen.setflags(write=False)
    A = rng.normal(0.0, 1.0 / np.sqrt(d), size=(d, rank)).astype(W.dtype)
    B = np.zeros((rank, k), dtype=W.dtype)
    return LoraLayer(W=frozen, A=A, B=B, rank=rank, alpha=alpha, use_scaling=use_scaling)


def lora_forward(layer: LoraLayer, x: np.ndarray) -> np.ndarray:
    """y = W x + s * A (B x), computed without materializing A B."""
    x = np.asarray(x)
    d, k = layer.W.shape
    if x.shape != (k,):
        raise DimensionMismatchError(f"x has shape {x.shape}, expected ({k},)")
    return layer.W @ x + layer.scale * (layer.A @ (layer.B @ x))


def lora_merge(layer: LoraLayer) -> np.ndarray:
    """Materialize the effective weight W + s * A B."""
    return layer.W + layer.scale * (layer.A @ layer.B)


def param_counts(d: int, k: int, r: int) -> tuple[int, int, float]:
    """(full fine-tune params, adapter params, reduction ratio)."""
    full = d * k
    lora = r * (d + k)
    return full, lora, full / lora


def lora_backward(
    layer: LoraLayer, x: np.ndarray, upstream: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Gradients of an upstream-weighted output with respect to A and B.

    grad_A = s * upstream (B x)^T, grad_B = s * (A^T upstream) x^T.
    W receives no gradient.
    """
    x = np.asarray(x)
    upstream = np.asarray(upstream)
    d, k = layer.W.shape
    if x.shape != (k,):
        raise DimensionMismatchError(f"x has shape {x.shape}, expected ({k},)")
    if upstream.shape != (d,):
        raise DimensionMismatchError(
            f"upstream has shape {upstream.shape}, expected ({d},)"
        )
    s = layer.scale
    grad_A = s * np.outer(upstream, layer.B @ x)
    grad_B = s * np.outer(layer.A.T @ upstream, x)
    return grad_A, grad_B


# --- toy pick model -----------------------------------------------------------


@dataclass(frozen=True)
class TrainConfig:
    rank: int = 8
    alpha: float = 16.0
    dropout_rate: float = 0.05
    learning_rate: float = 0.5
    batch_size: int = 8
    grad_accum_steps: int = 4
    max_steps: int = 1000
    seed: int = 0
    eval_interval: int = 100

    @property
    def effective_batch(self) -> int:
        return self.batch_size * self.grad_accum_steps


def _name_seed(embed_seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{embed_seed}:{name}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def card_embedding(name: str, embed_seed: int, dim: int) -> np.ndarray:
    """Deterministic frozen feature vector per card name; identical across
    processes and runs."""
    rng = np.random.default_rng(_name_seed(embed_seed, name))
    return (rng.standard_normal(dim) / np.sqrt(dim)).astype(np.float32)


@dataclass
class ToyPickModel:
    """Pick scorer: candidate and pool features -> hidden relu layer
    (LoRA-adapted) -> frozen linear readout -> softmax over the pack.

    The embedding table is implicit (deterministic per name from
    embed_seed), so the model extends to unseen card sets.
    """

    layer: LoraLayer
    readout: np.ndarray
    embed_seed: int
    embed_dim: int
    _embed_cache: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def feature_dim(self) -> int:
        return 5 + 2 * self.embed_dim

    def _embed(self, name: str) -> np.ndarray:
        vec = self._embed_cache.get(name)
        if vec is None:
            vec = card_embedding(name, self.embed_seed, self.embed_dim)
            self._embed_cache[name] = vec
        return vec

    def featurize(
        self,
        pool: Sequence[str],
        candidates: Sequence[str],
        card_set: CardSet,
    ) -> np.ndarray:
        """Feature matrix, one row per candidate: normalized pool color
        counts, mean pool embedding, candidate embedding."""
        profile = color_profile(pool, card_set)
        denom = max(1, len(pool))
        pool_colors = np.array(
            [profile.counts[c] / denom for c in "WUBRG"], dtype=np.float32
        )
        if pool:
            pool_embed = np.mean([self._embed(n) for n in pool], axis=0).astype(
                np.float32
            )
        else:
            pool_embed = np.zeros(self.embed_dim, dtype=np.float32)
        shared = np.concatenate([pool_colors, pool_embed])
        rows = [
            np.concatenate([shared, self._embed(name)]) for name in candidates
        ]
        return np.stack(rows).astype(np.float32)

    def scores(
        self,
        pool: Sequence[str],
        pack: Sequence[str],
        card_set: CardSet,
    ) -> tuple[list[str], np.ndarray]:
        """Candidate names (sorted, distinct) and their raw scores."""
        names = sorted(set(pack))
        X = self.featurize(pool, names, card_set)
        pre = X @ self.layer.W.T + self.layer.scale * (
            (X @ self.layer.B.T) @ self.layer.A.T
        )
        hidden = np.maximum(pre, 0.0)
        return names, hidden @ self.readout

    def probabilities(
        self, pool: Sequence[str], pack: Sequence[str], card_set: CardSet
    ) -> tuple[list[str], np.ndarray]:
        names, raw = self.scores(pool, pack, card_set)
        shifted = raw.astype(np.float64) - float(raw.max())
        exp = np.exp(shifted)
        return names, exp / exp.sum()

    def predict(self, event: PickEvent, card_set: CardSet) -> str:
        names, raw = self.scores(event.pool, event.pack, card_set)
        return names[int(np.argmax(raw))]


def init_toy_model(
    embed_dim: int = 16,
    hidden_dim: int = 32,
    rank: int = 8,
    alpha: float = 16.0,
    seed: int = 0,
) -> ToyPickModel:
    feature_dim = 5 + 2 * embed_dim
    rng = np.random.default_rng(seed)
    W = rng.normal(0.0, 1.0 / np.sqrt(feature_dim), size=(hidden_dim, feature_dim))
    readout = (
        rng.standard_normal(hidden_dim) / np.sqrt(hidden_dim)
    ).astype(np.float32)
    layer = lora_init(W.astype(np.float32), rank, alpha, seed=seed + 1)
    return ToyPickModel(
        layer=layer, readout=readout, embed_seed=seed, embed_dim=embed_dim
    )


def model_accuracy(
    model: ToyPickModel, events: Sequence[PickEvent], card_set: CardSet
) -> float:
    if not events:
        raise EmptyDatasetError("evaluation")
    hits = sum(model.predict(e, card_set) == e.chosen for e in events)
    return hits / len(events)


def _event_grads(
    model: ToyPickModel,
    event: PickEvent,
    card_set: CardSet,
    rng: np.random.Generator | None,
    dropout_rate: float,
    train_base: bool,
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None, float]:
    """Cross-entropy gradients for one event. Returns (grad_A, grad_B,
    grad_W or None, loss)."""
    layer = model.layer
    names = sorted(set(event.pack))
    target = names.index(event.chosen)
    X = model.featurize(event.pool, names, card_set)

    mid = X @ layer.B.T                      # (n, r)
    path = mid @ layer.A.T                   # (n, d)
    if rng is not None and dropout_rate > 0.0:
        keep = 1.0 - dropout_rate
        mask = (rng.random(path.shape) < keep).astype(np.float32) / keep
    else:
        mask = np.ones_like(path)
    pre = X @ layer.W.T + layer.scale * (path * mask)
    hidden = np.maximum(pre, 0.0)
    raw = hidden @ model.readout
    shifted = raw - raw.max()
    exp = np.exp(shifted)
    probs = exp / exp.sum()
    loss = -float(np.log(max(probs[target], 1e-12)))

    dscores = probs.copy()
    dscores[target] -= 1.0
    dhidden = dscores[:, None] * model.readout[None, :]
    dpre = dhidden * (pre > 0.0)
    dpath = layer.scale * (dpre * mask)
    grad_A = dpath.T @ mid                   # (d, r)
    grad_B = (dpath @ layer.A).T @ X         # (r, k)
    grad_W = dpre.T @ X if train_base else None
    return grad_A, grad_B, grad_W, loss


def train_base_model(
    model: ToyPickModel,
    events: Sequence[PickEvent],
    card_set: CardSet,
    steps: int = 300,
    learning_rate: float = 1.0,
    batch_size: int = 32,
    seed: int = 0,
) -> ToyPickModel:
    """Full-gradient pretraining of the base weights W (adapters untouched,
    readout frozen). Returns a model with the new W installed."""
    if not events:
        raise EmptyDatasetError("base training")
    rng = np.random.default_rng(seed)
    W = np.array(model.layer.W, copy=True)
    work = replace_layer(model, LoraLayer(
        W=W, A=model.layer.A, B=model.layer.B,
        rank=model.layer.rank, alpha=model.layer.alpha,
        use_scaling=model.layer.use_scaling,
    ))
    order = rng.permutation(len(events))
    cursor = 0
    for step in range(steps):
        grad = np.zeros_like(W)
        total = 0.0
        for _ in range(batch_size):
            if cursor == len(order):
                order = rng.permutation(len(events))
                cursor = 0
            event = events[order[cursor]]
            cursor += 1
            _, _, gW, loss = _event_grads(
                work, event, card_set, rng=None, dropout_rate=0.0, train_base=True
            )
            grad += gW
            total += loss
        if not np.isfinite(total):
            raise DivergenceError(step)
        W -= learning_rate * grad / batch_size
    frozen = W.astype(np.float32)
    frozen.setflags(write=False)
    return replace_layer(work, LoraLayer(
        W=frozen, A=work.layer.A, B=work.layer.B,
        rank=work.layer.rank, alpha=work.layer.alpha,
        use_scaling=work.layer.use_scaling,
    ))


def replace_layer(model: ToyPickModel, layer: LoraLayer) -> ToyPickModel:
    return ToyPickModel(
        layer=layer,
        readout=model.readout,
        embed_seed=model.embed_seed,
        embed_dim=model.embed_dim,
    )


def train_toy_model(
    train_events: Sequence[PickEvent],
    dev_events: Sequence[PickEvent],
    config: TrainConfig,
    base: ToyPickModel,
    card_set: CardSet,
) -> tuple[ToyPickModel, list[tuple[int, float]]]:
    """Adapt the base model's scorer to the training events through its
    low-rank factors only: plain mini-batch gradient descent with gradient
    accumulation and dropout on the adapter path.

    Returns the adapted model and a (step, dev accuracy) history; entry 0 is
    the frozen base model's dev accuracy. Deterministic per config seed.
    """
    if not train_events:
        raise EmptyDatasetError("training")
    if not dev_events:
        raise EmptyDatasetError("dev")
    layer = lora_init(
        base.layer.W,
        config.rank,
        config.alpha,
        seed=config.seed,
        use_scaling=base.layer.use_scaling,
    )
    model = replace_layer(base, layer)
    rng = np.random.default_rng(config.seed)
    history: list[tuple[int, float]] = [
        (0, model_accuracy(model, dev_events, card_set))
    ]
    order = rng.permutation(len(train_events))
    cursor = 0
    for step in range(1, config.max_steps + 1):
        grad_A = np.zeros_like(layer.A)
        grad_B = np.zeros_like(layer.B)
        total = 0.0
        for _ in range(config.grad_accum_steps):
            for _ in range(config.batch_size):
                if cursor == len(order):
                    order = rng.permutation(len(train_events))
                    cursor = 0
                event = train_events[order[cursor]]
                cursor += 1
                gA, gB, _, loss = _event_grads(
                    model,
                    event,
                    card_set,
                    rng=rng,
                    dropout_rate=config.dropout_rate,
                    train_base=False,
                )
                grad_A += gA
                grad_B += gB
                total += loss
        if not np.isfinite(total):
            raise DivergenceError(step)
        n = config.effective_batch
        layer.A -= config.learning_rate * grad_A / n
        layer.B -= config.learning_rate * grad_B / n
        if step % config.eval_interval == 0 or step == config.max_steps:
            history.append((step, model_accuracy(model, dev_events, card_set)))
    return model, history


# --- synthetic learnable task --------------------------------------------------


def synthetic_card_set(set_code: str, n_cards: int, seed: int) -> CardSet:
    """Deterministic throwaway card pool for toy-model experiments."""
    rng = np.random.default_rng(seed)
    rarities = ["common"] * 6 + ["uncommon"] * 3 + ["rare", "mythic"]
    cards = []
    for i in range(n_cards):
        color = "WUBRG"[int(rng.integers(0, 5))]
        cards.append(
            Card(
                name=f"{set_code} Specimen {i:03d}",
                colors=frozenset({color}),
                mana_cost=f"{{{int(rng.integers(1, 5))}}}{{{color}}}",
                type_line="Creature",
                rarity=rarities[int(rng.integers(0, len(rarities)))],
                rules_text="",
                set_code=set_code,
            )
        )
    return build_card_set(cards, set_code)


def planted_frequency_table(card_set: CardSet, seed: int) -> FrequencyTable:
    """Distinct per-card pick rates in a random order; the argmax labeling
    they induce is a pure per-name ordering, exactly learnable in principle."""
    rng = np.random.default_rng(seed)
    names = sorted(card_set.names())
    picked = rng.permutation(len(names))
    return FrequencyTable(
        pick_rate={
            name: (10 + int(990 * picked[i] / max(1, len(names) - 1)), 1000)
            for i, name in enumerate(names)
        }
    )


def synthetic_pick_events(
    card_set: CardSet,
    n_events: int,
    seed: int,
    pack_size: int = 8,
    max_pool: int = 20,
    table: FrequencyTable | None = None,
) -> tuple[list[PickEvent], FrequencyTable]:
    """Random packs and pools over the set, labeled by a planted frequency
    table's argmax. Train and dev splits of one task must share the table
    (build it once with planted_frequency_table and pass it to both calls);
    with table=None a fresh one is planted from this call's seed."""
    rng = np.random.default_rng(seed)
    names = sorted(card_set.names())
    if table is None:
        table = planted_frequency_table(card_set, seed)
    events = []
    for i in range(n_events):
        pack = [names[j] for j in rng.choice(len(names), size=pack_size, replace=False)]
        pool_size = int(rng.integers(0, max_pool + 1))
        pool = [names[j] for j in rng.choice(len(names), size=pool_size, replace=True)]
        stub = PickEvent(
            draft_id=f"syn{seed}-{i}",
            pack_number=0,
            pick_number=0,
            pool=tuple(sorted(pool)),
            pack=tuple(sorted(pack)),
            chosen=pack[0],
        )
        chosen = frequency_agent(stub, table).chosen
        events.append(
            PickEvent(
                draft_id=stub.draft_id,
                pack_number=stub.pack_number,
                pick_number=stub.pick_number,
                pool=stub.pool,
                pack=stub.pack,
                chosen=chosen,
            )
        )
    return events, table


# --- rank ablation --------------------------------------------------------------


@dataclass(frozen=True)
class AblationRow:
    rank: int
    seed: int
    final_dev_accuracy: float
    steps: int


@dataclass
class AblationResult:
    rows: list[AblationRow]

    def summary(self) -> dict[int, tuple[float, float]]:
        """rank -> (mean, std) of final dev accuracy across seeds."""
        by_rank: dict[int, list[float]] = {}
        for row in self.rows:
            by_rank.setdefault(row.rank, []).append(row.final_dev_accuracy)
        return {
            rank: (float(np.mean(vals)), float(np.std(vals)))
            for rank, vals in sorted(by_rank.items())
        }

    def pooled_std(self) -> float:
        stds = [std for _, std in self.summary().values()]
        return float(np.sqrt(np.mean(np.square(stds))))

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as out:
            out.write("rank,seed,final_dev_accuracy,steps\n")
            for row in self.rows:
                out.write(
                    f"{row.rank},{row.seed},{row.final_dev_accuracy:.6f},{row.steps}\n"
                )


def _ablation_run(args) -> AblationRow:
    train_events, dev_events, config, base, card_set, rank, seed = args
    run_config = replace(config, rank=rank, seed=seed)
    _, history = train_toy_model(train_events, dev_events, run_config, base, card_set)
    return AblationRow(
        rank=rank,
        seed=seed,
        final_dev_accuracy=history[-1][1],
        steps=run_config.max_steps,
    )


def rank_ablation(
    train_events: Sequence[PickEvent],
    dev_events: Sequence[PickEvent],
    ranks: Sequence[int],
    seeds: Sequence[int],
    config: TrainConfig,
    base: ToyPickModel,
    card_set: CardSet,
    workers: int = 1,
) -> AblationResult:
    """Train one adapter per (rank, seed) with everything else fixed.

    Runs are independent; workers > 1 fans them out to separate processes.
    """
    if not ranks:
        raise EmptyDatasetError("ranks")
    jobs = [
        (list(train_events), list(dev_events), config, base, card_set, rank, seed)
        for rank in ranks
        for seed in seeds
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_ablation_run, jobs))
    else:
        rows = [_ablation_run(job) for job in jobs]
    return AblationResult(rows=rows)


# --- checkpoint container --------------------------------------------------------


def save_model(model: ToyPickModel, path: str | Path) -> None:
    """Binary container: magic, version byte, JSON shape header, then raw
    little-endian float32 tensor data."""
    tensors = [
        ("W", np.ascontiguousarray(model.layer.W, dtype="<f4")),
        ("A", np.ascontiguousarray(model.layer.A, dtype="<f4")),
        ("B", np.ascontiguousarray(model.layer.B, dtype="<f4")),
        ("readout", np.ascontiguousarray(model.readout, dtype="<f4")),
    ]
    header = {
        "embed_seed": model.embed_seed,
        "embed_dim": model.embed_dim,
        "rank": model.layer.rank,
        "alpha": model.layer.alpha,
        "use_scaling": model.layer.use_scaling,
        "tensors": [{"name": n, "shape": list(t.shape)} for n, t in tensors],
    }
    blob = json.dumps(header, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as out:
        out.write(CHECKPOINT_MAGIC)
        out.write(struct.pack("<B", CHECKPOINT_VERSION))
        out.write(struct.pack("<I", len(blob)))
        out.write(blob)
        for _, tensor in tensors:
            out.write(tensor.tobytes())


def load_model(path: str | Path) -> ToyPickModel:
    with open(path, "rb") as handle:
        magic = handle.read(4)
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"not a model checkpoint: bad magic {magic!r}")
        (version,) = struct.unpack("<B", handle.read(1))
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        (header_len,) = struct.unpack("<I", handle.read(4))
        header = json.loads(handle.read(header_len).decode("utf-8"))
        data = {}
        for meta in header["tensors"]:
            shape = tuple(meta["shape"])
            count = int(np.prod(shape)) if shape else 1
            buf = handle.read(4 * count)
            data[meta["name"]] = np.frombuffer(buf, dtype="<f4").reshape(shape).copy()
    W = data["W"]
    W.setflags(write=False)
    layer = LoraLayer(
        W=W,
        A=data["A"],
        B=data["B"],
        rank=int(header["rank"]),
        alpha=float(header["alpha"]),
        use_scaling=bool(header["use_scaling"]),
    )
    return ToyPickModel(
        layer=layer,
        readout=data["readout"],
        embed_seed=int(header["embed_seed"]),
        embed_dim=int(header["embed_dim"]),
    )
