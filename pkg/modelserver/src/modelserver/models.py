"""Toy torch models sized for CPU smoke training.

Each serving adapter exposes a small inference API used by the HTTP layer:
``encode`` (embeddings), ``predict_pair`` (relevance), ``score_labels``
(zero-shot), ``predict_proba`` (multiclass/moods), ``generate`` (summaries).
Checkpoints are ``torch.save`` dicts carrying kind, config, and weights.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn

from .features import bow_vector, id_sequence, tokens

PAD, BOS, EOS, UNK = 0, 1, 2, 3
_SPECIALS = ("<pad>", "<bos>", "<eos>", "<unk>")


class Encoder(nn.Module):
    """Hashed bag-of-words through a linear map, L2-normalized."""

    def __init__(self, dim: int = 256, out_dim: int = 64, seed: int = 0):
        super().__init__()
        torch.manual_seed(seed)
        self.dim = dim
        self.out_dim = out_dim
        self.proj = nn.Linear(dim, out_dim)

    def forward(self, x):
        return F.normalize(self.proj(x), dim=-1)

    def featurize(self, texts: list[str]) -> torch.Tensor:
        return torch.from_numpy(np.stack([bow_vector(t, self.dim) for t in texts]))

    @torch.no_grad()
    def encode(self, texts: list[str]) -> np.ndarray:
        self.eval()
        return self(self.featurize(texts)).numpy()

    def score_labels(self, premise: str, labels: list[str]):
        """Zero-shot scoring: cosine of premise against label hypotheses."""
        hypotheses = [f"this example is {label}" for label in labels]
        vectors = self.encode([premise] + hypotheses)
        sims = vectors[1:] @ vectors[0]
        scores = torch.softmax(torch.from_numpy(sims / 0.1), dim=0).numpy()
        best = int(np.argmax(sims))
        return labels[best], [float(s) for s in scores]

    def config(self) -> dict:
        return {"dim": self.dim, "out_dim": self.out_dim}


class PairClassifier(nn.Module):
    """Relevance head over (question, sentence, interaction) hashed features."""

    def __init__(self, dim: int = 256, hidden: int = 64, seed: int = 0):
        super().__init__()
        torch.manual_seed(seed)
        self.dim = dim
        self.hidden = hidden
        self.net = nn.Sequential(
            nn.Linear(3 * dim, hidden), nn.ReLU(), nn.Linear(hidden, 2)
        )

    def featurize(self, question: str, sentence: str) -> np.ndarray:
        q = bow_vector(question, self.dim)
        s = bow_vector(sentence, self.dim)
        return np.concatenate([q, s, q * s])

    def forward(self, x):
        return self.net(x)

    @torch.no_grad()
    def predict_pair(self, question: str, sentence: str):
        self.eval()
        x = torch.from_numpy(self.featurize(question, sentence)).unsqueeze(0)
        probs = torch.softmax(self(x), dim=-1)[0]
        p_relevant = float(probs[1])
        label = "relevant" if p_relevant >= 0.5 else "irrelevant"
        return label, p_relevant

    def config(self) -> dict:
        return {"dim": self.dim, "hidden": self.hidden}


class TextCNN(nn.Module):
    """1-D convolutional sentence classifier with max-over-time pooling."""

    def __init__(
        self,
        classes: list[str],
        vocab_size: int = 4096,
        emb_dim: int = 32,
        filters: int = 100,
        kernel: int = 5,
        hidden: int = 500,
        dropout: float = 0.2,
        max_len: int = 32,
        seed: int = 0,
    ):
        super().__init__()
        torch.manual_seed(seed)
        self.classes = list(classes)
        self.vocab_size = vocab_size
        self.max_len = max_len
        self._config = {
            "classes": list(classes),
            "vocab_size": vocab_size,
            "emb_dim": emb_dim,
            "filters": filters,
            "kernel": kernel,
            "hidden": hidden,
            "dropout": dropout,
            "max_len": max_len,
        }
        self.embedding = nn.Embedding(vocab_size, emb_dim, padding_idx=0)
        self.conv = nn.Conv1d(emb_dim, filters, kernel, padding=kernel // 2)
        self.fc1 = nn.Linear(filters, hidden)
        self.fc2 = nn.Linear(hidden, len(classes))
        self.dropout = nn.Dropout(dropout)

    def featurize(self, texts: list[str]) -> torch.Tensor:
        return torch.tensor(
            [id_sequence(t, self.vocab_size, self.max_len) for t in texts],
            dtype=torch.long,
        )

    def forward(self, ids):
        emb = self.dropout(self.embedding(ids)).transpose(1, 2)
        pooled = F.relu(self.conv(emb)).max(dim=2).values
        hidden = self.dropout(F.relu(self.fc1(pooled)))
        return self.fc2(hidden)

    @torch.no_grad()
    def predict_proba(self, texts: list[str]) -> np.ndarray:
        self.eval()
        return torch.softmax(self(self.featurize(texts)), dim=-1).numpy()

    def config(self) -> dict:
        return dict(self._config)


class Seq2SeqSummarizer(nn.Module):
    """Word-level GRU encoder-decoder with greedy decoding."""

    def __init__(
        self,
        vocab: dict[str, int],
        emb_dim: int = 64,
        hidden: int = 128,
        max_src_len: int = 128,
        seed: int = 0,
    ):
        super().__init__()
        torch.manual_seed(seed)
        self.vocab = dict(vocab)
        self.itos = [None] * len(self.vocab)
        for word, idx in self.vocab.items():
            self.itos[idx] = word
        self.emb_dim = emb_dim
        self.hidden = hidden
        self.max_src_len = max_src_len
        size = len(self.vocab)
        self.embedding = nn.Embedding(size, emb_dim, padding_idx=PAD)
        self.encoder = nn.GRU(emb_dim, hidden, batch_first=True)
        self.decoder = nn.GRU(emb_dim, hidden, batch_first=True)
        self.out = nn.Linear(hidden, size)

    @classmethod
    def build_vocab(cls, texts: list[str]) -> dict[str, int]:
        vocab = {word: i for i, word in enumerate(_SPECIALS)}
        for text in texts:
            for tok in tokens(text):
                vocab.setdefault(tok, len(vocab))
        return vocab

    def ids(self, text: str, limit: int | None = None) -> list[int]:
        out = [self.vocab.get(tok, UNK) for tok in tokens(text)]
        return out[: limit or self.max_src_len]

    def _encode(self, src: torch.Tensor, lengths: torch.Tensor):
        emb = self.embedding(src)
        packed = nn.utils.rnn.pack_padded_sequence(
            emb, lengths, batch_first=True, enforce_sorted=False
        )
        _, state = self.encoder(packed)
        return state

    def forward(self, src, src_lengths, tgt_in):
        """Teacher-forced logits over the target vocabulary."""
        state = self._encode(src, src_lengths)
        emb = self.embedding(tgt_in)
        output, _ = self.decoder(emb, state)
        return self.out(output)

    @torch.no_grad()
    def generate(self, text: str, max_len: int = 64) -> str:
        self.eval()
        src = self.ids(text)
        if not src:
            return ""
        src_tensor = torch.tensor([src], dtype=torch.long)
        state = self._encode(src_tensor, torch.tensor([len(src)]))
        token = torch.tensor([[BOS]], dtype=torch.long)
        words = []
        for _ in range(max_len):
            emb = self.embedding(token)
            output, state = self.decoder(emb, state)
            next_id = int(self.out(output[:, -1]).argmax(dim=-1))
            if next_id == EOS:
                break
            if next_id not in (PAD, BOS, UNK):
                words.append(self.itos[next_id])
            token = torch.tensor([[next_id]], dtype=torch.long)
        return " ".join(words)

    def config(self) -> dict:
        return {
            "vocab": self.vocab,
            "emb_dim": self.emb_dim,
            "hidden": self.hidden,
            "max_src_len": self.max_src_len,
        }


_KINDS = {
    "encoder": Encoder,
    "pair": PairClassifier,
    "multiclass": TextCNN,
    "summarizer": Seq2SeqSummarizer,
}


def save_checkpoint(model: nn.Module, kind: str, path: str | Path, meta=None):
    torch.save(
        {
            "kind": kind,
            "config": model.config(),
            "state": model.state_dict(),
            "meta": meta or {},
        },
        path,
    )


def load_checkpoint(path: str | Path):
    payload = torch.load(path, weights_only=False)
    kind = payload["kind"]
    if kind not in _KINDS:
        raise ValueError(f"unknown checkpoint kind {kind!r} in {path}")
    model = _KINDS[kind](**payload["config"])
    model.load_state_dict(payload["state"])
    model.eval()
    return kind, model, payload.get("meta", {})
