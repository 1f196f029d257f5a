"""Sentence embeddings by mean pooling and cosine-based candidate ranking."""

from __future__ import annotations

import json
import math
import os
import socket
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .errors import (
    AllTokensOOV,
    DimensionMismatch,
    NoScorableCandidate,
    ServiceUnavailable,
    Timeout,
    ZeroNorm,
)
from .textcore import FluentSentence, Token, join_tokens


# A sentence or token embedding: float64 ndarray of shape (dim,).
EmbeddingVector = np.ndarray


def as_vector(values: Sequence[float]) -> EmbeddingVector:
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1 or vec.size == 0:
        raise ValueError("embedding must be a non-empty 1-d vector")
    if not np.all(np.isfinite(vec)):
        raise ValueError("embedding has non-finite entries")
    return vec


class EmbedderBackend(Protocol):
    kind: str
    dim: int

    def embed(self, tokens: Sequence[Token]) -> EmbeddingVector: ...

    def embed_many(self, batch: Sequence[Sequence[Token]]) -> list[EmbeddingVector | None]:
        """Embed each token list; ``None`` marks an item that cannot be embedded."""
        ...


class StaticVectors:
    """Word vectors from a text file, pooled by arithmetic mean.

    Tokens are looked up by their folded surface; tokens missing from the
    file are skipped.
    """

    kind = "static-vectors"

    def __init__(self, vectors: dict[str, EmbeddingVector], dim: int, path: str = ""):
        self.vectors = vectors
        self.dim = dim
        self.path = path

    @classmethod
    def load(cls, path: str | os.PathLike) -> "StaticVectors":
        vectors: dict[str, EmbeddingVector] = {}
        dim = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                    dim = int(parts[1])
                    continue
                word, values = parts[0], parts[1:]
                if dim is None:
                    dim = len(values)
                if len(values) != dim:
                    raise ValueError(f"{path}:{lineno}: expected {dim} values, got {len(values)}")
                try:
                    vectors[word] = as_vector([float(v) for v in values])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
        if not vectors or dim is None:
            raise ValueError(f"{path}: no vectors found")
        return cls(vectors, dim, str(path))

    def lookup(self, tokens: Sequence[Token]) -> list[EmbeddingVector]:
        return [v for v in (self.vectors.get(t.folded) for t in tokens) if v is not None]

    def embed(self, tokens: Sequence[Token]) -> EmbeddingVector:
        if not tokens:
            raise ValueError("cannot embed an empty token list")
        found = self.lookup(tokens)
        if not found:
            raise AllTokensOOV(f"no vector for any of: {join_tokens(tokens)!r}")
        return np.mean(found, axis=0)

    def embed_many(self, batch: Sequence[Sequence[Token]]) -> list[EmbeddingVector | None]:
        out: list[EmbeddingVector | None] = []
        for tokens in batch:
            try:
                out.append(self.embed(tokens))
            except AllTokensOOV:
                out.append(None)
        return out


class RemoteEmbedder:
    """Client for an embedding service.

    ``POST {url}/embed`` with ``{"texts": [...]}`` must answer
    ``{"vectors": [[...], ...]}`` in request order; the service does its own
    pooling.
    """

    kind = "remote-service"

    def __init__(self, url: str, dim: int | None = None, timeout: float = 30.0):
        self.url = url.rstrip("/")
        self.dim = dim
        self.timeout = timeout

    def _post(self, texts: list[str]) -> list[list[float]]:
        body = json.dumps({"texts": texts}).encode("utf-8")
        req = urllib.request.Request(
            self.url + "/embed",
            data=body,
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                payload = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            raise ServiceUnavailable(f"{self.url}/embed answered HTTP {exc.code}") from None
        except (socket.timeout, TimeoutError):
            raise Timeout(f"{self.url}/embed timed out after {self.timeout}s") from None
        except urllib.error.URLError as exc:
            if isinstance(exc.reason, (socket.timeout, TimeoutError)):
                raise Timeout(f"{self.url}/embed timed out after {self.timeout}s") from None
            raise ServiceUnavailable(f"{self.url}/embed unreachable: {exc.reason}") from None
        except (ValueError, OSError) as exc:
            raise ServiceUnavailable(f"{self.url}/embed: {exc}") from None
        vectors = payload.get("vectors") if isinstance(payload, dict) else None
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ServiceUnavailable("embedding service returned a malformed response")
        return vectors

    def embed_many(self, batch: Sequence[Sequence[Token]]) -> list[EmbeddingVector | None]:
        if not batch:
            return []
        raw = self._post([join_tokens(tokens) for tokens in batch])
        out = []
        for values in raw:
            try:
                vec = as_vector(values)
            except (TypeError, ValueError):
                raise ServiceUnavailable("embedding service returned an invalid vector") from None
            if self.dim is None:
                self.dim = vec.size
            elif vec.size != self.dim:
                raise DimensionMismatch(f"service returned dim {vec.size}, expected {self.dim}")
            out.append(vec)
        return out

    def embed(self, tokens: Sequence[Token]) -> EmbeddingVector:
        if not tokens:
            raise ValueError("cannot embed an empty token list")
        (vec,) = self.embed_many([tokens])
        return vec


def parse_embedder(option: str, timeout: float = 30.0) -> StaticVectors | RemoteEmbedder:
    """``static=PATH`` or ``http=URL``."""
    kind, sep, target = option.partition("=")
    if not sep or not target:
        raise ValueError(f"embedder must be static=PATH or http=URL, got {option!r}")
    if kind == "static":
        return StaticVectors.load(target)
    if kind == "http":
        if not target.startswith(("http://", "https://")):
            target = "http://" + target
        return RemoteEmbedder(target, timeout=timeout)
    raise ValueError(f"unknown embedder kind {kind!r}")


def cosine(x: EmbeddingVector, y: EmbeddingVector) -> float:
    if x.shape != y.shape:
        raise DimensionMismatch(f"dimensions differ: {x.shape} vs {y.shape}")
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx == 0.0 or ny == 0.0:
        raise ZeroNorm("cosine is undefined for a zero vector")
    return float(np.dot(x, y)) / (nx * ny)


def argmax_cosine(query: EmbeddingVector, candidates: Sequence[EmbeddingVector | None]) -> tuple[int, float]:
    """Index and score of the candidate most similar to ``query``.

    ``None`` entries are skipped; the earliest candidate wins ties.
    """
    best, best_score = -1, -math.inf
    for i, vec in enumerate(candidates):
        if vec is None:
            continue
        try:
            score = cosine(query, vec)
        except ZeroNorm:
            continue
        if score > best_score:
            best, best_score = i, score
    if best < 0:
        raise NoScorableCandidate("no candidate could be scored")
    return best, best_score


@dataclass(frozen=True)
class Candidate:
    lemma: str
    tokens: tuple[Token, ...]


def select_reparandum(
    backend: EmbedderBackend,
    original: FluentSentence | Sequence[Token],
    candidates: Sequence[Candidate | tuple[str, Sequence[Token]]],
) -> tuple[str, float]:
    """Pick the substitution whose sentence embedding is closest to the original."""
    if not candidates:
        raise NoScorableCandidate("empty candidate list")
    pairs = [c if isinstance(c, Candidate) else Candidate(c[0], tuple(c[1])) for c in candidates]
    orig_tokens = original.tokens if isinstance(original, FluentSentence) else tuple(original)
    vecs = backend.embed_many([orig_tokens, *(c.tokens for c in pairs)])
    query = vecs[0]
    if query is None or not np.any(query):
        raise NoScorableCandidate("original sentence cannot be embedded")
    best, score = argmax_cosine(query, vecs[1:])
    return pairs[best].lemma, score
