"""FastAPI app implementing the gateway wire protocol.

Unknown summarizer keys are rejected with a message listing what is
loaded; /v1/train lets a client fine-tune and register a toy model.
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .registry import ModelRegistry, default_registry
from .training import TrainingError, toy_finetune


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class PairRequest(BaseModel):
    question: str
    sentence: str
    model: str = "pair"


class NliRequest(BaseModel):
    premise: str
    labels: list[str] = Field(min_length=1)


class MoodsRequest(BaseModel):
    sentence: str


class SummarizeRequest(BaseModel):
    text: str
    family: str
    aspect: str
    strategy: str
    max_len: int = 64


class TrainRequest(BaseModel):
    task: str
    key: str
    dataset: str | None = None  # server-side JSONL path
    rows: list[dict] | None = None  # or inline examples
    hyperparams: dict = Field(default_factory=dict)


def create_app(registry: ModelRegistry | None = None) -> FastAPI:
    registry = registry if registry is not None else default_registry()
    app = FastAPI(title="modelserver")
    app.state.registry = registry

    def handle(key: str):
        try:
            return registry.get(key)
        except KeyError:
            raise HTTPException(
                status_code=400,
                detail=f"unknown model key {key!r}; available: {registry.keys()}",
            ) from None

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "models": registry.keys()}

    @app.post("/v1/embed")
    def embed(request: EmbedRequest):
        vectors = handle("embed").encode(request.texts)
        return {"vectors": [[float(x) for x in vec] for vec in vectors]}

    @app.post("/v1/pair")
    def pair(request: PairRequest):
        label, p_relevant = handle(request.model).predict_pair(
            request.question, request.sentence
        )
        return {"label": label, "p_relevant": p_relevant}

    @app.post("/v1/nli")
    def nli(request: NliRequest):
        label, scores = handle("nli").score_labels(request.premise, request.labels)
        return {"label": label, "scores": scores}

    @app.post("/v1/moods")
    def moods(request: MoodsRequest):
        imperative, interrogative, indicative = handle("moods").moods(request.sentence)
        return {
            "imperative": imperative,
            "interrogative": interrogative,
            "indicative": indicative,
        }

    @app.post("/v1/summarize")
    def summarize(request: SummarizeRequest):
        key = f"{request.family}:{request.aspect}:{request.strategy}"
        model = handle(key)
        return {"summary": model.generate(request.text, max_len=request.max_len)}

    @app.post("/v1/train")
    def train(request: TrainRequest):
        if bool(request.dataset) == bool(request.rows):
            raise HTTPException(
                status_code=400, detail="provide exactly one of dataset or rows"
            )
        try:
            if request.rows is not None:
                import json

                with tempfile.NamedTemporaryFile(
                    "w", suffix=".jsonl", delete=False
                ) as fh:
                    for row in request.rows:
                        fh.write(json.dumps(row) + "\n")
                    dataset_path = Path(fh.name)
            else:
                dataset_path = Path(request.dataset)
                if not dataset_path.exists():
                    raise HTTPException(
                        status_code=400, detail=f"dataset not found: {dataset_path}"
                    )
            result = toy_finetune(request.task, dataset_path, request.hyperparams)
        except TrainingError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if not result.ok:
            return {
                "status": "failed",
                "key": request.key,
                "losses": result.losses,
                "metrics": result.metrics,
            }
        role = "summarizer" if request.task == "summarize" else request.task
        registry.register(
            request.key, result.model, {"role": role, "task": request.task, **result.metrics}
        )
        return {
            "status": "ok",
            "key": request.key,
            "losses": result.losses,
            "metrics": result.metrics,
        }

    return app
