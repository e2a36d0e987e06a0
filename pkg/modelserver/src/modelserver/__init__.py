"""HTTP model service: embeddings, sentence-pair relevance, zero-shot NLI,
grammatical moods, and per-aspect summarizers, plus toy fine-tuning."""

__version__ = "0.1.0"
