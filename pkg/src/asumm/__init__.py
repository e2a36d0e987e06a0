"""Aspect-based answer summarization toolkit for community health Q&A.

The package turns raw question-answer threads into per-aspect summaries in
three stages (relevance selection, aspect classification, per-aspect
summarization) and ships the corpus construction and evaluation machinery
around them.
"""

__version__ = "0.1.0"
