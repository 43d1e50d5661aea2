"""Multi-answer QA over tweets with contradictory stance mining."""

import json

from ._mythqa import (
    Bm25Index,
    Corpus,
    InvalidArgument,
    MythqaError,
    ParseError,
    TransportError,
    ValidationError,
    __version__,
    f1_ans,
    f1_contro,
    hits_at_k,
    lexical_stance,
    make_claim,
    mhits_at_k,
    normalize_answer,
    normalize_text,
    run_cli,
)
from ._mythqa import evaluate_files as _evaluate_files


def evaluate(dataset, predictions, e=(1, 10, 100), k=(100, 1000)):
    """Evaluation report for a dataset file and a prediction JSONL file, as a dict."""
    return json.loads(_evaluate_files(str(dataset), str(predictions), list(e), list(k)))


__all__ = [
    "Bm25Index",
    "Corpus",
    "InvalidArgument",
    "MythqaError",
    "ParseError",
    "TransportError",
    "ValidationError",
    "__version__",
    "evaluate",
    "f1_ans",
    "f1_contro",
    "hits_at_k",
    "lexical_stance",
    "make_claim",
    "mhits_at_k",
    "normalize_answer",
    "normalize_text",
    "run_cli",
]
