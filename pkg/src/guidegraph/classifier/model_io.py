"""Self-describing model file: params, vocabulary, weights, digest.

Floats are serialized through JSON's repr round-trip, so a loaded model
reproduces the saved model's predictions exactly.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from ..errors import SchemaViolation
from .features import TfidfParams, VocabParams, Vocabulary
from .sgd import LinearModel, SgdParams

FORMAT = "guidegraph-linear-model/1"


def _payload(model: LinearModel) -> dict:
    vp = model.vocabulary.params
    return {
        "format": FORMAT,
        "classes": list(model.classes),
        "vocab_params": {
            "max_df": vp.max_df,
            "max_features": vp.max_features,
            "ngram_range": list(vp.ngram_range),
        },
        "tfidf_params": {
            "use_idf": model.tfidf_params.use_idf,
            "norm": model.tfidf_params.norm,
        },
        "sgd_params": {
            "alpha": model.sgd_params.alpha,
            "penalty": model.sgd_params.penalty,
            "l1_ratio": model.sgd_params.l1_ratio,
            "max_iter": model.sgd_params.max_iter,
            "seed": model.sgd_params.seed,
        },
        "vocabulary": {
            "terms": list(model.vocabulary.terms),
            "document_frequencies": list(model.vocabulary.document_frequencies),
            "n_documents": model.vocabulary.n_documents,
        },
        "idf": None if model.idf is None else [float(x) for x in model.idf],
        "weights": [[float(x) for x in row] for row in model.weights],
        "bias": [float(x) for x in model.bias],
    }


def _digest(payload: dict) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def dumps_model(model: LinearModel) -> str:
    payload = _payload(model)
    payload["digest"] = _digest({k: v for k, v in payload.items()
                                 if k != "digest"})
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def save_model(model: LinearModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(model))


def loads_model(text: str) -> LinearModel:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation("$", f"not valid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict) or raw.get("format") != FORMAT:
        raise SchemaViolation("format", f"expected {FORMAT}")
    expected = raw.get("digest")
    actual = _digest({k: v for k, v in raw.items() if k != "digest"})
    if expected != actual:
        raise SchemaViolation("digest", "content digest mismatch")
    try:
        vp = raw["vocab_params"]
        vocab_params = VocabParams(
            max_df=vp["max_df"],
            max_features=vp["max_features"],
            ngram_range=tuple(vp["ngram_range"]),
        )
        tp = raw["tfidf_params"]
        tfidf_params = TfidfParams(use_idf=tp["use_idf"], norm=tp["norm"])
        sp = raw["sgd_params"]
        sgd_params = SgdParams(alpha=sp["alpha"], penalty=sp["penalty"],
                               l1_ratio=sp["l1_ratio"], max_iter=sp["max_iter"],
                               seed=sp["seed"])
        vraw = raw["vocabulary"]
        terms = list(vraw["terms"])
        vocabulary = Vocabulary(
            terms=terms,
            index={t: i for i, t in enumerate(terms)},
            document_frequencies=list(vraw["document_frequencies"]),
            n_documents=vraw["n_documents"],
            params=vocab_params,
        )
        idf = raw["idf"]
        weights = np.array(raw["weights"], dtype=np.float64)
        if weights.size == 0:
            weights = weights.reshape(len(raw["classes"]), 0)
        return LinearModel(
            vocabulary=vocabulary,
            tfidf_params=tfidf_params,
            idf=None if idf is None else np.array(idf, dtype=np.float64),
            classes=tuple(raw["classes"]),
            weights=weights,
            bias=np.array(raw["bias"], dtype=np.float64),
            sgd_params=sgd_params,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolation("$", f"malformed model file: {exc}") from exc


def load_model(path) -> LinearModel:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_model(fh.read())
