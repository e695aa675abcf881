"""Versioned on-disk container for subspaces and trained models.

The container is an uncompressed NumPy ``.npz`` archive (a zip of
``.npy`` members, written without pickled objects).  Every file holds
``format_version`` and ``kind`` entries; ``kind`` is ``"subspace"`` or
``"model"``.  A subspace file stores the ambient dimension, the basis
(row-major float64), the spectrum, and the source word count.  A model
file stores the strategy tag, the class list, hyperparameters, and the
per-class artifacts of its strategy.  See README.md for the full entry
list.
"""

import json

import numpy as np

from .bayes import NaiveBayesModel
from .classifiers import SimilarityAverageModel, SubspaceModel
from .errors import FormatError
from .features import FeatureSpec
from .lsa import LsaModel
from .subspace import Subspace
from .svm import LinearSvmModel

FORMAT_VERSION = 1


def _str_array(values):
    return np.asarray(list(values), dtype=np.str_)


def _str_list(arr):
    return [str(v) for v in np.atleast_1d(arr)]


def _savez_exact(path, entries):
    # np.savez appends ".npz" to bare paths; an open handle keeps the
    # name exactly as given
    with open(path, "wb") as fh:
        np.savez(fh, **entries)


def save_subspace(sub: Subspace, path):
    _savez_exact(path, {
        "format_version": FORMAT_VERSION,
        "kind": "subspace",
        "ambient_dim": sub.ambient_dimension,
        "basis": sub.basis,
        "spectrum": sub.spectrum,
        "source_word_count": sub.source_word_count,
    })


def load_subspace(path) -> Subspace:
    with np.load(path, allow_pickle=False) as data:
        _check(data, "subspace")
        return Subspace(
            data["basis"], data["spectrum"], int(data["source_word_count"])
        )


def _check(data, expected_kind):
    if "format_version" not in data or "kind" not in data:
        raise FormatError("not a wordspace container file")
    version = int(data["format_version"])
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported container version {version}")
    kind = str(data["kind"])
    if kind != expected_kind:
        raise FormatError(f"expected a {expected_kind} container, found {kind!r}")


def _encode_spec(spec: FeatureSpec):
    return {
        "spec_name": spec.name,
        "spec_terms": _str_array(spec.terms),
        "spec_idf_log": np.asarray(spec.idf_log, dtype=np.float64),
        "spec_embed_dim": spec.embed_dim,
        "spec_normalize": int(spec.normalize),
    }


def _decode_spec(data) -> FeatureSpec:
    return FeatureSpec(
        name=str(data["spec_name"]),
        terms=tuple(_str_list(data["spec_terms"])) if data["spec_terms"].size else (),
        idf_log=np.asarray(data["spec_idf_log"], dtype=np.float64),
        embed_dim=int(data["spec_embed_dim"]),
        normalize=bool(int(data["spec_normalize"])),
    )


def save_model(model, path):
    """Serialize any trained model to the container format."""
    entries = {
        "format_version": FORMAT_VERSION,
        "kind": "model",
        "strategy": model.strategy,
        "classes": _str_array(model.classes),
    }
    hyper = {}
    if isinstance(model, SubspaceModel):
        hyper = {
            "class_dim": model.class_dim,
            "query_dim": model.query_dim,
            "angle_count": model.angle_count,
            "normalize": model.normalize,
            "embed_dim": model.embed_dim,
        }
        for i, label in enumerate(model.classes):
            sub = model.subspaces[label]
            entries[f"class_{i}_basis"] = sub.basis
            entries[f"class_{i}_spectrum"] = sub.spectrum
            entries[f"class_{i}_count"] = sub.source_word_count
    elif isinstance(model, SimilarityAverageModel):
        hyper = {"normalize": model.normalize, "embed_dim": model.embed_dim}
        entries["sums"] = model.sums
        entries["counts"] = model.counts
    elif isinstance(model, NaiveBayesModel):
        entries["terms"] = _str_array(model.terms)
        entries["log_prior"] = model.log_prior
        entries["log_prob"] = model.log_prob
        entries["log_not_prob"] = model.log_not_prob
    elif isinstance(model, LsaModel):
        hyper = {"rank": model.rank}
        entries["labels"] = _str_array(model.labels)
        entries["basis"] = model.basis
        entries["sigma"] = model.sigma
        entries["doc_coords"] = model.doc_coords
        entries.update(_encode_spec(model.spec))
    elif isinstance(model, LinearSvmModel):
        hyper = {"reg": model.reg, "epochs": model.epochs, "seed": model.seed}
        entries["weights"] = model.weights
        entries["offsets"] = model.offsets
        entries.update(_encode_spec(model.spec))
    else:
        raise FormatError(f"cannot serialize model of type {type(model).__name__}")
    entries["hyper_json"] = json.dumps(hyper)
    _savez_exact(path, entries)


def load_model(path):
    """Reconstruct a trained model from a container file."""
    with np.load(path, allow_pickle=False) as data:
        _check(data, "model")
        strategy = str(data["strategy"])
        classes = _str_list(data["classes"])
        hyper = json.loads(str(data["hyper_json"]))

        if strategy in ("msm", "tfmsm"):
            subspaces = {}
            counts = {}
            for i, label in enumerate(classes):
                subspaces[label] = Subspace(
                    data[f"class_{i}_basis"],
                    data[f"class_{i}_spectrum"],
                    int(data[f"class_{i}_count"]),
                )
                counts[label] = subspaces[label].source_word_count
            return SubspaceModel(
                strategy, classes, subspaces, counts,
                class_dim=hyper["class_dim"], query_dim=hyper["query_dim"],
                angle_count=hyper["angle_count"], normalize=hyper["normalize"],
                embed_dim=hyper["embed_dim"],
            )
        if strategy == "sa":
            return SimilarityAverageModel(
                classes, data["sums"], data["counts"],
                embed_dim=hyper["embed_dim"], normalize=hyper["normalize"],
            )
        if strategy in ("mvb", "mnb"):
            log_not_prob = np.asarray(data["log_not_prob"])
            return NaiveBayesModel(
                strategy, tuple(classes), tuple(_str_list(data["terms"])),
                np.asarray(data["log_prior"]), np.asarray(data["log_prob"]),
                log_not_prob, log_not_prob.sum(axis=0),
            )
        if strategy == "lsa":
            return LsaModel(
                classes, _str_list(data["labels"]), np.asarray(data["basis"]),
                np.asarray(data["sigma"]), np.asarray(data["doc_coords"]),
                _decode_spec(data),
            )
        if strategy == "svm":
            return LinearSvmModel(
                classes, data["weights"], data["offsets"], _decode_spec(data),
                reg=hyper["reg"], epochs=hyper["epochs"], seed=hyper["seed"],
            )
        raise FormatError(f"unknown strategy tag {strategy!r}")
