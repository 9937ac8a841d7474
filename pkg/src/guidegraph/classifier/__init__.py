"""Node-role classification: tf-idf features + hinge-loss SGD."""

from .cv import default_grid, grid_search_cv, split_params, stratified_folds
from .dataset import (
    CLASSES,
    LabeledDataset,
    build_dataset,
    load_dataset_tsv,
    normalize_text,
)
from .features import (
    TfidfParams,
    VocabParams,
    Vocabulary,
    fit_vocabulary,
    idf_vector,
    tfidf_transform,
    tokenize,
    transform_counts,
)
from .model_io import dumps_model, load_model, loads_model, save_model
from .sgd import LinearModel, SgdParams, predict, train

__all__ = [
    "CLASSES",
    "LabeledDataset",
    "LinearModel",
    "SgdParams",
    "TfidfParams",
    "VocabParams",
    "Vocabulary",
    "build_dataset",
    "default_grid",
    "dumps_model",
    "fit_vocabulary",
    "grid_search_cv",
    "idf_vector",
    "load_dataset_tsv",
    "load_model",
    "loads_model",
    "normalize_text",
    "predict",
    "save_model",
    "split_params",
    "stratified_folds",
    "tfidf_transform",
    "tokenize",
    "train",
    "transform_counts",
]
