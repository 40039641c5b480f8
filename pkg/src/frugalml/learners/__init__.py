"""Frugal classifier suite with resource metering, AUC metrics and meta-features."""

from .classifiers import (
    LEARNERS,
    DecisionStump,
    HyperPipes,
    Learner,
    NaiveBayes,
    ZeroR,
    make_learner,
    train_predict_hyperpipes,
    train_predict_naive_bayes,
    train_predict_stump,
    train_predict_zeror,
)
from .data import Attribute, TabularDataset, load_dataset_csv, make_dataset
from .evaluation import EvalProtocol, MeteredEval, cross_validation, holdout, metered_evaluate, stratified_folds
from .meta import MetaFeatures, extract_meta_features, format_meta_csv, parse_meta_csv
from .metrics import auc_binary, auc_multiclass_ova

__all__ = [
    "LEARNERS", "Learner", "ZeroR", "DecisionStump", "NaiveBayes", "HyperPipes", "make_learner",
    "train_predict_zeror", "train_predict_stump", "train_predict_naive_bayes", "train_predict_hyperpipes",
    "Attribute", "TabularDataset", "load_dataset_csv", "make_dataset",
    "EvalProtocol", "MeteredEval", "cross_validation", "holdout", "metered_evaluate", "stratified_folds",
    "MetaFeatures", "extract_meta_features", "format_meta_csv", "parse_meta_csv",
    "auc_binary", "auc_multiclass_ova",
]
