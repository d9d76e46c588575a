"""Synthetic corpus, ridge classifier and ROC evaluation for the desk experiment."""

from .experiment import EvalRun, ExperimentConfig, evaluate_corpus, run_experiment, run_pipeline
from .features import extract_features
from .ridge import RidgeModel, train_ridge
from .roc import LabeledScores, auc, bootstrap_ci, roc_curve
from .synth import SynthConfig, synth_dataset

__all__ = [
    "EvalRun", "ExperimentConfig", "LabeledScores", "RidgeModel", "SynthConfig", "auc",
    "bootstrap_ci", "evaluate_corpus", "extract_features", "roc_curve", "run_experiment",
    "run_pipeline", "synth_dataset", "train_ridge",
]
