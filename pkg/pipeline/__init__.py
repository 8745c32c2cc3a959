"""
Surrogate pipeline: datasets, normalization, closed-loop rollout, evaluation and benchmark
"""

from .bench import BenchReport, BenchRow, bench
from .dataset import SupervisedSeries, build_dataset, feature_width
from .evaluation import EvalReport, EvalRow, avg_error_rate, evaluate_record, rollout
from .normalizer import Normalizer, fit_normalizer
from .oracles import BaseOracle, FrameOracle, RockingOracle

__all__ = [
    'BaseOracle',
    'BenchReport',
    'BenchRow',
    'EvalReport',
    'EvalRow',
    'FrameOracle',
    'Normalizer',
    'RockingOracle',
    'SupervisedSeries',
    'avg_error_rate',
    'bench',
    'build_dataset',
    'evaluate_record',
    'feature_width',
    'fit_normalizer',
    'rollout',
]
