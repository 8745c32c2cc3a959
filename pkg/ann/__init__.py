"""
Growable feedforward network with frozen/normal SGD training
"""

from .growth import deepen, widen
from .metrics import error_rates, peak_errors
from .network import DenseNetwork, backprop, forward, forward_batch, init_network, load_network, save_network, sgd_step
from .training import AdaptiveTrainer, FitResult, GrowthPolicy, TrainLog, TrainLogEntry, adaptive_fit, train_epoch

__all__ = [
    'AdaptiveTrainer',
    'DenseNetwork',
    'FitResult',
    'GrowthPolicy',
    'TrainLog',
    'TrainLogEntry',
    'adaptive_fit',
    'backprop',
    'deepen',
    'error_rates',
    'forward',
    'forward_batch',
    'init_network',
    'load_network',
    'peak_errors',
    'save_network',
    'sgd_step',
    'train_epoch',
    'widen',
]
