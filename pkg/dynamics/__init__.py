"""
Ground-truth oracles: hysteretic shear frame and rigid rocking block
"""

from .frame import ShearFrame, build_frame, calibrate_stiffness, modal_analysis, paper_frame, rayleigh_coefficients
from .hht import FrameState, IntegratorConfig, hht_step
from .history import ResponseHistory
from .hysteresis import HystereticSpring, spring_response
from .rocking import RockingBlock, block_constants, paper_block, simulate_rocking
from .time_history import simulate_frame

__all__ = [
    'FrameState',
    'HystereticSpring',
    'IntegratorConfig',
    'ResponseHistory',
    'RockingBlock',
    'ShearFrame',
    'block_constants',
    'build_frame',
    'calibrate_stiffness',
    'hht_step',
    'modal_analysis',
    'paper_block',
    'paper_frame',
    'rayleigh_coefficients',
    'simulate_frame',
    'simulate_rocking',
    'spring_response',
]
