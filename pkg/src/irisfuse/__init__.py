"""Haar-Hilbert and Log-Gabor iris encoders with fused matching and decision-landscape analysis."""

from .encoders import (
    Encoder,
    EncoderConfig,
    HaarHilbertParams,
    IrisCode,
    LogGaborParams,
    combined_encode,
    haar_hilbert_encode,
    log_gabor_encode,
    preprocess,
)
from .evaluation import PessimismParams, ScorePool, analyze
from .matching import MatchConfig, fuse_dual, fuse_single, similarity

__version__ = "0.1.0"
