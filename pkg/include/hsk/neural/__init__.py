from .adam import AdamHyper, AdamState, adam_step
from .checkpoint import Checkpoint
from .head import HeadParams, head_forward, cross_entropy, cross_entropy_with_logits
from .lstm import LstmParams, BiLstmLayer, lstm_cell, bilstm_encode
from .model import ModelParams, Gradients, init_model, model_forward, model_gradients, predict
from .pooling import PoolProvenance, Direction, max_pool_with_provenance

__all__ = [
    "AdamHyper",
    "AdamState",
    "adam_step",
    "Checkpoint",
    "HeadParams",
    "head_forward",
    "cross_entropy",
    "cross_entropy_with_logits",
    "LstmParams",
    "BiLstmLayer",
    "lstm_cell",
    "bilstm_encode",
    "ModelParams",
    "Gradients",
    "init_model",
    "model_forward",
    "model_gradients",
    "predict",
    "PoolProvenance",
    "Direction",
    "max_pool_with_provenance",
]
