"""Entailment-vector word embeddings for hyponymy detection."""

from .corpus import Vocabulary, build_negative_table, build_vocab
from .entailment import (
    entailment_operator,
    infer_latent,
    pair_score,
    pair_score_grad,
    softplus_transform,
)
from .evaluation import (
    Embeddings,
    LabeledPair,
    accuracy_at_half,
    average_precision,
    evaluate,
    load_pairs,
    rank_abstractness,
)
from .model_io import load_binary, load_text, save_binary, save_text
from .semisup import EntailmentMap, LinearMap, evaluate_cv, make_folds, train_map
from .synthetic import generate_taxonomy, planted_pairs, write_corpus
from .trainer import ModelParams, TrainConfig, Word2Hyp, train

__version__ = "0.1.0"
