"""Packing pairwise-unrelated copies of a poset into the Boolean lattice."""

from .config import RunConfig
from .embedding import ClosureCertificate, Embedding, best_ratio, closure_size, enumerate_embeddings, minimal_closure
from .lattice import (
    Family,
    abar_bruteforce,
    chains_through,
    chains_through_oracle,
    closure,
    downset,
    is_convex,
    unrelated,
    upset,
)
from .oracle import enumerate_copies, gst_formula, pa_exact, pa_exact_collection
from .packing import build_plan, count_copies, letter_order, materialize, verify_unrelated
from .poset import Poset, build_poset, height, standard_poset

__all__ = [
    "ClosureCertificate",
    "Embedding",
    "Family",
    "Poset",
    "RunConfig",
    "abar_bruteforce",
    "best_ratio",
    "build_plan",
    "build_poset",
    "chains_through",
    "chains_through_oracle",
    "closure",
    "closure_size",
    "count_copies",
    "downset",
    "enumerate_copies",
    "enumerate_embeddings",
    "gst_formula",
    "height",
    "is_convex",
    "letter_order",
    "materialize",
    "minimal_closure",
    "pa_exact",
    "pa_exact_collection",
    "standard_poset",
    "unrelated",
    "upset",
    "verify_unrelated",
]
