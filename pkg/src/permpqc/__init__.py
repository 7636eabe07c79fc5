"""Key exchange and ElGamal ciphers over a high-order cyclic subgroup of S_381."""

from .perm_core import (
    CycleDecomposition,
    Permutation,
    SeededRng,
    compose,
    cycle_decomposition,
    identity,
    inverse,
    order,
    power,
    random_permutation,
)
from .group_gen import GroupParams, generate_generator, make_params, validate_generator
from .lehmer import decode_message, encode_message, rank, unrank

__version__ = "0.1.0"

__all__ = [
    "CycleDecomposition",
    "Permutation",
    "SeededRng",
    "compose",
    "cycle_decomposition",
    "identity",
    "inverse",
    "order",
    "power",
    "random_permutation",
    "GroupParams",
    "generate_generator",
    "make_params",
    "validate_generator",
    "decode_message",
    "encode_message",
    "rank",
    "unrank",
]
