"""Composition of triangle-group permutation representations along handles."""

from .perm import Perm
from .group import BlockSystem, PermGroup, block_action, build_bsgs, minimal_block
from .triangle import Handle, Representation, TrianglePresentation, find_handles
from .compose import (
    Composition,
    HandleAssignment,
    compose_alpha_beta,
    compose_centralizer,
    compose_clone_p,
    compose_general,
)
from .analyze import analyze_imprimitivity, classify_thm7, verify_thm8

__version__ = "0.1.0"

__all__ = [
    "BlockSystem",
    "Composition",
    "Handle",
    "HandleAssignment",
    "Perm",
    "PermGroup",
    "Representation",
    "TrianglePresentation",
    "analyze_imprimitivity",
    "block_action",
    "build_bsgs",
    "classify_thm7",
    "compose_alpha_beta",
    "compose_centralizer",
    "compose_clone_p",
    "compose_general",
    "find_handles",
    "minimal_block",
    "verify_thm8",
]
