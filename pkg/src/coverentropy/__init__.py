"""Cover-refinement topological entropy for finitely generated group actions.

Desk-scale models only: finitely generated discrete groups acting on finite
topological spaces and on subshifts of ``A^G``.
"""

from coverentropy.errors import (
    CoverEntropyError,
    ModelMismatchError,
    ResourceLimitError,
    ValidationError,
    VerificationError,
)
from coverentropy.groups import Ball, GroupModel

__all__ = [
    "Ball",
    "CoverEntropyError",
    "GroupModel",
    "ModelMismatchError",
    "ResourceLimitError",
    "ValidationError",
    "VerificationError",
]

__version__ = "0.1.0"
