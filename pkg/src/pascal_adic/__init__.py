"""Pascal-adic transformation: basic blocks, ergodic-sum curves, self-affine limits."""
from .blocks import BlockId, materialize
from .dyadicg import DyadicFunction
from .selfaffine import TriangularArray, eval_Mp

__version__ = "0.1.0"
__all__ = ["BlockId", "DyadicFunction", "TriangularArray", "eval_Mp", "materialize"]
