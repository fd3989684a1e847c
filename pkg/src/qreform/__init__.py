"""Question reformulation toolkit.

Deterministic machinery for studying and improving question
answerability: syntactic question typing, weak-supervision training-pair
derivation, corpus analytics, a BM25 answerability oracle, and an
experiment driver for HTTP reformulation backends.
"""

from .qtypes import Operator, QuestionType

__version__ = "0.1.0"

__all__ = ["Operator", "QuestionType", "__version__"]
