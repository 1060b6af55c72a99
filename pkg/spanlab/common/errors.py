from typing import Any


class SpanlabError(Exception):
    """base class for everything spanlab raises on purpose"""


class InputError(SpanlabError, ValueError):
    """bad arguments or a violated precondition"""


class VerificationIncomplete(SpanlabError):
    """an exhaustive check hit its cutoff, so the answer is unknown (not false)"""


class GenerationDegenerate(SpanlabError):
    """
    every retry produced an instance below the quality floor,
    the best one is attached as `best`
    """

    def __init__(self, message: str, best: Any = None):
        super().__init__(message)
        self.best = best


class InternalError(SpanlabError, AssertionError):
    """a hard post-condition failed, this is a bug"""
