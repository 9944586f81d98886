"""
Error taxonomy for the layout engine.

Every constructor raises a LayoutError subclass; verifiers never raise and
return a Report instead. The `code` attribute is the CLI exit status.
"""

from typing import Any, Optional

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class LayoutError(Exception):
    code = EXIT_USAGE

    def __init__(self, message: str, witness: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "witness": self.witness}


# ── Input shape ──────────────────────────────────────────────────────

class InvalidGraph(LayoutError):
    pass


class BadParams(LayoutError):
    pass


class DisconnectedGraph(LayoutError):
    pass


# ── Chordality / k-trees ─────────────────────────────────────────────

class NotChordal(LayoutError):
    pass


class NotKTree(LayoutError):
    pass


class NotPEO(LayoutError):
    pass


class NotForest(LayoutError):
    pass


class NotAClique(LayoutError):
    pass


class NotAcyclic(LayoutError):
    pass


# ── Structures ───────────────────────────────────────────────────────

class InvalidDecomposition(LayoutError):
    pass


class InvalidTreePartition(LayoutError):
    pass


class InvalidDrawing(LayoutError):
    pass


class NotSameCover(LayoutError):
    pass


class InconsistentOrder(LayoutError):
    pass


class NoSuchLayout(LayoutError):
    pass


# ── Budgets and self-checks ──────────────────────────────────────────

class ResourceLimit(LayoutError):
    code = EXIT_RESOURCE


class TooLarge(LayoutError):
    code = EXIT_RESOURCE


class VerificationFailed(LayoutError):
    """A constructed artifact failed its own verifier."""
    code = EXIT_VERIFY
