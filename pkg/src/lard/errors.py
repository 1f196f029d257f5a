"""Exception hierarchy.

Every error carries a stable ``code`` so the CLI can emit a machine-readable
error record without inspecting class names.
"""

from __future__ import annotations


class LardError(Exception):
    code = "LardError"

    def to_record(self) -> dict:
        return {"error": self.code, "message": str(self)}


# textcore
class EmptyInput(LardError, ValueError):
    code = "EmptyInput"


class MalformedRecord(LardError, ValueError):
    code = "MalformedRecord"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

    def to_record(self) -> dict:
        return {**super().to_record(), "line": self.line}


class EmptyCorpus(LardError, ValueError):
    code = "EmptyCorpus"


# scheme
class InvalidAnnotation(LardError, ValueError):
    code = "InvalidAnnotation"


# lexicon
class MissingFile(LardError, FileNotFoundError):
    code = "MissingFile"


class ParseError(LardError, ValueError):
    code = "ParseError"

    def __init__(self, message: str, path: str, offset: int):
        self.path = path
        self.offset = offset
        super().__init__(f"{path} @ byte {offset}: {message}")

    def to_record(self) -> dict:
        return {**super().to_record(), "file": self.path, "offset": self.offset}


class WordNotFound(LardError, KeyError):
    code = "WordNotFound"

    def __str__(self) -> str:
        return Exception.__str__(self)


# scorer
class AllTokensOOV(LardError):
    code = "AllTokensOOV"


class ServiceUnavailable(LardError):
    code = "ServiceUnavailable"


class Timeout(ServiceUnavailable):
    code = "Timeout"


class ZeroNorm(LardError, ValueError):
    code = "ZeroNorm"


class DimensionMismatch(LardError, ValueError):
    code = "DimensionMismatch"


class NoScorableCandidate(LardError):
    code = "NoScorableCandidate"


# forge: per-attempt failures, the batch engine retries on these
class GenerationFailure(LardError):
    code = "GenerationFailure"


class NoValidIndex(GenerationFailure):
    code = "NoValidIndex"


class NoCandidateWord(GenerationFailure):
    code = "NoCandidateWord"


class NoHyponyms(GenerationFailure):
    code = "NoHyponyms"


class RetryNeeded(GenerationFailure):
    code = "RetryNeeded"


class Exhausted(GenerationFailure):
    code = "Exhausted"


class InsufficientCorpus(LardError):
    code = "InsufficientCorpus"


class ResourceError(LardError, ValueError):
    code = "ResourceError"
