"""
Exception classes shared by every stage of the tagging cascade.
"""

from typing import Optional


class TaggerError(Exception):
    """Base exception for tagger errors"""
    pass


class EmptyInputError(TaggerError):
    """Raised when a machine is requested for an empty symbol sequence"""

    def __init__(self, message: str = "empty input"):
        super().__init__(message)


class AlphabetMismatchError(TaggerError):
    """Raised when composing machines whose shared alphabets differ"""

    def __init__(self, message: str = "alphabet mismatch"):
        super().__init__(message)


class ResourceFormatError(TaggerError):
    """Raised when a resource file has a malformed line"""

    def __init__(self, reason: str, path: Optional[str] = None, line: Optional[int] = None):
        self.reason = reason
        self.path = path
        self.line = line
        location = f"{path or '<input>'}:{line}: " if line is not None else ""
        super().__init__(f"{location}{reason}")


class UnknownTagError(ResourceFormatError):
    """Raised when a resource mentions a tag missing from the tag set"""

    def __init__(self, tag: str, path: Optional[str] = None, line: Optional[int] = None):
        self.tag = tag
        super().__init__(f"unknown tag {tag!r}", path=path, line=line)


class RuleFormatError(ResourceFormatError):
    """Raised when a negative-constraint rule line is malformed"""
    pass


class ExpansionError(TaggerError):
    """Raised when a generic tag expands to no full tag"""

    def __init__(self, generic: str):
        self.generic = generic
        super().__init__(f"generic tag {generic!r} expands to no tag")


class GoldTagError(TaggerError):
    """Raised in strict training when a gold tag is outside its token's genotype"""
    pass
