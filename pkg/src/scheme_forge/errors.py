"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SchemeError(Exception):
    """Base class; carries a short machine-readable ``code``."""

    code = "scheme-error"


class InvalidType(SchemeError):
    code = "invalid-type"


class NotALevelCardinality(SchemeError):
    code = "not-a-level-cardinality"


class DomainExceeded(SchemeError):
    code = "domain-exceeded"


class XiUndefined(SchemeError):
    code = "xi-undefined"


class BadOrder(SchemeError):
    code = "bad-order"


class NotAMember(SchemeError):
    code = "not-a-member"


class RequestOutOfDomain(SchemeError):
    code = "request-out-of-domain"


class NoWitnessInSchedule(SchemeError):
    code = "no-witness-in-schedule"


class FuelExhausted(SchemeError):
    code = "fuel-exhausted"


class NotATwoType(SchemeError):
    code = "not-a-two-type"


class InexactWindow(SchemeError):
    code = "inexact-window"


class NotAnEmbedding(SchemeError):
    code = "not-an-embedding"


class TypeTooSmall(SchemeError):
    code = "type-too-small"


class OutOfDomain(SchemeError):
    """A point lies outside the domain of a partial function."""

    code = "out-of-domain"


class UnknownCheck(SchemeError):
    code = "unknown-check"
