"""Proportional committee reconfiguration for approval-based elections."""

from .core import (
    Instance,
    InstanceFormatError,
    VoterSet,
    as_committee,
    coverage,
    distance,
    parse_instance,
    serialize_instance,
)
from .axioms import check_ejr, check_ejr_plus, check_jr

__all__ = [
    "Instance",
    "InstanceFormatError",
    "VoterSet",
    "as_committee",
    "coverage",
    "distance",
    "parse_instance",
    "serialize_instance",
    "check_jr",
    "check_ejr",
    "check_ejr_plus",
]

__version__ = "0.1.0"
