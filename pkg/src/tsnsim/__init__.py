"""Deterministic TSN simulator: asynchronous shaping, stream replication,
and their interaction under adversarial traffic."""

from .rational import Rat, rat, parse_time, to_ns, ns_string
from .kernel import Simulation, Event

__version__ = "0.1.0"

__all__ = [
    "Rat",
    "rat",
    "parse_time",
    "to_ns",
    "ns_string",
    "Simulation",
    "Event",
    "__version__",
]
