"""Principal pairs, phase functions and zero gaps of y'' + q(x) y = 0."""

import json

from ._core import (
    ConfigError,
    NumericError,
    __version__,
    bessel_jy,
    bessel_modulus,
    example1_v,
    normalization_note,
    principal_amplitude,
    q,
)
from . import _core


def analyze(eq, params=None, **kw):
    """Analysis report as a dict."""
    return json.loads(_core.analyze_json(eq, params or {}, **kw))


def zero_gaps(eq, params=None, **kw):
    """Zero-gap table of the principal pair as a dict."""
    return json.loads(_core.zeros_json(eq, params or {}, **kw))


def verify(full=False, rtol=None, **kw):
    """Acceptance checks as a list of dicts."""
    return json.loads(_core.verify_json(full, rtol, **kw))["checks"]


__all__ = [
    "ConfigError",
    "NumericError",
    "__version__",
    "analyze",
    "bessel_jy",
    "bessel_modulus",
    "example1_v",
    "normalization_note",
    "principal_amplitude",
    "q",
    "verify",
    "zero_gaps",
]
