"""Continued fractions, Schrodinger transfer matrices and approximant diagnostics."""

import json

from ._core import (
    DomainError,
    IntegrationError,
    InvariantViolation,
    ParseError,
    RangeError,
    ResourceError,
    SingularityHit,
    canonical_potential,
    cf_expand,
    convergents,
    default_config,
    eval_potential,
    frequency,
    gordon_sequence,
    l1_distance,
    liouville_certify,
    monodromy,
    witness,
)
from ._core import run as _run


def run(config=None, **overrides):
    """Run a CLI configuration (dict or JSON string); returns (exit_code, stdout, stderr)."""
    cfg = json.loads(default_config())
    if isinstance(config, str):
        config = json.loads(config)
    cfg.update(config or {})
    cfg.update(overrides)
    return _run(json.dumps(cfg))


__all__ = [
    "DomainError",
    "IntegrationError",
    "InvariantViolation",
    "ParseError",
    "RangeError",
    "ResourceError",
    "SingularityHit",
    "canonical_potential",
    "cf_expand",
    "convergents",
    "default_config",
    "eval_potential",
    "frequency",
    "gordon_sequence",
    "l1_distance",
    "liouville_certify",
    "monodromy",
    "run",
    "witness",
]
