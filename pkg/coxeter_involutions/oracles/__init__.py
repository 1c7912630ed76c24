"""Conjugacy oracle registry."""

from __future__ import annotations

import logging
from typing import Type

from ..rootsys import RootSystem
from ..weyl import DEFAULT_CAP, SubgroupSpec, subgroup_order_bound
from .base import DEFAULT_MEMORY_BUDGET, ConjugacyOracle, ProgressReporter
from .exhaustive import ExhaustiveOracle
from .orbit import NegOrbitOracle


LOGGER = logging.getLogger(__name__)

AUTO = "auto"

ORACLES: dict[str, Type[ConjugacyOracle]] = {
    ExhaustiveOracle.name: ExhaustiveOracle,
    NegOrbitOracle.name: NegOrbitOracle,
}

ALIASES = {"orbit": NegOrbitOracle.name}


def get_oracle(name: str) -> Type[ConjugacyOracle]:
    key = name.lower()
    try:
        return ORACLES[ALIASES.get(key, key)]
    except KeyError as exc:
        available = ", ".join(sorted(ORACLES))
        raise ValueError(f"Unknown mode '{name}'. Available modes: {available}") from exc


def resolve_mode(system: RootSystem, spec: SubgroupSpec, mode: str, cap: int = DEFAULT_CAP) -> str:
    """Map ``auto`` to ``exhaustive`` when the subgroup fits the cap, else ``neg_orbit``."""

    if mode.lower() != AUTO:
        return get_oracle(mode).name
    bound = subgroup_order_bound(system, spec)
    chosen = ExhaustiveOracle.name if bound <= cap else NegOrbitOracle.name
    LOGGER.info("Mode auto for %s (%s): order bound %d, cap %d -> %s", system.diagram, spec, bound, cap, chosen)
    return chosen


__all__ = [
    "ALIASES",
    "AUTO",
    "ConjugacyOracle",
    "DEFAULT_MEMORY_BUDGET",
    "ExhaustiveOracle",
    "NegOrbitOracle",
    "ORACLES",
    "ProgressReporter",
    "get_oracle",
    "resolve_mode",
]
