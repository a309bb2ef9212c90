"""Run configuration: which modality, which usage system, and which restrictions."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .grades import Modality, make_instance

DEFAULT_FUEL = 10**6
DEFAULT_SEED = 20240917


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Restrictions:
    """Side conditions on eliminator annotations.

    ``erased_matches`` governs both ``prodrec`` with ``r = 0`` and ``unitrec``
    with ``p = 0``; ``emptyrec_zero`` governs ``emptyrec`` with ``p = 0``.
    ``pisigma`` is ``"any"`` or ``"equal"`` (require ``p = q`` on Π/Σ).
    """

    erased_matches: bool = True
    emptyrec_zero: bool = True
    pisigma: str = "any"

    def prodrec_ok(self, m: Modality, r: str) -> bool:
        return self.erased_matches or r != m.zero

    def unitrec_ok(self, m: Modality, p: str) -> bool:
        return self.erased_matches or p != m.zero

    def emptyrec_ok(self, m: Modality, p: str) -> bool:
        return self.emptyrec_zero or p != m.zero

    def pisigma_ok(self, p: str, q: str) -> bool:
        return self.pisigma == "any" or p == q


@dataclass(frozen=True)
class Config:
    modality: Modality
    moded: bool = False
    strict: bool = False
    restrictions: Restrictions = field(default_factory=Restrictions)
    fuel: int = DEFAULT_FUEL
    seed: int = DEFAULT_SEED
    output: str = "text"

    def __post_init__(self):
        if self.moded and not self.modality.has_well_behaved_zero:
            raise ConfigError(f"the moded system needs a well-behaved zero; {self.modality.name} has none")
        if self.restrictions.pisigma not in ("any", "equal"):
            raise ConfigError(f"pisigma relation must be 'any' or 'equal', not {self.restrictions.pisigma!r}")
        if self.fuel <= 0:
            raise ConfigError("fuel must be positive")
        if self.output not in ("text", "json"):
            raise ConfigError(f"unknown output format {self.output!r}")

    @property
    def m(self) -> Modality:
        return self.modality

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)


def make_config(modality: str | Modality = "erasure", *, nr: str = "good", moded: bool = False,
                strict: bool = False, erased_matches: bool = True, emptyrec_zero: bool = True,
                pisigma: str = "any", fuel: int | None = None, seed: int = DEFAULT_SEED,
                output: str = "text") -> Config:
    m = make_instance(modality) if isinstance(modality, str) else modality
    if nr == "bad":
        if m.name != "linear":
            raise ConfigError("the alternative nr table is only available for the linear instance")
        m = make_instance("linear-bad-nr")
    elif nr != "good":
        raise ConfigError(f"nr must be 'good' or 'bad', not {nr!r}")
    if fuel is None:
        env = os.environ.get("GTT_FUEL")
        try:
            fuel = int(env) if env else DEFAULT_FUEL
        except ValueError:
            raise ConfigError(f"GTT_FUEL must be an integer, not {env!r}") from None
    return Config(m, moded, strict, Restrictions(erased_matches, emptyrec_zero, pisigma),
                  fuel, seed, output)
