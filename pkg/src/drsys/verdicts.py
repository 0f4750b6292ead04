"""Verdict value types shared by the wandering classifier and the symbolic
rules: witnesses for nonwandering points, certificates for wandering ones,
and the explicit Unknown outcome for sweeps that hit their caps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Witness:
    """z in sigma^n(U) & sigma^-k(sigma^k(U)) for a neighborhood U of x."""

    u_label: str
    U: frozenset
    n: int
    k: int
    z: object


@dataclass(frozen=True)
class SweepCertificate:
    """Exhaustive emptiness certificate for one neighborhood.

    n_closed/k_closed record how the infinite quantifiers were closed at
    sample scale (orbit death or cycle closure); bounds are the largest
    indices actually computed.
    """

    u_label: str
    U: frozenset
    rule: str
    n_bound: int
    k_bound: int


@dataclass(frozen=True)
class Nonwandering:
    witness: Optional[Witness]
    rule: str = "sweep"


@dataclass(frozen=True)
class Wandering:
    certificate: SweepCertificate
    rule: str = "sweep"


@dataclass(frozen=True)
class Unknown:
    n_max: int
    k_max: int
    reason: str = ""


@dataclass(frozen=True)
class WanderingVerdict:
    point: object
    status: object  # Nonwandering | Wandering | Unknown

    def is_nonwandering(self):
        return isinstance(self.status, Nonwandering)

    def is_wandering(self):
        return isinstance(self.status, Wandering)

    def is_unknown(self):
        return isinstance(self.status, Unknown)
