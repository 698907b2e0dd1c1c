from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNMET = "hypotheses-unmet"


EXIT_CODES = {Status.HOLDS: 0, Status.FAILS: 1, Status.UNMET: 2}


@dataclass
class Verdict:
    """Three-valued outcome of a lemma check.

    ``certificate`` holds plain lists and ints only, so every verdict can be
    recomputed from the raw tables it names.
    """

    status: Status
    reason: str = ""
    certificate: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        return {"status": self.status.value, "reason": self.reason, "certificate": self.certificate}


def holds(reason="", **cert) -> Verdict:
    return Verdict(Status.HOLDS, reason, cert)


def fails(reason, **cert) -> Verdict:
    return Verdict(Status.FAILS, reason, cert)


def unmet(reason, **cert) -> Verdict:
    return Verdict(Status.UNMET, reason, cert)
