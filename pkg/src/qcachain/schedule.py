"""Pulse schedules: time-ordered automaton steps and uniform rotations.

Text format, executed top to bottom::

    N 6
    P Z 0.25
    T
    P Y 3.141592653589793

Angles are written with ``repr`` so reading back is bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

AXES = ("X", "Y", "Z")


class ScheduleFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


@dataclass(frozen=True)
class StepT:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Pulse:
    """Uniform rotation ``prod_i exp(i angle/2 A_i)``."""

    axis: str
    angle: float

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"pulse axis must be one of {AXES}, got {self.axis!r}")
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    def __str__(self) -> str:
        return f"P {self.axis} {self.angle!r}"


Item = Union[StepT, Pulse]
STEP = StepT()


def normalize_angle(angle: float) -> float:
    # exp(i a/2 P) has period 4*pi; keep the sign as given
    return math.fmod(float(angle), 4 * math.pi)


@dataclass(frozen=True)
class PulseSchedule:
    n_sites: int
    items: tuple[Item, ...] = ()

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("schedule needs at least one site")
        object.__setattr__(self, "items", tuple(self.items))

    @property
    def t_steps(self) -> int:
        return sum(1 for item in self.items if isinstance(item, StepT))

    @property
    def pulses(self) -> list[Pulse]:
        return [item for item in self.items if isinstance(item, Pulse)]

    def __len__(self) -> int:
        return len(self.items)

    def __add__(self, other: "PulseSchedule") -> "PulseSchedule":
        if other.n_sites != self.n_sites:
            raise ValueError(f"cannot concatenate schedules on {self.n_sites} and {other.n_sites} sites")
        return PulseSchedule(self.n_sites, self.items + other.items)

    @classmethod
    def concat(cls, n_sites: int, parts: Iterable["PulseSchedule"]) -> "PulseSchedule":
        out = cls(n_sites)
        for part in parts:
            out = out + part
        return out

    def t_runs(self) -> list[int]:
        """Lengths of the maximal runs of consecutive ``T`` steps, zero-length runs included."""
        runs = [0]
        for item in self.items:
            if isinstance(item, StepT):
                runs[-1] += 1
            else:
                runs.append(0)
        return runs

    def to_text(self) -> str:
        lines = [f"N {self.n_sites}"] + [str(item) for item in self.items]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PulseSchedule":
        n_sites = None
        items: list[Item] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if n_sites is None:
                if parts[0] != "N" or len(parts) != 2:
                    raise ScheduleFormatError("expected header 'N <sites>'", lineno)
                try:
                    n_sites = int(parts[1])
                except ValueError:
                    raise ScheduleFormatError(f"bad site count {parts[1]!r}", lineno) from None
                if n_sites < 1:
                    raise ScheduleFormatError("site count must be positive", lineno)
                continue
            if parts == ["T"]:
                items.append(STEP)
            elif parts[0] == "P" and len(parts) == 3 and parts[1] in AXES:
                try:
                    angle = float(parts[2])
                except ValueError:
                    raise ScheduleFormatError(f"bad angle {parts[2]!r}", lineno) from None
                items.append(Pulse(parts[1], angle))
            else:
                raise ScheduleFormatError(f"unrecognised item {line!r}", lineno)
        if n_sites is None:
            raise ScheduleFormatError("missing header 'N <sites>'")
        return cls(n_sites, tuple(items))
