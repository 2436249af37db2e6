"""Physical constants in SI units.

Every formula in the package takes its c, G and hbar from a
:class:`PhysicalConstants` instance instead of hard-coded literals, so tests
can run with exaggerated values (for example c = 1) without touching any
physics code.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import ConfigError

ENV_CONSTANTS_FILE = "GRAVCLOCK_CONSTANTS"


@dataclass(frozen=True)
class PhysicalConstants:
    """Speed of light (m/s), Newton constant (m^3 kg^-1 s^-2), hbar (J s)."""

    c: float = 299792458.0
    G: float = 6.67430e-11
    hbar: float = 1.054571817e-34

    def __post_init__(self) -> None:
        if self.c <= 0 or self.G <= 0 or self.hbar <= 0:
            raise ConfigError("physical constants must be strictly positive")


CODATA = PhysicalConstants()


def load_constants_file(path: str) -> PhysicalConstants:
    """Read constants overrides from a flat ``key = value`` text file.

    Recognized keys: ``c``, ``G``, ``hbar``.  Missing keys keep their CODATA
    defaults; unknown keys raise :class:`ConfigError`.
    """
    values = {"c": CODATA.c, "G": CODATA.G, "hbar": CODATA.hbar}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in values:
                raise ConfigError(f"{path}:{lineno}: unknown constant {key!r}")
            try:
                values[key] = float(text.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad float {text.strip()!r}") from exc
    return PhysicalConstants(**values)


def resolve_constants(path: str | None = None) -> PhysicalConstants:
    """Constants from an explicit file, else from $GRAVCLOCK_CONSTANTS, else CODATA."""
    if path is None:
        path = os.environ.get(ENV_CONSTANTS_FILE) or None
    if path is None:
        return CODATA
    return load_constants_file(path)
