import math

import numpy as np
import pytest

from gravclock.constants import PhysicalConstants


@pytest.fixture(scope="session")
def unit_constants():
    """Exaggerated units for oracle runs: c = G = hbar = 1."""
    return PhysicalConstants(c=1.0, G=1.0, hbar=1.0)


def haar_state(rng, dim):
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return amps / np.linalg.norm(amps)


def unfold_monotone(folded):
    """Recover a smoothly increasing phase from arccos-folded samples.

    Linear prediction from the two previous samples disambiguates the fold
    branch; valid when the true phase advances by less than pi per step with
    slowly varying increments (exact here: the fitted phases are linear).
    """
    phases = [float(folded[0])]
    for f in folded[1:]:
        prev = phases[-1]
        predict = 2.0 * prev - phases[-2] if len(phases) >= 2 else prev
        base = 2.0 * math.pi * math.floor(predict / (2.0 * math.pi))
        candidates = [
            k + s * f
            for k in (base - 2.0 * math.pi, base, base + 2.0 * math.pi)
            for s in (1.0, -1.0)
        ]
        phases.append(min(candidates, key=lambda c: abs(c - predict)))
    return np.asarray(phases)
