"""Annealed power schedule for directed mode.

Energy starts uniform and cools toward distance-proportional: with
temperature T = 0.5^(elapsed / half_life) the schedule exponent is
p = (1 - d) * (1 - T) + 0.5 * T for normalized distance d, and the havoc
multiplier is 2^(10p - 5), clamped to [2^-5, 2^5].  At elapsed 0 every seed
gets multiplier 1; fully cooled, the closest seeds get 32x and the farthest
1/32x.
"""

from __future__ import annotations

MULTIPLIER_MIN = 2.0**-5
MULTIPLIER_MAX = 2.0**5

MODE_DIRECTED = "directed"
MODE_COVERAGE = "coverage_only"


def energy_multiplier(norm_distance: float, elapsed: float, half_life: float) -> float:
    temperature = 0.5 ** (elapsed / half_life)
    p = (1.0 - norm_distance) * (1.0 - temperature) + 0.5 * temperature
    mult = 2.0 ** (10.0 * p - 5.0)
    return min(max(mult, MULTIPLIER_MIN), MULTIPLIER_MAX)


def assign_energy(seed, elapsed: float, config) -> int:
    """Havoc iterations granted to ``seed`` at campaign time ``elapsed``."""
    if config.mode == MODE_COVERAGE:
        return max(1, config.havoc_base)
    mult = energy_multiplier(
        seed.normalized_distance, elapsed, config.cooling_half_life
    )
    return max(1, round(config.havoc_base * mult))


def normalize_distances(queue) -> None:
    """Set normalized_distance on every seed, in place.

    Defined raw distances are min-max scaled to [0, 1]; a degenerate range
    maps every defined seed to 0.5, and undefined raw distances map to 1.0.
    """
    defined = [s.distance for s in queue if s.distance is not None]
    lo = min(defined) if defined else 0.0
    hi = max(defined) if defined else 0.0
    span = hi - lo
    for seed in queue:
        if seed.distance is None:
            seed.normalized_distance = 1.0
        elif span == 0.0:
            seed.normalized_distance = 0.5
        else:
            seed.normalized_distance = (seed.distance - lo) / span
