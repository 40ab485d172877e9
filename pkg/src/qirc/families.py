"""Named tripartite state families addressable from the CLI and the checks.

Family strings: ``bell-spectator``, ``bell-ac``, ``coherent-spectator``,
``ghz``, ``w``, ``werner:<p>``, ``classical:<d>``, ``gibbs:<beta>:<J>``.
"""

from __future__ import annotations

from . import states

FAMILY_NAMES = (
    "bell-spectator", "bell-ac", "coherent-spectator", "ghz", "w",
    "werner:<p>", "classical:<d>", "gibbs:<beta>:<J>",
)


def build(name: str) -> states.DensityMatrix:
    base, _, rest = name.partition(":")
    args = rest.split(":") if rest else []
    try:
        if base == "bell-spectator" and not args:
            return states.bell_spectator()
        if base == "bell-ac" and not args:
            return states.bell_ac()
        if base == "coherent-spectator" and not args:
            return states.coherent_spectator()
        if base == "ghz" and not args:
            return states.ghz()
        if base == "w" and not args:
            return states.w_state()
        if base == "werner" and len(args) == 1:
            return states.compose_product(states.werner(float(args[0])),
                                          states.maximally_mixed(2))
        if base == "classical" and len(args) == 1:
            return states.classical_correlated(int(args[0]))
        if base == "gibbs" and len(args) == 2:
            sz = states.SIGMA_Z
            return states.gibbs(sz, sz, sz, coupling=float(args[1]),
                                beta=float(args[0]))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad parameters for family {name!r}: {exc}") from exc
    raise ValueError(
        f"unknown family {name!r}; known families: {', '.join(FAMILY_NAMES)}")
