from .bohr import aperiodicity_witness, bohr_embed, orbit_periods
from .classify import ClassificationVerdict, classify
from .entropy import EntropyReport, GrowthTable, entropy, entropy_growth_check, find_roots
from .ktheory import KGroups, k_groups
from .periodic import (
    Character,
    circulant_system,
    enumerate_characters,
    fixed_count,
    least_period_count,
    mobius,
    satisfies_recursion,
    shift_orbits,
)
