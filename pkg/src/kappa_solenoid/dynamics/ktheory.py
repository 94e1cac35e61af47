"""K-groups of U_a for rational a = m / l."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidParameter


@dataclass(frozen=True)
class KGroups:
    k0_rank: int
    k1_rank: int
    k1_torsion: int

    @property
    def k0(self) -> str:
        return "Z" if self.k0_rank == 1 else f"Z^{self.k0_rank}"

    @property
    def k1(self) -> str:
        free = "Z" if self.k1_rank == 1 else f"Z^{self.k1_rank}"
        # Z_1 is the trivial group
        if self.k1_torsion == 1:
            return free
        return f"{free} + Z_{self.k1_torsion}"


def k_groups(m: int, l: int) -> KGroups:
    """K_0 = Z and K_1 = Z + Z_|l-m| for a = m/l in lowest terms."""
    if m < 1 or l < 1:
        raise InvalidParameter("m and l must be positive integers")
    if math.gcd(m, l) != 1:
        raise InvalidParameter(f"{m}/{l} is not in lowest terms")
    if m == l:
        raise InvalidParameter("a=1 excluded")
    return KGroups(1, 1, abs(l - m))
