"""Z_M-linear index codes on multidimensional QAM constellations.

Thin Python surface over the C++ core: code construction, encoding and
decoding with receiver side information, exact minimum-distance and gain
evaluation, exhaustive generator search, seeded channel simulation, and the
capacity-limit SNR. Rich results (gain reports, search output, simulation
curves) come back as plain dicts mirroring the CLI's JSON.
"""

from ._core import (
    BudgetError,
    IndexCode,
    InvalidCodeError,
    brute_force_distance,
    capacity_min_snr_db,
    decode,
    default_enumeration_cap,
    det_mod,
    encode,
    gamma,
    is_unit,
    make_circulant,
    make_general,
    orbit_representatives,
    rng_algorithm_name,
    search_circulant,
    search_general,
    simulate,
    subcode_points,
    subset_distance,
    symmetric_mod,
    transmit_offset,
)

__all__ = [
    "BudgetError",
    "IndexCode",
    "InvalidCodeError",
    "brute_force_distance",
    "capacity_min_snr_db",
    "decode",
    "default_enumeration_cap",
    "det_mod",
    "encode",
    "gamma",
    "is_unit",
    "make_circulant",
    "make_general",
    "orbit_representatives",
    "rng_algorithm_name",
    "search_circulant",
    "search_general",
    "simulate",
    "subcode_points",
    "subset_distance",
    "symmetric_mod",
    "transmit_offset",
]
