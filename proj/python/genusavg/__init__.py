"""Exact Siegel-Weil genus averages of positive-definite ternary forms."""

from ._genusavg import (
    GenusAvgError,
    class_number,
    formula,
    genus_avg,
    hurwitz,
    local_density,
    representation_count,
    semi_oracle,
    set_depth_cap,
    verify,
    watson_chain,
)

__all__ = [
    "GenusAvgError",
    "class_number",
    "formula",
    "genus_avg",
    "hurwitz",
    "local_density",
    "representation_count",
    "semi_oracle",
    "set_depth_cap",
    "verify",
    "watson_chain",
]
