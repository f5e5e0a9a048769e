"""Symmetric norms, finite Dirichlet forms and derivations, with numerical
verification of Leibniz-type inequalities for centred seminorms."""

__version__ = "0.1.0"

from .norms import (  # noqa: E402
    KyFan, NormSpec, P, SumAugmented, decompose_in_dual_ball, dual_eval,
    extreme_points_dual_kfan, is_doubly_stochastic, is_substochastic,
    is_weakly_majorized, norm_eval, parse_norm, sort_abs_desc,
)
from .probability import DiscreteMeasure, expectation, sigma_p  # noqa: E402
from .records import Report, SlackRecord  # noqa: E402

__all__ = [
    "KyFan", "NormSpec", "P", "SumAugmented", "decompose_in_dual_ball",
    "dual_eval", "extreme_points_dual_kfan", "is_doubly_stochastic",
    "is_substochastic", "is_weakly_majorized", "norm_eval", "parse_norm",
    "sort_abs_desc", "DiscreteMeasure", "expectation", "sigma_p", "Report",
    "SlackRecord", "__version__",
]
