"""Exact thresholds checked by the experiments, with the tag each report row cites."""
from fractions import Fraction

# tag -> (value, what it bounds)
REGISTRY: dict[str, tuple[Fraction, str]] = {
    "soundness-limit-q2": (Fraction(65, 81), "small-good mass left to non-large agents by a random-like function, q=2"),
    "soundness-limit-q1": (Fraction(7, 8), "same constant for the binary alphabet"),
    "noise-floor-q2": (Fraction(1, 81), "minimum tuple mass of the noisy distribution, per unit of noise"),
    "dummy-cap": (Fraction(1), "dummy-good total, per unit of delta"),
    "gap-large-value": (Fraction(32, 27), "GAP large-good value scale c"),
    "gap-poly-min": (Fraction(-48, 81), "minimum of x^4 - c x on [0, 1]"),
    "gap-yes": (Fraction(145, 81), "GAP welfare of the YES allocation, before the -eps term"),
    "gap-no": (Fraction(129, 81), "GAP welfare ceiling in the NO case, before the +5eps term"),
    "budget-no": (Fraction(227, 81), "budgeted welfare ceiling in the NO case, before the +eps term"),
    "nash-ratio-cubed": (Fraction(81, 65), "cube of the Nash welfare hardness ratio"),
    "budget-ratio": (Fraction(243, 227), "budgeted allocation hardness ratio"),
    "gap-ratio": (Fraction(145, 129), "GAP hardness ratio"),
    "prior-nash-ratio-squared": (Fraction(8, 7), "square of the earlier Nash welfare bound"),
    "prior-budget-ratio": (Fraction(16, 15), "earlier budgeted allocation bound"),
    "prior-gap-ratio": (Fraction(11, 10), "earlier GAP bound"),
}

# published four-digit decimals of the three hardness ratios
TABLE_DECIMALS = {"nash": 1.0761, "budget": 1.0705, "gap": 1.1240}

INFORMATIONAL = "informational"

# tags for checks whose bound is structural rather than a single constant
CHECK_TAGS = {
    "balanced-pairwise": "one- and two-coordinate marginals are uniform; some coordinate is zero",
    "efron-stein": "components reconstruct f, are orthogonal and satisfy Parseval",
    "low-degree-influence-budget": "low-degree influences sum to at most d Var[f]",
    "completeness-floor": "chi allocation utility floor (1 - eps) / 3^(R-1) per agent",
    "small-mass": "small goods carry total value one",
    "dictator-completeness": "dictator allocations hand out all large goods and maximize the soundness value",
    "low-influence-sampling": "random functions have small low-degree influence",
    "planted-labeling": "the planted labeling satisfies every edge",
    "equal-group-family": "membership in the equal-group instance family",
    "averaged-functions": "the NO-case ceiling equals its form through the averaged functions f_b",
    "solver-consistency": "reported optimum matches a recomputation of the objective",
}


def known_tag(tag: str) -> bool:
    return tag == INFORMATIONAL or tag in REGISTRY or tag in CHECK_TAGS


def value(tag: str) -> Fraction:
    return REGISTRY[tag][0]


SOUNDNESS_Q2 = value("soundness-limit-q2")
GAP_C = value("gap-large-value")
GAP_POLY_MIN = value("gap-poly-min")
