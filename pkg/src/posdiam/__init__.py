"""Positive diameters of finite abelian groups: exhaustive search, closed forms,
extremal constructions and a verification harness."""

__version__ = "0.1.0"

from .groups import BudgetExceeded, GroupType, Subgroup, make_group
from .sets import INF, ElementSet, bounded_generation, diameter, length_table, period
from .oracle import SearchBudget, s_oracle, t_oracle
from .formulas import FormulaResult, diam_formula, s_formula, t_formula

__all__ = [
    "__version__",
    "BudgetExceeded",
    "GroupType",
    "Subgroup",
    "make_group",
    "INF",
    "ElementSet",
    "bounded_generation",
    "diameter",
    "length_table",
    "period",
    "SearchBudget",
    "s_oracle",
    "t_oracle",
    "FormulaResult",
    "diam_formula",
    "s_formula",
    "t_formula",
]
