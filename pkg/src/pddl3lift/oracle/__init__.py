"""Brute-force verification: plan enumeration, regression checks, fuzzing."""

from .equivalence import EquivalenceReport, check_compiler_equivalence
from .regcheck import RegressionReport, check_regression_exhaustive, sample_formulas
from .plans import PlanSet, enumerate_valid_plans

__all__ = ['EquivalenceReport', 'check_compiler_equivalence', 'RegressionReport', 'check_regression_exhaustive', 'sample_formulas',
           'PlanSet', 'enumerate_valid_plans']
