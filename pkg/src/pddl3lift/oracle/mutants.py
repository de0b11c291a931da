"""Deliberately broken regression operators used to show the checks have teeth."""

from __future__ import annotations

from typing import Callable, Dict

from ..logic import Formula
from ..model import ActionSchema, TypeHierarchy
from ..regression import regress_with


def drop_persistence(phi: Formula, a: ActionSchema, types: TypeHierarchy = None) -> Formula:
    """Regression that forgets atoms can persist: f becomes gamma(f) only."""
    return regress_with(phi, a, lambda f, add, dele: add, types)


MUTANTS: Dict[str, Callable] = {'drop-persistence': drop_persistence}
