"""Shared fixtures for the unit and acceptance suites.

The acceptance tests additionally cache their expensive optimization
results under ``tests/_artifacts`` (see ``acceptance_lib.ResultCache``);
deleting that directory forces a full recompute.
"""
import numpy as np
import pytest

from jcqoc import Constraints, Couplings, LatticeConfig, build_problem


@pytest.fixture(scope="session")
def paper_problem():
    """The standard preparation task: (g, J) from (0, 0.5) to (1, 0.02)."""
    return build_problem(LatticeConfig(n_sites=4, n_excitations=4),
                         Couplings(0.0, 0.5), Couplings(1.0, 0.02),
                         Constraints(g_max=2.0, j_max=2.0),
                         total_time=3.30 * np.pi)
