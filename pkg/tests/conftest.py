"""Shared fixtures: the solar-array model and its probe walkthrough."""

from fractions import Fraction

import pytest

from possdiag.fixtures import load_model, load_observations
from possdiag.model import Endpoint, Manifestation, compose_problem

# The five probe results of the walkthrough, in the order they are taken.
PROBE_SEQUENCE = (
    Manifestation(Endpoint("bus", "out"), "DEG", Fraction(4, 5), present=True),
    Manifestation(Endpoint("bus", "out"), "ABS", Fraction(1), present=False),
    Manifestation(Endpoint("comp_0", "out"), "ONE", Fraction(1), present=False),
    Manifestation(Endpoint("comp_1", "out"), "ONE", Fraction(1), present=True),
    Manifestation(Endpoint("comp_2", "out"), "ZERO", Fraction(1), present=True),
)


@pytest.fixture(scope="session")
def solar_model():
    return load_model()


@pytest.fixture(scope="session")
def initial_problem(solar_model):
    observations = load_observations("solar_array_initial.pdo", solar_model.scale)
    return compose_problem(solar_model, observations)


@pytest.fixture(scope="session")
def probed_problem(initial_problem):
    problem = initial_problem
    for probe in PROBE_SEQUENCE:
        problem = problem.with_observation(probe)
    return problem
