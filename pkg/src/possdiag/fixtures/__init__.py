"""Bundled example models and observation sets."""

from __future__ import annotations

from importlib import resources

from ..dsl import parse_model, parse_observations
from ..model import ModelError, Observations, SystemModel
from ..scale import Scale

__all__ = ["fixture_path", "fixture_text", "load_model", "load_observations"]


def fixture_path(name: str) -> str:
    return str(resources.files(__package__) / name)


def fixture_text(name: str) -> str:
    return (resources.files(__package__) / name).read_text()


def load_model(name: str = "solar_array.pdm") -> SystemModel:
    model, diags = parse_model(fixture_text(name), file=name)
    errors = [d for d in diags if d.severity == "error"]
    if model is None or errors:
        raise ModelError(f"fixture {name!r} does not parse: {errors[0]}")
    return model


def load_observations(
    name: str, scale: Scale | None = None
) -> Observations:
    if scale is None:
        scale = load_model().scale
    observations, diags = parse_observations(fixture_text(name), scale, file=name)
    errors = [d for d in diags if d.severity == "error"]
    if observations is None or errors:
        raise ModelError(f"fixture {name!r} does not parse: {errors[0]}")
    return observations
