"""Hand-crafted CSV/JSON fixtures mirroring the simulation export formats."""

import json

import pytest


@pytest.fixture
def field_csv(tmp_path):
    """Cone-shaped field: C = 1 where t >= 0.5 * delta, ~0 outside.

    Includes a t = 0 column so log-log mode has something to drop.
    """
    deltas = range(1, 11)
    times = [0.5 * k for k in range(11)]
    lines = ["delta,t,value"]
    for d in deltas:
        for t in times:
            v = 1.0 if t >= 0.5 * d else 1e-8
            lines.append(f"{d},{t!r},{v!r}")
    path = tmp_path / "field.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def front_csv(tmp_path):
    """Front coinciding with the cone edge t* = 0.5 * delta."""
    lines = ["delta,t_star"]
    for d in range(1, 11):
        lines.append(f"{d},{0.5 * d!r}")
    path = tmp_path / "front.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def scaling_csv(tmp_path):
    lines = ["tau,delta,n,value"]
    for tau in (0.1, 1.0):
        for d in (20, 40):
            for n in (1000, 10000, 100000):
                v = 0.3 + 0.01 * d * tau + 5.0 / n
                lines.append(f"{tau!r},{d},{n},{v!r}")
    path = tmp_path / "scaling.csv"
    path.write_text("\n".join(lines) + "\n")
    return path


def write_spec(tmp_path, **kwargs):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(kwargs))
    return path
