import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrspread.fields import (
    CorrelationField,
    fmt,
    read_curve,
    read_field,
    write_curve,
    write_field,
)


def sample_field(rng):
    deltas = np.arange(1, 8)
    times = np.linspace(0.0, 1.0, 5)
    values = rng.normal(size=(7, 5))
    return CorrelationField(deltas, times, values, "xx_connected",
                            {"alpha": 0.75, "N": 101})


class TestFmt:
    @settings(max_examples=200, deadline=None)
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_fmt_roundtrips_exactly(self, x):
        assert float(fmt(x)) == x

    def test_plain_decimal(self):
        assert fmt(0.5) == "0.5"
        assert fmt(1.0 / 3.0) == "0.33333333333333331"


class TestCorrelationField:
    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="shape"):
            CorrelationField([1, 2], [0.0, 1.0], np.zeros((3, 2)), "x")

    def test_requires_increasing_axes(self):
        with pytest.raises(ValueError):
            CorrelationField([2, 1], [0.0, 1.0], np.zeros((2, 2)), "x")
        with pytest.raises(ValueError):
            CorrelationField([1, 2], [1.0, 0.0], np.zeros((2, 2)), "x")

    def test_rejects_non_finite(self):
        v = np.zeros((2, 2))
        v[0, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            CorrelationField([1, 2], [0.0, 1.0], v, "x")

    def test_row_lookup(self, rng):
        field = sample_field(rng)
        assert np.array_equal(field.row(3), field.values[2])
        with pytest.raises(KeyError):
            field.row(99)


class TestFieldIO:
    def test_roundtrip_bit_exact(self, rng, tmp_path):
        field = sample_field(rng)
        path = write_field(field, tmp_path / "field.csv")
        back = read_field(path)
        assert np.array_equal(back.distances, field.distances)
        assert np.array_equal(back.times, field.times)
        assert np.array_equal(back.values, field.values)
        assert back.observable == field.observable
        assert back.metadata["alpha"] == 0.75

    def test_rewrite_is_byte_identical(self, rng, tmp_path):
        field = sample_field(rng)
        p1 = write_field(field, tmp_path / "a.csv")
        p2 = write_field(field, tmp_path / "b.csv")
        assert p1.read_bytes() == p2.read_bytes()

    def test_sidecar_written(self, rng, tmp_path):
        field = sample_field(rng)
        write_field(field, tmp_path / "field.csv")
        assert (tmp_path / "field.json").exists()

    def test_read_rejects_bad_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b,c\n1,0.0,0.5\n")
        with pytest.raises(ValueError, match="header"):
            read_field(p)

    def test_read_rejects_empty_body(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("delta,t,value\n")
        with pytest.raises(ValueError, match="no data"):
            read_field(p)


class TestCurveIO:
    def test_roundtrip(self, tmp_path):
        t = np.linspace(0.0, 2.0, 9)
        p = np.sin(t) ** 2
        path = write_curve(t, p, tmp_path / "curve.csv", metadata={"delta": 10})
        t2, p2, meta = read_curve(path)
        assert np.array_equal(t2, t)
        assert np.array_equal(p2, p)
        assert meta["delta"] == 10

    def test_read_rejects_bad_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("time,prob\n0,0\n")
        with pytest.raises(ValueError, match="header"):
            read_curve(p)
