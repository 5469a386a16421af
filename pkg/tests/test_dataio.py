"""CSV ingestion and emission."""

import numpy as np
import pytest

from selrtest import Dataset
from selrtest.dataio import ingest_csv, write_csv
from selrtest.errors import EmptyFile, MissingColumn, ParseError


def test_roundtrip(tmp_path, rng):
    data = Dataset(rng.random(25), rng.normal(size=(25, 2)), rng.normal(size=25))
    path = tmp_path / "d.csv"
    write_csv(data, str(path))
    back = ingest_csv(str(path))
    np.testing.assert_array_equal(back.u, data.u)
    np.testing.assert_array_equal(back.x, data.x)
    np.testing.assert_array_equal(back.y, data.y)


def test_header_order_free(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("y,x1,u\n1.0,2.0,0.5\n3.0,4.0,0.7\n")
    data = ingest_csv(str(path))
    np.testing.assert_array_equal(data.u, [0.5, 0.7])
    np.testing.assert_array_equal(data.y, [1.0, 3.0])
    np.testing.assert_array_equal(data.x[:, 0], [2.0, 4.0])


def test_missing_columns(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("u,y\n0.5,1.0\n")
    with pytest.raises(MissingColumn):
        ingest_csv(str(path))
    path.write_text("u,x2,y\n0.5,1.0,1.0\n")
    with pytest.raises(MissingColumn):
        ingest_csv(str(path))  # covariates must be contiguous x1..xp
    path.write_text("x1,y\n1.0,1.0\n")
    with pytest.raises(MissingColumn):
        ingest_csv(str(path))


def test_bad_rows_reported_with_line_numbers(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("u,x1,y\n0.5,1.0,1.0\n0.6,oops,2.0\n0.7,1.0,inf\n")
    with pytest.raises(ParseError) as err:
        ingest_csv(str(path))
    assert "3" in str(err.value) and "4" in str(err.value)


def test_empty_inputs(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("")
    with pytest.raises(EmptyFile):
        ingest_csv(str(path))
    path.write_text("u,x1,y\n")
    with pytest.raises(EmptyFile):
        ingest_csv(str(path))
    with pytest.raises(EmptyFile):
        ingest_csv(str(tmp_path / "missing.csv"))


def test_blank_lines_skipped(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("u,x1,y\n0.5,1.0,1.0\n\n0.7,2.0,3.0\n")
    assert ingest_csv(str(path)).n == 2
