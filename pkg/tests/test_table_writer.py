"""Tests for table serialization"""
import io
import json

import pytest

from exceptions import OutputError, ValidationError
from services.experiments import SweepTable
from services.table_writer import TableWriterService


@pytest.fixture
def writer():
    return TableWriterService()


@pytest.fixture
def table():
    return SweepTable(
        columns={"gamma": [0.0, 0.1, 0.2], "p11": [0.5, 1 / 3, -0.0]},
        metadata={"version": "1.0.0", "spec": {"kappa": 0.26, "figure_id": "fig3bcd"}},
    )


class TestCsv:
    """Test CSV output"""

    def test_layout(self, writer, table):
        """Test metadata comments, header row and one line per row"""
        lines = writer.render(table, "csv").splitlines()
        assert lines[0] == '# version: "1.0.0"'
        assert lines[1] == '# spec: {"figure_id": "fig3bcd", "kappa": 0.26}'
        assert lines[2] == "gamma,p11"
        assert lines[3] == "0,0.5"
        assert len(lines) == 6

    def test_full_precision(self, writer, table):
        """Test floats are written with 17 significant digits"""
        text = writer.render(table, "csv")
        assert "0.33333333333333331" in text

    def test_empty_table(self, writer):
        """Test a table without rows writes only metadata and the header"""
        empty = SweepTable(columns={"a": [], "b": []}, metadata={"n": 0})
        assert writer.render(empty, "csv") == "# n: 0\na,b\n"

    def test_read_back(self, writer, table, tmp_path):
        """Test values and metadata survive a write/read cycle exactly"""
        path = tmp_path / "table.csv"
        writer.write_table(table, "csv", path)
        loaded = writer.read_table(path)
        assert loaded.columns == table.columns
        assert loaded.metadata == table.metadata


class TestJson:
    """Test JSON output"""

    def test_structure(self, writer, table):
        """Test metadata and columns objects"""
        payload = json.loads(writer.render(table, "json"))
        assert payload["metadata"] == table.metadata
        assert payload["columns"]["p11"][1] == 1 / 3
        assert list(payload["columns"]) == ["gamma", "p11"]

    def test_read_back(self, writer, table, tmp_path):
        """Test a JSON file loads into an equal table"""
        path = tmp_path / "table.json"
        writer.write_table(table, "json", path)
        assert writer.read_table(path) == table


class TestDestinations:
    """Test where output goes and how failures surface"""

    def test_stream(self, writer, table):
        """Test writing to an open text stream"""
        stream = io.StringIO()
        writer.write_table(table, "csv", stream)
        assert stream.getvalue() == writer.render(table, "csv")

    def test_byte_identical(self, writer, table, tmp_path):
        """Test two writes of the same table give identical bytes"""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        writer.write_table(table, "csv", first)
        writer.write_table(table, "csv", second)
        assert first.read_bytes() == second.read_bytes()

    def test_unwritable(self, writer, table, tmp_path):
        """Test a missing directory raises OutputError naming the path"""
        target = tmp_path / "missing" / "out.csv"
        with pytest.raises(OutputError, match="out.csv"):
            writer.write_table(table, "csv", target)

    def test_unknown_format(self, writer, table):
        """Test unsupported formats are rejected"""
        with pytest.raises(ValidationError, match="Unsupported format"):
            writer.render(table, "xlsx")

    def test_missing_file(self, writer, tmp_path):
        """Test reading a missing file raises OutputError"""
        with pytest.raises(OutputError):
            writer.read_table(tmp_path / "nope.csv")
