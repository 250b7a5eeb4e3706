"""
Tests for utils/json_io.py and utils/csv_export.py
"""
import json
from fractions import Fraction

import pytest

from conelab.models.graph import MetricGraph
from conelab.services.electrify import cone_off
from conelab.utils.csv_export import format_cell, table_to_csv, write_csv
from conelab.utils.errors import SchemaError
from conelab.utils.json_io import (
    dump_coned_graph,
    dumps_canonical,
    load_coned_graph,
    load_graph,
    load_group,
    parse_model,
    read_document,
    to_jsonable,
    write_json,
)


class TestCanonicalJson:
    """Tests for to_jsonable and dumps_canonical."""

    def test_sorted_keys_and_trailing_newline(self):
        text = dumps_canonical({"b": Fraction(1, 2), "a": [1]})

        assert text == '{\n  "a": [\n    1\n  ],\n  "b": "1/2"\n}\n'

    def test_graph_dumps_with_aliases(self, weighted_path):
        """Test a dumped graph uses 'vertices' and p/q lengths."""
        data = to_jsonable(weighted_path)

        assert data["vertices"] == 4
        assert data["edges"][0] == [0, 1, "1/2"]
        assert load_graph(data).edges == weighted_path.edges

    def test_write_json_is_deterministic(self, tmp_path, weighted_path):
        first = write_json(tmp_path / "a" / "g.json", weighted_path)
        second = write_json(tmp_path / "b" / "g.json", load_graph(first))

        assert first.read_bytes() == second.read_bytes()


class TestReading:
    """Tests for read_document, parse_model and the loaders."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError):
            read_document(tmp_path / "nope.json")

    def test_invalid_json(self, tmp_path):
        target = tmp_path / "bad.json"
        target.write_text("{not json", encoding="utf-8")

        with pytest.raises(SchemaError):
            read_document(target)

    def test_non_object(self, tmp_path):
        target = tmp_path / "list.json"
        target.write_text("[1, 2]", encoding="utf-8")

        with pytest.raises(SchemaError):
            read_document(target)

    def test_parse_model_reports_schema_error(self):
        with pytest.raises(SchemaError):
            parse_model(MetricGraph, {"vertices": -1})

    def test_float_lengths_rejected(self):
        with pytest.raises(SchemaError):
            load_graph({"vertices": 2, "edges": [[0, 1, 0.5]]})

    def test_load_graph_from_path(self, tmp_path):
        target = tmp_path / "g.json"
        target.write_text(json.dumps({"vertices": 3, "edges": [[0, 1], [1, 2, "3/2"]]}), encoding="utf-8")
        graph = load_graph(target)

        assert graph.vertex_count == 3
        assert graph.edges[1] == (1, 2, Fraction(3, 2))

    def test_load_group(self):
        group = load_group({"kind": "free_group", "rank": 2})

        assert group.kind == "free_group"

    def test_coned_graph_roundtrip(self, path5):
        """Test the extended graph is rebuilt from the base and its cones."""
        coned = cone_off(path5, {"ends": [0, 4]}, measure=False)
        reloaded = load_coned_graph(dump_coned_graph(coned))

        assert reloaded.cone_vertices == {"ends": 5}
        assert reloaded.extended.edges == coned.extended.edges

    def test_coned_graph_needs_cone_ids(self, path5):
        data = to_jsonable(path5)
        data["cones"] = [{"members": [0, 4]}]

        with pytest.raises(SchemaError):
            load_coned_graph(data)


class TestCsvExport:
    """Tests for format_cell and table_to_csv."""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (None, ""),
            (True, "true"),
            (False, "false"),
            (Fraction(3, 4), "3/4"),
            (Fraction(2), "2"),
            ([1, Fraction(1, 2)], "1 1/2"),
            ("x", "x"),
        ],
    )
    def test_format_cell(self, value, expected):
        assert format_cell(value) == expected

    def test_table_uses_unix_newlines(self):
        text = table_to_csv(["u", "d"], [(0, Fraction(1, 2)), (1, None)])

        assert text == "u,d\n0,1/2\n1,\n"

    def test_write_csv_creates_parents(self, tmp_path):
        target = write_csv(tmp_path / "deep" / "t.csv", ["a"], [(1,)])

        assert target.read_text(encoding="utf-8") == "a\n1\n"
