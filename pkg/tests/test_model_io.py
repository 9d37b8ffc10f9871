import csv
import io
import json
import math

import pytest

from netrisk import engine, model_io


def dump(raw: dict) -> bytes:
    return json.dumps(raw).encode()


def codes(result) -> set[str]:
    return {d.code for d in result.diagnostics}


def find_hazard(raw, event, area):
    return next(
        h
        for h in raw["hazards"]
        if h["event_type_id"] == event and h["area_id"] == area
    )


def find_fragility(raw, component, event):
    return next(
        f
        for f in raw["fragilities"]
        if f["component_id"] == component and f["event_type_id"] == event
    )


class TestLoadModel:
    def test_bundled_fixture_loads_clean(self, model_bytes):
        result = model_io.load_model(model_bytes)
        assert result.ok
        assert result.errors() == []
        assert len(result.diagnostics) == 0

    def test_syntax_error_gives_single_parse_diagnostic(self):
        result = model_io.load_model(b'{"metadata": ')
        assert not result.ok
        assert len(result.diagnostics) == 1
        diag = result.diagnostics[0]
        assert diag.code == "parse_error"
        assert "line" in diag.path and "column" in diag.path

    def test_non_object_document_rejected(self):
        result = model_io.load_model(b"[1, 2]")
        assert not result.ok
        assert codes(result) == {"document_not_object"}

    def test_validation_collects_multiple_errors(self, model_dict):
        model_dict["metadata"]["version"] = "99"
        model_dict["components"][0]["area_id"] = "mars"
        find_hazard(model_dict, "seism", "upper_valley")["exceedance"][0] = 1.7
        result = model_io.load_model(dump(model_dict))
        assert not result.ok
        assert {
            "version_unsupported",
            "component_unknown_area",
            "exceedance_out_of_range",
        } <= codes(result)

    def test_diagnostics_carry_paths(self, model_dict):
        find_hazard(model_dict, "seism", "upper_valley")["intensities"] = [0.2, 0.1]
        result = model_io.load_model(dump(model_dict))
        bad = [d for d in result.diagnostics if d.code == "grid_not_increasing"]
        assert bad and "$.hazards[0]" in bad[0].path


def mutate_missing_hazard(raw):
    raw["hazards"] = [
        h
        for h in raw["hazards"]
        if not (h["event_type_id"] == "flood" and h["area_id"] == "upper_valley")
    ]


def mutate_occurrence_length(raw):
    record = find_hazard(raw, "seism", "upper_valley")
    record["kind"] = "occurrence"
    record.pop("exceedance")
    record["occurrence"] = [0.01, 0.005]


def mutate_multi_line_component(raw):
    raw["nodes"].append("c_town")
    raw["lines"].append(
        {
            "id": "branch",
            "from_node": "b_town",
            "to_node": "c_town",
            "components": ["bridge_5"],
        }
    )


NEGATIVE_FIXTURES = [
    ("field_missing", lambda raw: raw.pop("metadata")),
    ("field_type", lambda raw: raw.update(areas="oops")),
    ("version_unsupported", lambda raw: raw["metadata"].update(version="99")),
    ("area_duplicate", lambda raw: raw["areas"].append("upper_valley")),
    ("event_duplicate", lambda raw: raw["event_types"].append("seism")),
    (
        "grid_too_short",
        lambda raw: find_hazard(raw, "flood", "upper_valley").update(
            intensities=[0.5], exceedance=[0.02]
        ),
    ),
    (
        "grid_value_invalid",
        lambda raw: find_hazard(raw, "flood", "upper_valley")["intensities"]
        .__setitem__(0, -0.5),
    ),
    (
        "grid_not_increasing",
        lambda raw: find_hazard(raw, "flood", "upper_valley")["intensities"]
        .__setitem__(1, 0.5),
    ),
    (
        "hazard_kind_invalid",
        lambda raw: find_hazard(raw, "seism", "upper_valley").update(kind="pdf"),
    ),
    (
        "exceedance_length_mismatch",
        lambda raw: find_hazard(raw, "seism", "upper_valley")["exceedance"].pop(),
    ),
    (
        "exceedance_out_of_range",
        lambda raw: find_hazard(raw, "seism", "upper_valley")["exceedance"]
        .__setitem__(0, 1.4),
    ),
    (
        "exceedance_not_monotone",
        lambda raw: find_hazard(raw, "seism", "upper_valley")["exceedance"]
        .__setitem__(1, 0.9),
    ),
    ("hazard_length_mismatch", mutate_occurrence_length),
    (
        "occurrence_out_of_range",
        lambda raw: find_hazard(raw, "seism", "upper_valley").update(
            kind="occurrence",
            occurrence=[0.01, 1.2, 0.0, 0.0, 0.0, 0.0],
        ),
    ),
    (
        "occurrence_sum_exceeds_one",
        lambda raw: find_hazard(raw, "seism", "upper_valley").update(
            kind="occurrence",
            occurrence=[0.7, 0.7, 0.0, 0.0, 0.0, 0.0],
        ),
    ),
    (
        "hazard_duplicate",
        lambda raw: raw["hazards"].append(dict(find_hazard(raw, "seism", "upper_valley"))),
    ),
    (
        "hazard_unknown_event",
        lambda raw: find_hazard(raw, "seism", "upper_valley").update(
            event_type_id="volcano"
        ),
    ),
    (
        "hazard_unknown_area",
        lambda raw: find_hazard(raw, "flood", "lower_valley").update(area_id="mars"),
    ),
    (
        "lognormal_median_invalid",
        lambda raw: find_fragility(raw, "bridge_1", "seism").update(median=0.0),
    ),
    (
        "lognormal_beta_invalid",
        lambda raw: find_fragility(raw, "bridge_1", "seism").update(beta=-0.5),
    ),
    (
        "tabulated_empty",
        lambda raw: find_fragility(raw, "bridge_3", "seism").update(points=[]),
    ),
    (
        "tabulated_intensity_invalid",
        lambda raw: find_fragility(raw, "bridge_3", "seism").update(
            points=[[0.3, 0.0], [0.1, 0.1]]
        ),
    ),
    (
        "tabulated_probability_out_of_range",
        lambda raw: find_fragility(raw, "bridge_3", "seism").update(
            points=[[0.1, 0.0], [0.3, 1.5]]
        ),
    ),
    (
        "tabulated_not_monotone",
        lambda raw: find_fragility(raw, "bridge_3", "seism").update(
            points=[[0.1, 0.5], [0.3, 0.2]]
        ),
    ),
    (
        "fragility_form_invalid",
        lambda raw: find_fragility(raw, "bridge_1", "seism").update(form="weibull"),
    ),
    (
        "fragility_duplicate",
        lambda raw: raw["fragilities"].append(
            dict(find_fragility(raw, "bridge_1", "seism"))
        ),
    ),
    (
        "fragility_unknown_component",
        lambda raw: find_fragility(raw, "bridge_1", "seism").update(
            component_id="ghost"
        ),
    ),
    (
        "fragility_unknown_event",
        lambda raw: find_fragility(raw, "bridge_1", "seism").update(
            event_type_id="volcano"
        ),
    ),
    ("fragility_missing_hazard", mutate_missing_hazard),
    (
        "fragility_unit_mismatch",
        lambda raw: find_fragility(raw, "bridge_1", "seism").update(
            unit="water_height_m"
        ),
    ),
    (
        "cost_duplicate",
        lambda raw: raw["cost_models"].append(dict(raw["cost_models"][0])),
    ),
    (
        "cost_direct_negative",
        lambda raw: raw["cost_models"][0].update(direct=-1.0),
    ),
    (
        "cost_lump_negative",
        lambda raw: raw["cost_models"][0].update(indirect_lump=-1.0),
    ),
    (
        "cost_indirect_missing",
        lambda raw: raw["cost_models"][0].pop("indirect_lump"),
    ),
    (
        "cost_indirect_conflict",
        lambda raw: raw["cost_models"][0].update(
            recovery={"downtime_days": 10, "loss_rate_points": [[0, 0.1]]}
        ),
    ),
    (
        "recovery_downtime_invalid",
        lambda raw: raw["cost_models"][4]["recovery"].update(downtime_days=0),
    ),
    (
        "recovery_points_empty",
        lambda raw: raw["cost_models"][4]["recovery"].update(loss_rate_points=[]),
    ),
    (
        "recovery_times_not_increasing",
        lambda raw: raw["cost_models"][4]["recovery"].update(
            loss_rate_points=[[5.0, 0.1], [2.0, 0.1]]
        ),
    ),
    (
        "recovery_time_out_of_range",
        lambda raw: raw["cost_models"][4]["recovery"].update(
            loss_rate_points=[[0.0, 0.1], [40.0, 0.1]]
        ),
    ),
    (
        "recovery_rate_negative",
        lambda raw: raw["cost_models"][4]["recovery"].update(
            loss_rate_points=[[0.0, -0.1]]
        ),
    ),
    (
        "component_duplicate",
        lambda raw: raw["components"].append(dict(raw["components"][0])),
    ),
    (
        "component_unknown_area",
        lambda raw: raw["components"][0].update(area_id="mars"),
    ),
    (
        "component_unknown_cost",
        lambda raw: raw["components"][0].update(cost_ref="ghost"),
    ),
    ("node_duplicate", lambda raw: raw["nodes"].append("a_town")),
    (
        "line_duplicate",
        lambda raw: raw["lines"].append(dict(raw["lines"][0])),
    ),
    (
        "line_unknown_node",
        lambda raw: raw["lines"][0].update(from_node="ghost_town"),
    ),
    (
        "line_endpoints_identical",
        lambda raw: raw["lines"][0].update(to_node="a_town"),
    ),
    ("line_empty", lambda raw: raw["lines"][0].update(components=[])),
    (
        "line_component_repeated",
        lambda raw: raw["lines"][0].update(components=["bridge_1", "bridge_1"]),
    ),
    (
        "line_unknown_component",
        lambda raw: raw["lines"][0]["components"].append("ghost"),
    ),
    (
        "parallel_shared_component",
        lambda raw: raw["lines"][1]["components"].append("bridge_1"),
    ),
    (
        "back_period_invalid",
        lambda raw: raw["analysis"].update(back_period_years=-5),
    ),
    (
        "connection_unknown_node",
        lambda raw: raw["analysis"].update(connection_queries=[["a_town", "ghost"]]),
    ),
    (
        "connection_identical_nodes",
        lambda raw: raw["analysis"].update(connection_queries=[["a_town", "a_town"]]),
    ),
]


class TestValidationCompleteness:
    @pytest.mark.parametrize(
        "expected_code, mutate", NEGATIVE_FIXTURES, ids=[c for c, _ in NEGATIVE_FIXTURES]
    )
    def test_negative_fixture_triggers_designated_code(
        self, model_dict, expected_code, mutate
    ):
        mutate(model_dict)
        result = model_io.load_model(dump(model_dict))
        assert not result.ok
        assert expected_code in codes(result), sorted(codes(result))

    def test_component_off_any_line_warns_but_loads(self, model_dict):
        model_dict["components"].append(
            {
                "id": "depot",
                "kind": "depot",
                "area_id": "upper_valley",
                "cost_ref": "cost_bridge_1",
            }
        )
        result = model_io.load_model(dump(model_dict))
        assert result.ok
        assert "component_not_on_line" in codes(result)

    def test_component_on_multiple_lines_warns_but_loads(self, model_dict):
        mutate_multi_line_component(model_dict)
        result = model_io.load_model(dump(model_dict))
        assert result.ok
        assert "component_on_multiple_lines" in codes(result)


class TestModelRoundTrip:
    def test_load_serialize_load_is_fixed_point(self, model_bytes):
        first = model_io.load_model(model_bytes)
        canonical = model_io.serialize_model(first.model)
        second = model_io.load_model(canonical)
        assert second.ok
        assert model_io.serialize_model(second.model) == canonical

    def test_canonical_form_evaluates_identically(self, model_bytes):
        first = model_io.load_model(model_bytes)
        second = model_io.load_model(model_io.serialize_model(first.model))
        assert model_io.emit_report(engine.evaluate(first.model)) == model_io.emit_report(
            engine.evaluate(second.model)
        )


class TestEmitReport:
    def test_structured_round_trips_losslessly(self, valley_report):
        data = model_io.emit_report(valley_report, "structured")
        parsed = json.loads(data)
        assert parsed["total"]["total"] == valley_report.total.total
        assert parsed["total"]["direct"] == valley_report.total.direct
        for cell_json, cell in zip(parsed["cells"], valley_report.cells):
            assert cell_json["pf"] == cell.pf
            assert cell_json["pcf_total"] == cell.pcf_total
        assert parsed["component_importance"] == valley_report.component_importance
        assert model_io.emit_report(valley_report, "structured") == data

    def test_tabular_has_stable_columns_and_totals(self, valley_report):
        text = model_io.emit_report(valley_report, "tabular").decode()
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == list(model_io.TABULAR_COLUMNS)
        by_kind = {}
        for row in rows[1:]:
            by_kind.setdefault(row[0], []).append(row)
        network_row = by_kind["network_total"][0]
        assert float(network_row[6]) == valley_report.total.total
        cell_sum = math.fsum(float(r[6]) for r in by_kind["cell"])
        assert cell_sum == pytest.approx(valley_report.total.total, rel=1e-12)

    def test_tabular_event_importances_sum_to_one(self, valley_report):
        text = model_io.emit_report(valley_report, "tabular").decode()
        rows = list(csv.reader(io.StringIO(text)))
        event_rows = [r for r in rows[1:] if r[0] == "event_total"]
        assert len(event_rows) == 2
        assert math.fsum(float(r[7]) for r in event_rows) == pytest.approx(
            1.0, abs=1e-12
        )
        for row in event_rows:
            assert row[9] == f"{float(row[7]):.2f}"

    def test_undefined_importance_renders_marker(self):
        report = engine.RiskReport(
            cells=(),
            component_totals={"c": engine.PcfTotal(0.0, 0.0, 0.0)},
            event_totals={},
            line_totals={},
            total=engine.PcfTotal(0.0, 0.0, 0.0),
            component_importance=None,
            event_importance=None,
            line_importance=None,
            connection_pf={},
            warnings=("total probable cost is zero",),
        )
        text = model_io.emit_report(report, "tabular").decode()
        assert "undefined" in text
        assert "nan" not in text.lower()
        structured = json.loads(model_io.emit_report(report, "structured"))
        assert structured["component_importance"] is None
        assert structured["importance_defined"] is False

    def test_unknown_format_rejected(self, valley_report):
        with pytest.raises(Exception):
            model_io.emit_report(valley_report, "xml")


class TestScenarioLoading:
    def test_bundled_scenario_loads(self):
        from conftest import SCENARIO_PATH

        result = model_io.load_scenario(SCENARIO_PATH.read_bytes())
        assert result.ok
        assert result.scenario.name == "flood protection works"
        assert result.scenario.modifications == (
            engine.RemoveEvent(event_type_id="flood"),
        )

    def test_all_modification_kinds_parse(self):
        raw = {
            "scenario": {
                "name": "mixed",
                "modifications": [
                    {"remove_event": {"event_type_id": "flood"}},
                    {
                        "retrofit": {
                            "component_id": "bridge_1",
                            "event_type_id": "seism",
                            "median_scale": 1.4,
                        }
                    },
                    {
                        "set_cost": {
                            "component_id": "bridge_2",
                            "cost": {"direct": 2.0, "indirect_lump": 3.0},
                        }
                    },
                    {"set_back_period": {"years": 475}},
                ],
            }
        }
        result = model_io.load_scenario(dump(raw))
        assert result.ok
        kinds = [type(m).__name__ for m in result.scenario.modifications]
        assert kinds == ["RemoveEvent", "Retrofit", "SetCost", "SetBackPeriod"]

    def test_unknown_modification_kind_rejected(self):
        raw = {"scenario": {"modifications": [{"paint_it_red": {}}]}}
        result = model_io.load_scenario(dump(raw))
        assert not result.ok
        assert "modification_invalid" in codes(result)

    def test_bad_retrofit_scale_rejected(self):
        raw = {
            "scenario": {
                "modifications": [
                    {
                        "retrofit": {
                            "component_id": "b",
                            "event_type_id": "e",
                            "median_scale": 0,
                        }
                    }
                ]
            }
        }
        result = model_io.load_scenario(dump(raw))
        assert not result.ok
        assert "retrofit_scale_invalid" in codes(result)
