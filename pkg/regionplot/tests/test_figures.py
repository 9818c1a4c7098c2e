"""Tests for the region-document loader and overlay figure builder.

Fixture documents under tests/fixtures/ were produced by the micdof CLI
(``region --config ... --json ...``) and checked in, so this suite runs
without the exporting package installed.
"""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from regionplot import (
    SchemaError,
    contains_point,
    figure_spec,
    load_document,
    polygon_ring,
    render,
    signed_area,
)
from regionplot.figures import main

FIXTURES = Path(__file__).parent / "fixtures"
MODELS = ("delayed", "hybrid1", "hybrid2", "instantaneous")

# Region tokens as they appear in the exported relation chains.
TOKEN_TO_MODEL = {
    "D^d": "delayed",
    "D^h1": "hybrid1",
    "D^h2": "hybrid2",
    "D^i": "instantaneous",
}


def fixture_path(model, config="4-5-3-2"):
    return FIXTURES / f"region_{config}_{model}.json"


@pytest.fixture(scope="module")
def docs():
    return {model: load_document(fixture_path(model)) for model in MODELS}


def exact_area(doc):
    """Rational shoelace area straight from the document's vertex list."""
    pts = list(doc.vertices) + [doc.vertices[0]]
    twice = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:]))
    return abs(twice) / 2


# --- loading ----------------------------------------------------------------


def test_load_document_round_trip(docs):
    doc = docs["hybrid1"]
    assert doc.config == (4, 5, 3, 2)
    assert doc.swapped is False
    assert doc.model == "hybrid1"
    assert doc.case == "A.I.3b"
    assert doc.vertices == (
        (Fraction(0), Fraction(0)),
        (Fraction(3), Fraction(0)),
        (Fraction(9, 5), Fraction(2)),
        (Fraction(0), Fraction(2)),
    )
    labels = [label for label, *_ in doc.bounds]
    assert labels == ["L01", "L02", "L3", "L2"]
    label, a1, a2, c = doc.bounds[-1]
    assert (a1, a2, c) == (Fraction(1, 3), Fraction(1, 5), Fraction(1))


def test_load_document_keeps_relation_chains(docs):
    assert set(docs["delayed"].relations) == {"hybrid1", "hybrid2"}
    # Every model's export of the same config carries the same chains.
    chains = {tuple(sorted(doc.relations.items())) for doc in docs.values()}
    assert len(chains) == 1


def test_config_label(docs):
    assert docs["hybrid2"].config_label() == "(4, 5, 3, 2)"


# --- acceptance smoke: area ordering matches the relation chains ------------


def test_area_ordering_delayed_hybrid_instantaneous(docs):
    areas = {model: exact_area(docs[model]) for model in MODELS}
    assert areas["delayed"] < areas["hybrid1"] < areas["instantaneous"]
    assert areas["delayed"] < areas["hybrid2"] < areas["instantaneous"]


def test_exact_areas_frozen(docs):
    assert exact_area(docs["delayed"]) == Fraction(51, 14)
    assert exact_area(docs["hybrid2"]) == Fraction(15, 4)
    assert exact_area(docs["hybrid1"]) == Fraction(24, 5)
    assert exact_area(docs["instantaneous"]) == Fraction(11, 2)


def parse_chain(chain):
    # "D^d ⊂ D^h1 = D^i" -> [("D^d", "⊂"), ("D^h1", "="), ("D^i", None)]
    tokens = chain.split()
    models = [TOKEN_TO_MODEL[t] for t in tokens[0::2]]
    ops = tokens[1::2]
    assert all(op in {"⊂", "="} for op in ops)
    return models, ops


@pytest.mark.parametrize("chain_key", ["hybrid1", "hybrid2"])
def test_polygon_containment_matches_relations(docs, chain_key):
    chain = docs["delayed"].relations[chain_key]
    models, ops = parse_chain(chain)
    for inner_model, outer_model, op in zip(models, models[1:], ops):
        inner, outer = docs[inner_model], docs[outer_model]
        # Convexity: vertex containment decides polygon containment.
        assert all(contains_point(outer, v) for v in inner.vertices)
        if op == "⊂":
            assert any(not contains_point(inner, v) for v in outer.vertices)
        else:
            assert all(contains_point(inner, v) for v in outer.vertices)


def test_contains_point_rejects_negative_quadrant(docs):
    assert not contains_point(docs["instantaneous"], (Fraction(-1), Fraction(0)))
    assert contains_point(docs["instantaneous"], (Fraction(0), Fraction(0)))


# --- polygon geometry -------------------------------------------------------


def test_polygon_ring_closed_and_ccw(docs):
    for doc in docs.values():
        ring = polygon_ring(doc)
        assert ring[0] == ring[-1]
        assert len(ring) == len(doc.vertices) + 1
        assert signed_area(ring) > 0


def test_signed_area_matches_exact_shoelace(docs):
    for doc in docs.values():
        assert signed_area(polygon_ring(doc)) == pytest.approx(float(exact_area(doc)))


def test_signed_area_sign_flips_with_orientation():
    square = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0))
    assert signed_area(square) == pytest.approx(1.0)
    assert signed_area(square[::-1]) == pytest.approx(-1.0)


# --- figure assembly --------------------------------------------------------


def test_figure_spec_orders_layers_largest_first(docs):
    spec = figure_spec([docs[m] for m in MODELS])
    assert [layer.model for layer in spec.layers] == [
        "instantaneous",
        "hybrid1",
        "hybrid2",
        "delayed",
    ]
    assert spec.xmax == pytest.approx(3.0)
    assert spec.ymax == pytest.approx(2.0)
    assert "(4, 5, 3, 2)" in spec.title


def test_figure_spec_annotations_skip_origin_and_dedupe(docs):
    spec = figure_spec([docs[m] for m in MODELS])
    texts = [a[2] for a in spec.annotations]
    assert "(0, 0)" not in texts
    assert len(texts) == len(set(texts))
    assert "(9/5, 2)" in texts
    assert "(18/7, 5/7)" in texts
    assert "(3, 1/2)" in texts


def test_figure_spec_staggers_nearly_coincident_labels(docs):
    spec = figure_spec([docs[m] for m in MODELS])
    offsets = {a[2]: a[3] for a in spec.annotations}
    # (9/5, 2) and (2, 2) anchor 0.2 apart on a 3-wide axis; one must drop.
    assert offsets["(9/5, 2)"] != offsets["(2, 2)"]
    # Isolated corners keep the default placement.
    assert offsets["(3, 0)"] == (4, 4)


def test_figure_spec_single_document(docs):
    spec = figure_spec([docs["hybrid1"]])
    assert len(spec.layers) == 1
    assert spec.layers[0].model == "hybrid1"
    assert spec.title.startswith("hybrid1 ")


def test_figure_spec_rejects_mixed_configs(docs):
    other = load_document(fixture_path("hybrid1", config="2-2-2-1"))
    with pytest.raises(SchemaError, match="mix antenna configurations"):
        figure_spec([docs["hybrid1"], other])


def test_figure_spec_rejects_duplicate_models(docs):
    with pytest.raises(SchemaError, match="duplicate model"):
        figure_spec([docs["hybrid1"], docs["hybrid1"]])


def test_figure_spec_rejects_empty_batch():
    with pytest.raises(SchemaError, match="no documents"):
        figure_spec([])


# --- schema errors name the offending file ----------------------------------


def broken_copy(tmp_path, mutate, name="broken.json"):
    raw = json.loads(fixture_path("hybrid1").read_text(encoding="utf-8"))
    mutate(raw)
    path = tmp_path / name
    path.write_text(json.dumps(raw), encoding="utf-8")
    return path


def test_empty_vertices_is_an_error_not_an_empty_plot(tmp_path):
    path = broken_copy(tmp_path, lambda raw: raw.__setitem__("vertices", []))
    with pytest.raises(SchemaError, match="vertices list is empty") as info:
        load_document(path)
    assert str(path) in str(info.value)


def test_missing_key_reported_with_path(tmp_path):
    path = broken_copy(tmp_path, lambda raw: raw.pop("model"))
    with pytest.raises(SchemaError, match="missing required key 'model'") as info:
        load_document(path)
    assert str(path) in str(info.value)


def test_zero_denominator_rejected(tmp_path):
    def mutate(raw):
        raw["vertices"][2][0] = [9, 0]

    path = broken_copy(tmp_path, mutate)
    with pytest.raises(SchemaError, match="non-positive denominator"):
        load_document(path)


def test_non_integer_fraction_pair_rejected(tmp_path):
    def mutate(raw):
        raw["bounds"][0]["c"] = [3.0, 1]

    path = broken_copy(tmp_path, mutate)
    with pytest.raises(SchemaError, match="integer pair"):
        load_document(path)


def test_wrong_type_for_model_rejected(tmp_path):
    path = broken_copy(tmp_path, lambda raw: raw.__setitem__("model", 7))
    with pytest.raises(SchemaError, match="model must be str"):
        load_document(path)


def test_invalid_json_reported_with_path(tmp_path):
    path = tmp_path / "mangled.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError, match="not valid JSON") as info:
        load_document(path)
    assert str(path) in str(info.value)


def test_missing_file_reported_with_path(tmp_path):
    path = tmp_path / "absent.json"
    with pytest.raises(SchemaError, match="file not found") as info:
        load_document(path)
    assert str(path) in str(info.value)


# --- rendering --------------------------------------------------------------

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_render_overlay_writes_png(tmp_path):
    out = render([fixture_path(m) for m in MODELS], tmp_path / "overlay.png")
    data = out.read_bytes()
    assert data[:8] == PNG_MAGIC
    assert len(data) > 10_000


def test_render_single_document_writes_png(tmp_path):
    out = render([fixture_path("delayed")], tmp_path / "single.png")
    assert out.read_bytes()[:8] == PNG_MAGIC


def test_main_cli_round_trip(tmp_path, capsys):
    out = tmp_path / "cli.png"
    code = main([str(fixture_path(m)) for m in MODELS] + ["--out", str(out)])
    assert code == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_main_cli_reports_schema_errors(tmp_path, capsys):
    path = broken_copy(tmp_path, lambda raw: raw.__setitem__("vertices", []))
    with pytest.raises(SystemExit) as info:
        main([str(path), "--out", str(tmp_path / "never.png")])
    assert info.value.code == 2
    err = capsys.readouterr().err
    assert "error:" in err and str(path) in err
    assert not (tmp_path / "never.png").exists()
