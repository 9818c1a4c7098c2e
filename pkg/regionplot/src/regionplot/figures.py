"""Overlay figures for exported degrees-of-freedom region documents.

The input is the JSON document emitted by the ``micdof`` CLI (``region
--json`` or ``export``): an antenna configuration, a channel-knowledge model
name, the active linear bounds, and the region's corner points as exact
rational pairs.  This package only reads those documents.  It never
recomputes a region; the polygon drawn is exactly the vertex list from the
file, and rationals are converted to floats at draw time only.
"""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

__all__ = [
    "SchemaError",
    "RegionDocument",
    "FigureLayer",
    "FigureSpec",
    "load_document",
    "polygon_ring",
    "signed_area",
    "contains_point",
    "figure_spec",
    "render_figure",
    "render",
    "main",
]


class SchemaError(ValueError):
    """A document does not match the region-export schema.

    The message always names the offending file so a failure inside a batch
    points at the file to inspect.
    """


# Fill/edge styling per model name.  Largest regions are drawn first (see
# figure_spec), so lighter fills sit underneath and the alpha stays legible.
_STYLES = {
    "instantaneous": {"color": "#8e6bb3", "hatch": None},
    "hybrid1": {"color": "#2a7fb8", "hatch": None},
    "hybrid2": {"color": "#31a06e", "hatch": "//"},
    "delayed": {"color": "#c9652a", "hatch": None},
}
_FALLBACK_COLOR = "#777777"


@dataclass(frozen=True)
class RegionDocument:
    """One exported region: config, model, bounds, and exact corner points."""

    path: Path
    config: tuple[int, int, int, int]
    swapped: bool
    model: str
    case: str
    bounds: tuple[tuple[str, Fraction, Fraction, Fraction], ...]
    vertices: tuple[tuple[Fraction, Fraction], ...]
    relations: dict[str, str]

    def config_label(self) -> str:
        return "({}, {}, {}, {})".format(*self.config)


@dataclass(frozen=True)
class FigureLayer:
    model: str
    ring: tuple[tuple[float, float], ...]
    area: float


@dataclass(frozen=True)
class FigureSpec:
    """Everything render_figure needs, resolved before any drawing happens."""

    title: str
    layers: tuple[FigureLayer, ...]
    # (x, y, text, (dx, dy) offset in points); offsets stagger labels whose
    # anchor points nearly coincide.
    annotations: tuple[tuple[float, float, str, tuple[int, int]], ...]
    xmax: float
    ymax: float


def _reject(path: Path, detail: str) -> SchemaError:
    return SchemaError(f"{path}: {detail}")


def _fraction(raw: object, path: Path, where: str) -> Fraction:
    # Rationals travel as [numerator, denominator] pairs of ints.
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(isinstance(part, int) and not isinstance(part, bool) for part in raw)
    ):
        raise _reject(path, f"{where} is not a [numerator, denominator] integer pair: {raw!r}")
    if raw[1] <= 0:
        raise _reject(path, f"{where} has non-positive denominator: {raw!r}")
    return Fraction(raw[0], raw[1])


def _require(mapping: dict, key: str, kind: type, path: Path, where: str):
    if not isinstance(mapping, dict) or key not in mapping:
        raise _reject(path, f"{where} is missing required key {key!r}")
    value = mapping[key]
    if kind is int and isinstance(value, bool):
        raise _reject(path, f"{where}.{key} must be {kind.__name__}, got bool")
    if not isinstance(value, kind):
        raise _reject(path, f"{where}.{key} must be {kind.__name__}, got {type(value).__name__}")
    return value


def load_document(path: str | Path) -> RegionDocument:
    """Parse and validate one exported region document."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise _reject(path, "file not found") from None
    except json.JSONDecodeError as exc:
        raise _reject(path, f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(raw, dict):
        raise _reject(path, "top level is not a JSON object")

    cfg = _require(raw, "config", dict, path, "document")
    dims = tuple(_require(cfg, key, int, path, "config") for key in ("m1", "m2", "n1", "n2"))
    if any(d < 1 for d in dims):
        raise _reject(path, f"config has non-positive antenna count: {dims}")
    swapped = _require(cfg, "swapped", bool, path, "config")

    model = _require(raw, "model", str, path, "document")
    case = _require(raw, "case", str, path, "document")

    bounds_raw = _require(raw, "bounds", list, path, "document")
    bounds = []
    for i, entry in enumerate(bounds_raw):
        where = f"bounds[{i}]"
        label = _require(entry, "label", str, path, where)
        bounds.append(
            (
                label,
                _fraction(_require(entry, "a1", list, path, where), path, f"{where}.a1"),
                _fraction(_require(entry, "a2", list, path, where), path, f"{where}.a2"),
                _fraction(_require(entry, "c", list, path, where), path, f"{where}.c"),
            )
        )

    vertices_raw = _require(raw, "vertices", list, path, "document")
    if not vertices_raw:
        # An empty region document is malformed input, not an empty plot.
        raise _reject(path, "vertices list is empty")
    vertices = []
    for i, pair in enumerate(vertices_raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise _reject(path, f"vertices[{i}] is not a coordinate pair: {pair!r}")
        vertices.append(
            (
                _fraction(pair[0], path, f"vertices[{i}][0]"),
                _fraction(pair[1], path, f"vertices[{i}][1]"),
            )
        )

    relations_raw = _require(raw, "relations", dict, path, "document")
    relations = {}
    for key, value in relations_raw.items():
        if not isinstance(key, str) or not isinstance(value, str):
            raise _reject(path, f"relations entry {key!r} is not a string pair")
        relations[key] = value

    return RegionDocument(
        path=path,
        config=dims,  # type: ignore[arg-type]
        swapped=swapped,
        model=model,
        case=case,
        bounds=tuple(bounds),
        vertices=tuple(vertices),
        relations=relations,
    )


# --- polygon geometry ------------------------------------------------------


def signed_area(ring: Sequence[tuple[float, float]]) -> float:
    """Shoelace area of a closed ring; positive means counter-clockwise."""
    total = 0.0
    for (x0, y0), (x1, y1) in zip(ring, ring[1:]):
        total += x0 * y1 - x1 * y0
    return total / 2.0


def polygon_ring(doc: RegionDocument) -> tuple[tuple[float, float], ...]:
    """Closed, counter-clockwise float ring of the document's vertices."""
    points = [(float(x), float(y)) for x, y in doc.vertices]
    ring = tuple(points) + (points[0],)
    if signed_area(ring) < 0:
        ring = ring[::-1]
    return ring


def contains_point(doc: RegionDocument, point: tuple[Fraction, Fraction]) -> bool:
    """Exact membership test of a rational point against the document's bounds.

    Uses only the half-space data carried in the file, so it stays a pure
    reading of the export rather than a region recomputation.
    """
    d1, d2 = point
    if d1 < 0 or d2 < 0:
        return False
    return all(a1 * d1 + a2 * d2 <= c for _, a1, a2, c in doc.bounds)


# --- figure assembly -------------------------------------------------------


def _corner_text(vertex: tuple[Fraction, Fraction]) -> str:
    return f"({vertex[0]}, {vertex[1]})"


def figure_spec(docs: Sequence[RegionDocument]) -> FigureSpec:
    """Resolve a batch of documents into one overlay figure description.

    All documents must describe the same antenna configuration; each model
    may appear once.  Layers come back sorted by descending area so that
    smaller regions are painted on top of larger ones.
    """
    if not docs:
        raise SchemaError("no documents given")
    configs = {doc.config for doc in docs}
    if len(configs) != 1:
        listing = ", ".join(f"{doc.path}: {doc.config_label()}" for doc in docs)
        raise SchemaError(f"documents mix antenna configurations: {listing}")
    models = [doc.model for doc in docs]
    if len(set(models)) != len(models):
        dupes = sorted({m for m in models if models.count(m) > 1})
        raise SchemaError(f"duplicate model documents: {', '.join(dupes)}")

    layers = []
    for doc in docs:
        ring = polygon_ring(doc)
        layers.append(FigureLayer(model=doc.model, ring=ring, area=signed_area(ring)))
    layers.sort(key=lambda layer: layer.area, reverse=True)

    seen: set[tuple[Fraction, Fraction]] = set()
    corners = []
    for doc in docs:
        for vertex in doc.vertices:
            if vertex == (0, 0) or vertex in seen:
                continue
            seen.add(vertex)
            corners.append((float(vertex[0]), float(vertex[1]), _corner_text(vertex)))

    xmax = max(x for layer in layers for x, _ in layer.ring)
    ymax = max(y for layer in layers for _, y in layer.ring)

    # Labels whose anchors sit within ~8% of the axis span of an already
    # placed label drop below their point instead of overprinting it.
    annotations = []
    placed: list[tuple[float, float]] = []
    for x, y, text in sorted(corners, key=lambda corner: (corner[1], corner[0])):
        crowded = any(
            abs(x - px) <= 0.08 * max(xmax, 1.0) and abs(y - py) <= 0.08 * max(ymax, 1.0)
            for px, py in placed
        )
        annotations.append((x, y, text, (4, -12) if crowded else (4, 4)))
        placed.append((x, y))
    title = f"DoF regions for {docs[0].config_label()}"
    if len(docs) == 1:
        title = f"{docs[0].model} DoF region for {docs[0].config_label()}"
    return FigureSpec(
        title=title,
        layers=tuple(layers),
        annotations=tuple(annotations),
        xmax=xmax,
        ymax=ymax,
    )


def render_figure(spec: FigureSpec) -> Figure:
    """Draw the overlay onto a fresh Agg-backed figure."""
    fig = Figure(figsize=(6.4, 5.6))
    FigureCanvasAgg(fig)  # headless: no pyplot, no global figure registry
    ax = fig.add_subplot()

    for layer in spec.layers:
        style = _STYLES.get(layer.model, {"color": _FALLBACK_COLOR, "hatch": None})
        xs = [x for x, _ in layer.ring]
        ys = [y for _, y in layer.ring]
        ax.fill(
            xs,
            ys,
            facecolor=style["color"],
            alpha=0.25,
            hatch=style["hatch"],
            edgecolor=style["color"],
            linewidth=0,
        )
        ax.plot(xs, ys, color=style["color"], linewidth=1.8, label=layer.model)

    for x, y, text, offset in spec.annotations:
        ax.plot([x], [y], marker="o", markersize=4, color="#222222")
        ax.annotate(
            text,
            xy=(x, y),
            xytext=offset,
            textcoords="offset points",
            fontsize=8,
        )

    pad = 0.08 * max(spec.xmax, spec.ymax, 1.0)
    ax.set_xlim(-pad / 2, spec.xmax + pad)
    ax.set_ylim(-pad / 2, spec.ymax + pad)
    ax.set_xlabel("$d_1$")
    ax.set_ylabel("$d_2$")
    ax.set_title(spec.title)
    ax.legend(loc="upper right", fontsize=9)
    ax.grid(True, linewidth=0.4, alpha=0.4)
    return fig


def render(json_paths: Sequence[str | Path], out_path: str | Path) -> Path:
    """Load documents, build the overlay, and write the image file."""
    docs = [load_document(p) for p in json_paths]
    fig = render_figure(figure_spec(docs))
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    return out_path


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="regionplot",
        description="Overlay exported DoF region documents into one figure.",
    )
    parser.add_argument("documents", nargs="+", help="region JSON files (one per model)")
    parser.add_argument("--out", required=True, help="output image path (png, svg, pdf)")
    args = parser.parse_args(argv)
    try:
        out = render(args.documents, args.out)
    except SchemaError as exc:
        parser.exit(2, f"error: {exc}\n")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
