"""Output formats: JSON, CSV, Markdown and HTML.

All renderers are deterministic: keys are sorted, floats are never formatted
with locale-dependent settings, and line endings are always `\\n`.
"""

from __future__ import annotations

import csv
import io
import json
from typing import TYPE_CHECKING, Any, Sequence

import markdown
from markupsafe import Markup, escape

if TYPE_CHECKING:
    from prm_weights.harness import ExperimentRecord, TableDocument

FORMATS = ("json", "csv", "md", "html")
"""Supported output formats."""

RECORD_COLUMNS = (
    "command",
    "family",
    "field",
    "n",
    "d",
    "prediction.W1_PRM",
    "prediction.W2_PRM",
    "prediction.status",
    "prediction.source",
    "prediction.bounds",
    "oracle.W1",
    "oracle.W2",
    "status",
)
"""Columns of the Markdown view of experiment records."""

_HTML_PAGE = Markup(
    "<!DOCTYPE html>\n"
    '<html lang="en">\n'
    '<head><meta charset="utf-8"><title>{title}</title></head>\n'
    "<body>\n<h1>{title}</h1>\n{body}</body>\n"
    "</html>\n",
)


def flatten(data: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    """Flatten nested dictionaries, joining keys with dots.

    Lists are kept whole and later written as JSON.

    Parameters:
        data: The nested dictionary.
        prefix: Prefix of the keys.

    Returns:
        A flat dictionary.
    """
    flat: dict[str, Any] = {}
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value, sort_keys=True)
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def to_json(payload: Any) -> str:
    """Render a payload as JSON, with sorted keys and two-space indentation.

    Parameters:
        payload: A JSON-serializable object.

    Returns:
        The JSON text, ending with a newline.
    """
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def to_csv(rows: Sequence[dict[str, Any]]) -> str:
    """Render dictionaries as CSV, one line per dictionary.

    Nested dictionaries are flattened; the header lists every key in sorted order.

    Parameters:
        rows: The rows.

    Returns:
        The CSV text.
    """
    flat_rows = [flatten(row) for row in rows]
    columns = sorted({key for row in flat_rows for key in row})
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in flat_rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def _markdown_table(columns: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
    lines.extend("| " + " | ".join(cell.replace("|", "\\|") for cell in row) + " |" for row in rows)
    return "\n".join(lines) + "\n"


def _code(value: Any) -> str:
    text = _cell(value)
    return f"`{text}`" if text else ""


def records_markdown(records: Sequence[ExperimentRecord]) -> str:
    """Render experiment records as a Markdown summary table followed by details.

    Parameters:
        records: The records.

    Returns:
        The Markdown text.
    """
    rows = []
    for record in records:
        flat = flatten(record.as_dict())
        rows.append([_cell(flat.get(column)) for column in RECORD_COLUMNS])
    parts = [_markdown_table(RECORD_COLUMNS, rows)]
    for record in records:
        details = []
        for witness in record.witnesses:
            details.append(f"- witness ({witness['source']}): {_code(witness['polynomial'])}, weight {witness['claimed_weight']}")
        if record.search:
            details.append(f"- search ({record.search['strategy']}): {_code(record.search['polynomial'])}, weight {record.search['weight']}")
        if record.geometry:
            details.extend(f"- {key}: {_code(value)}" for key, value in sorted(flatten(record.geometry).items()))
        details.extend(f"- note: {note}" for note in record.notes)
        details.extend(f"- **DISCREPANCY**: {message}" for message in record.discrepancies)
        if details:
            parts.append(f"\n### {record.family}({record.n}, {record.d}) over {record.field}\n\n" + "\n".join(details) + "\n")
    return "".join(parts)


def table_markdown(document: TableDocument) -> str:
    """Render a table document as Markdown: the class summary, then every instance.

    Parameters:
        document: The table document.

    Returns:
        The Markdown text.
    """
    summary = _markdown_table(
        ("n", "k", "l", "W2 RM(n, d-1)", "W2 PRM(n, d)"),
        [
            (row.n_range, row.k_range, row.l_range, _code(row.rm_formula), _code(row.prm_formula))
            for row in document.classes
        ],
    )
    instances = []
    for row in document.rows:
        value = _cell(row["W2_PRM"]) if row["status"] == "exact" else "{}..{} (unknown)".format(*row["bounds"])
        instances.append(
            (
                _cell(row["n"]),
                _cell(row["d"]),
                _cell(row["k"]),
                _cell(row["l"]),
                row["class"],
                _cell(row["W2_RM_prev"]),
                value,
                _cell(row["oracle_W2"]),
            ),
        )
    details = _markdown_table(("n", "d", "k", "l", "class", "W2 RM(n, d-1)", "W2 PRM(n, d)", "oracle"), instances)
    text = f"## Next-to-minimal weights, q = {document.q}\n\n{summary}\n## Instances, n <= {document.n_max}\n\n{details}"
    if document.discrepancies:
        text += "\n" + "\n".join(f"- **DISCREPANCY**: {message}" for message in document.discrepancies) + "\n"
    return text


def to_html(markdown_text: str, title: str) -> str:
    """Convert Markdown to a standalone HTML page.

    Parameters:
        markdown_text: The Markdown source.
        title: The page title, escaped.

    Returns:
        The HTML page.
    """
    body = Markup(markdown.markdown(markdown_text, extensions=["tables"]))  # noqa: S704
    return str(_HTML_PAGE.format(title=escape(title), body=body + "\n"))
