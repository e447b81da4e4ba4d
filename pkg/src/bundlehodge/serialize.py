"""Output documents: JSON, plain text and LaTeX renderings of a Hodge report.

Coefficients are always written as decimal strings; Hodge numbers outgrow
the 53-bit integers that JSON readers tend to use.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List

from .series import BiSeries, UniPoly, format_univariate

SCHEMA_VERSION = "1"


def terms_to_json(s: BiSeries) -> List[Dict[str, Any]]:
    """Term list sorted by ``(p + q, p)`` with string values."""
    return [{"p": i, "q": j, "value": str(c)} for i, j, c in s.sorted_terms()]


def terms_from_json(items, cap: int) -> BiSeries:
    terms = {}
    for item in items:
        p, q, value = item["p"], item["q"], item["value"]
        if not isinstance(p, int) or not isinstance(q, int) or not isinstance(value, str):
            raise ValueError(f"malformed term {item!r}")
        if p < 0 or q < 0 or p + q > cap:
            raise ValueError(f"term {(p, q)} outside cap {cap}")
        if (p, q) in terms:
            raise ValueError(f"duplicate term {(p, q)}")
        terms[(p, q)] = int(value)
    return BiSeries(terms, cap)


def dumps(doc: Dict[str, Any]) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_to_document(report) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "query": {
            "n": report.n,
            "d": report.d,
            "g": report.g,
            "variant": report.variant,
        },
        "dim_complex": report.dim_complex,
        "hodge_terms": [
            {"p": p, "q": q, "value": str(h)} for p, q, h in report.hodge_terms
        ],
        "betti": [str(b) for b in report.betti],
        "chi_coeffs": [str(c) for c in report.chi.to_list()],
        "euler": report.euler,
        "signature": report.signature,
        "cap_used": report.cap_used,
    }


def document_to_report(doc: Dict[str, Any]):
    from .moduli import HodgeReport

    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    q = doc["query"]
    return HodgeReport(
        n=q["n"],
        d=q["d"],
        g=q["g"],
        variant=q["variant"],
        dim_complex=doc["dim_complex"],
        hodge_terms=[(t["p"], t["q"], int(t["value"])) for t in doc["hodge_terms"]],
        betti=[int(b) for b in doc["betti"]],
        chi=UniPoly([int(c) for c in doc["chi_coeffs"]]),
        euler=doc["euler"],
        signature=doc["signature"],
        cap_used=doc["cap_used"],
    )


def render_text(report) -> str:
    lines = [f"h[{p}][{q}] = {h}" for p, q, h in report.hodge_terms]
    lines.append("betti = [" + ", ".join(str(b) for b in report.betti) + "]")
    lines.append("chi = " + format_univariate(report.chi))
    return "\n".join(lines) + "\n"


def diamond_rows(report) -> List[List[int]]:
    """Rows of the Hodge diamond from top (p + q = 2N) down to h^{0,0}.

    Row ``k`` lists ``h^{p,q}`` with ``p + q = k`` in order of decreasing ``p``.
    """
    N = report.dim_complex
    table = {(p, q): h for p, q, h in report.hodge_terms}
    rows = []
    for k in range(2 * N, -1, -1):
        lo, hi = max(0, k - N), min(k, N)
        rows.append([table.get((p, k - p), 0) for p in range(hi, lo - 1, -1)])
    return rows


def render_latex(report) -> str:
    N = report.dim_complex
    width = 2 * N + 1
    out = ["\\begin{tabular}{" + "c" * width + "}"]
    for row in diamond_rows(report):
        pad = (width - (2 * len(row) - 1)) // 2
        cells = [""] * width
        for idx, h in enumerate(row):
            cells[pad + 2 * idx] = f"${h}$"
        out.append(" & ".join(cells) + " \\\\")
    out.append("\\end{tabular}")
    out.append("")
    out.append("$\\chi(t) = " + latex_univariate(report.chi) + "$")
    return "\n".join(out) + "\n"


def latex_univariate(p: UniPoly) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for k, c in sorted(p.coeffs.items()):
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{{{k}}}")
        mag = abs(c)
        body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def parse_latex_table(text: str) -> List[List[int]]:
    """Recover the diamond rows from :func:`render_latex` output."""
    rows = []
    for line in text.splitlines():
        if line.endswith("\\\\"):
            cells = [c.strip() for c in line[:-2].split("&")]
            rows.append([int(c.strip("$")) for c in cells if c])
    return rows


def parse_text_terms(text: str) -> Dict[tuple, int]:
    out = {}
    for line in text.splitlines():
        if line.startswith("h["):
            lhs, rhs = line.split(" = ")
            p, q = lhs[2:-1].split("][")
            out[(int(p), int(q))] = int(rhs)
    return out
