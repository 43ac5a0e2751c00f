"""Markdown rendering of the JSON reports."""
from __future__ import annotations

__all__ = ["markdown"]


def _table(rows: list, cols: list) -> str:
    out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        out.append("| " + " | ".join(str(r.get(c, "")) for c in cols) + " |")
    return "\n".join(out)


def _convention(conv: dict) -> str:
    if not conv:
        return ""
    items = ", ".join(f"{k}={v}" for k, v in conv.items() if k != "fingerprint")
    return f"convention `{conv.get('fingerprint', '')}`: {items}\n"


def markdown(kind: str, obj) -> str:
    if kind in ("classify", "algebra") and isinstance(obj, list):
        return "\n".join(markdown(kind, o) for o in obj)
    if kind == "rmatrix":
        return "## R-matrix identities\n\n" + _table(obj, ["identity", "N", "mode", "sample", "pass"]) + "\n"
    if kind == "rep":
        if isinstance(obj, list):
            return "## Decomposition\n\n" + _table(obj, ["frame", "mult", "dim"]) + "\n"
        lines = ["## Morphism count", ""]
        lines += [f"- {k}: {v}" for k, v in obj.items()]
        return "\n".join(lines) + "\n"
    if kind == "classify":
        rows = [{"name": n, "value": v, "paper_match": obj["paper_match"].get(n, "")}
                for n, v in obj["coefficients"].items()]
        head = (f"## Classification `{obj['case']}` N={obj['N']} ({obj['mode']})\n\n"
                + _convention(obj["convention"])
                + f"\nsolution_dim = {obj['solution_dim']}, samples agree = {obj['samples_agree']}, "
                f"published values inside solution set = {obj['paper_in_solution_set']}\n\n")
        return head + _table(rows, ["name", "value", "paper_match"]) + "\n"
    if kind == "verify":
        out = []
        for rep in obj:
            rows = [{"check": k, **v} if isinstance(v, dict) else {"check": k, "count": v}
                    for k, v in rep["checks"].items()]
            cols = sorted({c for r in rows for c in r if c != "check"})
            out.append(f"## {rep['subject']} N={rep['N']} ({rep['mode']}): "
                       f"{'pass' if rep['passed'] else 'FAIL'}\n\n" + _convention(rep["convention"]) + "\n"
                       + _table(rows, ["check"] + cols))
            if rep["failures"]:
                out.append("failures: " + "; ".join(" ".join(f) for f in rep["failures"][:10]))
        return "\n\n".join(out) + "\n"
    if kind == "algebra":
        lines = [f"## Projective-space algebra N={obj['N']} ({obj['mode']})", "", _convention(obj.get("convention", {}))]
        for k, v in obj.items():
            if k not in ("convention", "matrix"):
                lines.append(f"- {k}: {v}")
        if obj.get("matrix"):
            cols = sorted({c for r in obj["matrix"] for c in r})
            lines += ["", _table(obj["matrix"], cols)]
        return "\n".join(lines) + "\n"
    if kind == "report":
        return "\n".join(markdown(k, v) for k, v in obj.items()) + "\n"
    return f"```\n{obj}\n```\n"
