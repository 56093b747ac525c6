from rn_structures.api.contracts import Report


def emit_report(report: Report, as_json: bool = False) -> str:
    """Deterministic rendering.

    The JSON form is the Report model: `command`, `summary`, `checks` (name,
    passed, detail), `values` and, when a command produces one, `document` in
    the same schema the commands read.
    """
    if as_json:
        return report.model_dump_json(exclude_none=True, indent=2) + "\n"

    lines = [f"{report.command}: {report.summary}" if report.summary else report.command]
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"  {status} {check.name}" + (f": {check.detail}" if check.detail else ""))
    for name, value in report.values.items():
        lines.append(f"  {name} = {value}")
    if report.document is not None:
        lines.append(report.document.to_json())

    failed = sum(not check.passed for check in report.checks)
    lines.append("OK" if not failed else f"FAILED ({failed} of {len(report.checks)} checks)")
    return "\n".join(lines) + "\n"
