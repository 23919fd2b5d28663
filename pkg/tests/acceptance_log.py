"""Collects the one-line verdicts of the acceptance criteria."""

LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str, seconds: float) -> str:
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.1f} s)  {detail}"
    LINES.append(line)
    print(line)
    return line
