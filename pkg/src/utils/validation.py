# src/utils/validation.py
"""Input sanitization for diagram text and family names coming from the CLI or HTTP."""
import re
from src.core.errors import DiagramError, FamilyError

DIAGRAM_TEXT_REGEX = re.compile(r'^[\[\]0-9,\-\s]*$')
MAX_DIAGRAM_TEXT = 200_000


def sanitize_diagram_text(text: str) -> str:
    if not isinstance(text, str):
        raise DiagramError("Diagram text must be a string")
    if len(text) > MAX_DIAGRAM_TEXT:
        raise DiagramError(f"Diagram text longer than {MAX_DIAGRAM_TEXT} characters")
    if not DIAGRAM_TEXT_REGEX.match(text):
        raise DiagramError("Diagram text contains invalid characters")
    return text.strip()


def sanitize_degree(n: int, upper: int = 64) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DiagramError(f"Degree must be a non-negative integer, got {n!r}")
    if n > upper:
        raise DiagramError(f"Degree {n} exceeds the supported maximum {upper}")
    return n


def parse_family(text: str):
    from src.core.diagram import Family
    try:
        return Family(text.strip().upper())
    except ValueError:
        names = ", ".join(f.value for f in Family)
        raise FamilyError(f"Unknown family {text!r}; expected one of {names}")
