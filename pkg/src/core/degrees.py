# src/core/degrees.py
"""Number sequences and the closed-form counts and degree formulas for each family."""
from __future__ import annotations

import json
import threading
from enum import Enum
from math import comb, factorial
from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel

from src.config.settings import settings
from src.core.diagram import Family, P_TYPE
from src.core.errors import FamilyError, ValidityError


class SequenceKind(str, Enum):
    BELL = "bell"
    INVOLUTION = "involution"
    CATALAN = "catalan"
    MOTZKIN = "motzkin"
    DOUBLE_FACTORIAL = "double_factorial"


class SequenceCache:
    """Memoized exact values, extended on demand under a lock."""

    def __init__(self):
        self._lock = threading.Lock()
        self._bell: List[int] = [1]
        self._bell_row: List[int] = [1]
        self._involution: List[int] = [1, 1]
        self._motzkin: List[int] = [1, 1]

    def bell(self, n: int) -> int:
        with self._lock:
            # Bell triangle: each row starts with the last entry of the previous one
            while len(self._bell) <= n:
                row = [self._bell_row[-1]]
                for x in self._bell_row:
                    row.append(row[-1] + x)
                self._bell_row = row
                self._bell.append(row[0])
            return self._bell[n]

    def involution(self, n: int) -> int:
        with self._lock:
            seq = self._involution
            while len(seq) <= n:
                k = len(seq)
                seq.append(seq[k - 1] + (k - 1) * seq[k - 2])
            return seq[n]

    def catalan(self, n: int) -> int:
        return comb(2 * n, n) // (n + 1)

    def motzkin(self, n: int) -> int:
        with self._lock:
            seq = self._motzkin
            while len(seq) <= n:
                k = len(seq)
                seq.append(seq[k - 1] + sum(seq[i] * seq[k - 2 - i] for i in range(k - 1)))
            return seq[n]

    def double_factorial(self, m: int) -> int:
        """m!! for odd m >= -1, with (-1)!! = 1."""
        if m < -1 or m % 2 == 0:
            raise ValueError(f"double factorial is only used for odd m >= -1, got {m}")
        out = 1
        for x in range(m, 0, -2):
            out *= x
        return out


_cache = SequenceCache()


def sequence(kind: SequenceKind, n: int) -> int:
    kind = SequenceKind(kind)
    if n < 0 and kind is not SequenceKind.DOUBLE_FACTORIAL:
        raise ValueError(f"Sequence index must be non-negative, got {n}")
    return {
        SequenceKind.BELL: _cache.bell,
        SequenceKind.INVOLUTION: _cache.involution,
        SequenceKind.CATALAN: _cache.catalan,
        SequenceKind.MOTZKIN: _cache.motzkin,
        SequenceKind.DOUBLE_FACTORIAL: _cache.double_factorial,
    }[kind](n)


def B(n: int) -> int:
    return _cache.bell(n)


def I(n: int) -> int:  # noqa: E743
    return _cache.involution(n)


def C(n: int) -> int:
    return _cache.catalan(n)


def M(n: int) -> int:
    return _cache.motzkin(n)


def dfact(m: int) -> int:
    return _cache.double_factorial(m)


def family_size(f: Family, n: int) -> int:
    if f is Family.P:
        return B(2 * n)
    if f is Family.PB:
        return I(2 * n)
    if f is Family.B:
        return dfact(2 * n - 1)
    if f is Family.PP:
        return C(2 * n)
    if f is Family.M:
        return M(2 * n)
    if f is Family.TL:
        return C(n)
    if f is Family.S:
        return factorial(n)
    if f is Family.TLM:
        if n < 1:
            raise FamilyError("TLM_n needs n >= 1")
        return C(2 * n - 1)
    raise FamilyError(f"Unknown family {f}")


def brauer_p(n: int, r: int) -> int:
    """Number of rank-r projections of B_n."""
    if not 0 <= r <= n or (n - r) % 2:
        raise ValueError(f"brauer_p needs 0 <= r <= n with r = n mod 2, got n={n}, r={r}")
    return comb(n, r) * dfact(n - r - 1)


def projection_count(f: Family, n: int, r: int) -> int:
    """Closed forms for the ranks the degree formulas are assembled from."""
    if f is Family.P:
        forms = {0: B(n), 1: B(n + 1) - B(n), 2: (B(n + 2) - 3 * B(n + 1) + B(n)) // 2}
    elif f is Family.PB:
        forms = {0: I(n), 1: I(n + 1) - I(n), 2: (I(n + 2) - 2 * I(n + 1)) // 2}
    elif f is Family.PP:
        forms = {0: C(n), 1: C(n + 1) - C(n), 2: C(n + 2) - 3 * C(n + 1) + C(n)}
    elif f is Family.M:
        forms = {0: M(n), 1: M(n + 1) - M(n), 2: M(n + 2) - 2 * M(n + 1)}
    elif f is Family.TLM:
        forms = {0: 0, 1: C(n), 2: C(n + 1) - 2 * C(n)}
    elif f is Family.TL:
        if n % 2 == 0:
            if r % 2:
                return 0
            return projection_count(Family.PP, n // 2, r // 2)
        k = (n + 1) // 2
        forms = {1: C(k), 3: C(k + 1) - 2 * C(k)}
        if r % 2 == 0:
            return 0
    elif f is Family.B:
        return brauer_p(n, r) if (n - r) % 2 == 0 and 0 <= r <= n else 0
    else:
        raise FamilyError(f"No projection counts for family {f.value}")
    if r not in forms:
        raise ValidityError(f"No closed form for rank {r} projections of {f.value}_n")
    return forms[r]


def q_ranks(f: Family, n: int) -> List[int]:
    """Ranks of the projections used as states."""
    if f in P_TYPE:
        return [0, 1, 2]
    if f is Family.TLM:
        return [1, 2]
    if f is Family.TL:
        return [0, 2, 4] if n % 2 == 0 else [1, 3]
    raise FamilyError(f"No projection action for family {f.value}")


def q_size(f: Family, n: int) -> int:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if f is Family.P:
        return (B(n + 2) - B(n + 1) + B(n)) // 2
    if f is Family.PB:
        return I(n + 2) // 2
    if f is Family.PP:
        return C(n + 2) - 2 * C(n + 1) + C(n)
    if f is Family.M:
        return M(n + 2) - M(n + 1)
    if f is Family.TLM:
        return C(n + 1) - C(n)
    if f is Family.TL:
        k = (n + 1) // 2
        if n % 2:
            return C(k + 1) - C(k)
        return C(k + 2) - 2 * C(k + 1) + C(k)
    raise FamilyError(f"q_size is not defined for family {f.value}")


def brauer_linear(n: int) -> int:
    """3p3 + p1 (odd n) or 3p4 + 2p2 + p0 (even n)."""
    if n % 2:
        return 3 * brauer_p(n, 3) + brauer_p(n, 1)
    return 3 * brauer_p(n, 4) + 2 * brauer_p(n, 2) + brauer_p(n, 0)


def brauer_closed_form(n: int) -> int:
    if n % 2:
        return (n + 1) // 2 * dfact(n)
    return (n + 4) * (n + 2) // 8 * dfact(n - 1)


def validity_floor(f: Family, n: int) -> int:
    if f in P_TYPE or f is Family.TLM:
        return 2
    if f is Family.TL:
        return 3
    if f is Family.B:
        return 3 if n % 2 else 4
    raise FamilyError(f"No degree formula for family {f.value}")


class DegreeReport(BaseModel):
    family: str
    n: int
    q_size: Optional[int] = None
    deg_prime: Optional[int] = None
    deg: Optional[int] = None
    degrc: Optional[int] = None
    valid: bool
    validity: str


def deg_prime(f: Family, n: int) -> DegreeReport:
    floor = validity_floor(f, n)
    validity = f"n ≥ {floor}"
    q = q_size(f, n) if f is not Family.B and n >= 0 else None
    if n < floor:
        return DegreeReport(family=f.value, n=n, q_size=q, valid=False, validity=validity)
    value = brauer_linear(n) if f is Family.B else q
    # even Brauer monoids have deg < degrc, so degrc is left unset there
    degrc = None if f is Family.B and n % 2 == 0 else value + 1
    return DegreeReport(family=f.value, n=n, q_size=q, deg_prime=value, deg=value + 1,
                        degrc=degrc, valid=True, validity=validity)


TABLE_FAMILIES = (Family.P, Family.PB, Family.B, Family.PP, Family.M, Family.TL)
OUTSIDE = "outside formula validity"


def table2(max_n: int) -> pd.DataFrame:
    if not 0 <= max_n <= settings.table_max_n:
        raise ValidityError(f"max_n must lie in 0..{settings.table_max_n}, got {max_n}")
    rows: List[Dict[str, object]] = []
    for f in TABLE_FAMILIES:
        for n in range(max_n + 1):
            report = deg_prime(f, n)
            if report.valid:
                rows.append({"family": f.value, "n": n, "deg_prime": report.deg_prime,
                             "deg": report.deg, "source": "formula"})
            else:
                rows.append({"family": f.value, "n": n, "deg_prime": None, "deg": None, "source": OUTSIDE})
    return pd.DataFrame(rows, columns=["family", "n", "deg_prime", "deg", "source"], dtype=object)


def table2_csv(max_n: int) -> str:
    return table2(max_n).to_csv(index=False, lineterminator="\n")


def table2_json(max_n: int) -> str:
    frame = table2(max_n)
    return json.dumps(frame.where(frame.notna(), None).to_dict(orient="records"))
