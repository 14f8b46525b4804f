# src/api/app.py
"""FastAPI: diagram arithmetic and degree formulas over HTTP."""
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from src.config.settings import settings
from src.core.degrees import DegreeReport, deg_prime, table2
from src.core.diagram import families_of, format_diagram, is_planar, is_projection, multiply, parse_diagram, stats
from src.core.errors import BudgetExceeded
from src.utils.logger import logger
from src.utils.validation import parse_family, sanitize_degree

app = FastAPI(title="Diagram Degree API")
app.add_middleware(CORSMiddleware, allow_origins=["*"])


class MultiplyRequest(BaseModel):
    n: int
    a: str
    b: str


class InfoRequest(BaseModel):
    n: int
    a: str


def _fail(e: Exception):
    status = 413 if isinstance(e, BudgetExceeded) else 400
    logger.warning(f"Request rejected ({status}): {e}")
    raise HTTPException(status_code=status, detail=str(e))


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/multiply")
async def multiply_diagrams(request: MultiplyRequest):
    try:
        n = sanitize_degree(request.n)
        product = multiply(parse_diagram(request.a, n), parse_diagram(request.b, n))
        return {"product": format_diagram(product)}
    except ValueError as e:
        _fail(e)


@app.post("/info")
async def diagram_info(request: InfoRequest):
    try:
        a = parse_diagram(request.a, sanitize_degree(request.n))
    except ValueError as e:
        _fail(e)
    s = stats(a)
    return {
        "n": a.n,
        "rank": s.rank,
        "dom": list(s.dom),
        "codom": list(s.codom),
        "ker": str(s.ker),
        "coker": str(s.coker),
        "planar": is_planar(a),
        "projection": is_projection(a),
        "families": [f.value for f in families_of(a)],
    }


@app.get("/degree/{family}/{n}", response_model=DegreeReport)
async def degree(family: str, n: int):
    try:
        return deg_prime(parse_family(family), sanitize_degree(n, upper=settings.table_max_n))
    except ValueError as e:
        _fail(e)


@app.get("/table2")
async def degree_table(max_n: Optional[int] = 10):
    try:
        frame = table2(max_n)
    except (ValueError, BudgetExceeded) as e:
        _fail(e)
    return frame.where(frame.notna(), None).to_dict(orient="records")
