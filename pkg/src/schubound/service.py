"""HTTP facade over the engine.

Endpoints mirror the CLI commands with pydantic request/response models. Run
with ``uvicorn schubound.service:app``. Searches execute synchronously in the
request; exceptional-type runs take minutes and are better done through the
CLI, which also supports checkpointing and interrupts.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, model_validator

from . import candim, oracle, weyl
from .cartan import CartanDatum
from .chow import ChowEngine
from .errors import SchuboundError
from .rootsys import RootSystem, build_root_system
from .search import SearchConfig, max_multiplicity_free_degree, verify_multidegree

API_VERSION = candim.REPORT_VERSION


class TypedRequest(BaseModel):
    """A root system given either by label or by an explicit Cartan matrix."""

    type: str | None = Field(default=None, description="type label, e.g. E6")
    matrix: list[list[int]] | None = None
    symmetrizer: list[int] | None = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.type is None) == (self.matrix is None):
            raise ValueError("provide exactly one of 'type' or 'matrix'")
        return self

    def root_system(self) -> RootSystem:
        if self.type is not None:
            datum = CartanDatum.from_label(self.type)
        else:
            datum = CartanDatum.make(self.matrix, symmetrizer=self.symmetrizer)
        return build_root_system(datum)


class HealthResponse(BaseModel):
    status: str
    version: str


class RootsResponse(BaseModel):
    label: str
    rank: int
    positive_roots: int
    dim_flag: int
    poincare: list[int]
    weyl_order: int


class ProductRequest(TypedRequest):
    degrees: list[int]


class Term(BaseModel):
    coefficient: int
    word: str


class ProductResponse(BaseModel):
    label: str
    degrees: list[int]
    grade: int
    zero: bool
    terms: list[Term]


class VerifyRequest(TypedRequest):
    degrees: list[int]


class VerifyResponse(BaseModel):
    multiplicity_free: bool
    total: int
    witness_word: str | None = None


class BoundRequest(TypedRequest):
    threads: int = 1
    symmetry: bool = True


class SelftestRequest(BaseModel):
    max_rank: int = Field(default=4, ge=1, le=4)


class SelftestTypeResult(BaseModel):
    label: str
    monomials_checked: int
    mismatches: int


class SelftestResponse(BaseModel):
    passed: bool
    results: list[SelftestTypeResult]


app = FastAPI(
    title="schubound",
    description=(
        "Exact Schubert-divisor arithmetic on full flag varieties: expansions, "
        "multiplicity-free searches, and canonical-dimension upper bounds."
    ),
    version=API_VERSION,
)


def _root_system(request: TypedRequest) -> RootSystem:
    try:
        return request.root_system()
    except SchuboundError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _check_degrees(rs: RootSystem, degrees: list[int]) -> tuple[int, ...]:
    if len(degrees) != rs.rank or any(n < 0 for n in degrees):
        raise HTTPException(
            status_code=422,
            detail=f"degrees must be {rs.rank} nonnegative integers",
        )
    return tuple(degrees)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=API_VERSION)


@app.post("/roots", response_model=RootsResponse)
def roots(request: TypedRequest) -> RootsResponse:
    rs = _root_system(request)
    poincare = list(weyl.poincare_polynomial(rs))
    return RootsResponse(
        label=rs.label or "custom",
        rank=rs.rank,
        positive_roots=rs.dim_flag,
        dim_flag=rs.dim_flag,
        poincare=poincare,
        weyl_order=sum(poincare),
    )


@app.post("/product", response_model=ProductResponse)
def product(request: ProductRequest) -> ProductResponse:
    rs = _root_system(request)
    degrees = _check_degrees(rs, request.degrees)
    vector = ChowEngine(rs).product_of_divisors(degrees)
    return ProductResponse(
        label=rs.label or "custom",
        degrees=list(degrees),
        grade=vector.grade,
        zero=vector.is_zero,
        terms=[Term(coefficient=c, word=w) for c, w in vector.word_terms()],
    )


@app.post("/verify", response_model=VerifyResponse)
def verify(request: VerifyRequest) -> VerifyResponse:
    rs = _root_system(request)
    degrees = _check_degrees(rs, request.degrees)
    witness = verify_multidegree(rs, degrees)
    if witness is None:
        return VerifyResponse(multiplicity_free=False, total=sum(degrees))
    return VerifyResponse(
        multiplicity_free=True, total=witness.total, witness_word=witness.word
    )


@app.post("/bound")
def bound(request: BoundRequest) -> dict:
    rs = _root_system(request)
    if request.threads < 1:
        raise HTTPException(status_code=422, detail="threads must be >= 1")
    try:
        result = max_multiplicity_free_degree(
            rs,
            SearchConfig(
                thread_count=request.threads,
                symmetry_reduction=request.symmetry,
            ),
        )
        report = candim.build_bound_report(rs, result)
    except SchuboundError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    return report.to_json_dict()


@app.post("/selftest", response_model=SelftestResponse)
def selftest(request: SelftestRequest) -> SelftestResponse:
    results = []
    passed = True
    for label in ("A2", "A3", "B2", "B3", "G2", "D4"):
        rs = build_root_system(CartanDatum.from_label(label))
        if rs.rank > request.max_rank:
            continue
        report = oracle.compare_all(label)
        passed = passed and report.passed
        results.append(
            SelftestTypeResult(
                label=label,
                monomials_checked=report.monomials_checked,
                mismatches=len(report.mismatches),
            )
        )
    return SelftestResponse(passed=passed, results=results)
