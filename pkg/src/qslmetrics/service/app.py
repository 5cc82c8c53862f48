"""HTTP front end.  Every route is a thin wrapper over the library functions.

Domain errors surface as 422 responses whose detail object carries the
machine-readable ``code`` from the exception, so clients (including the
bundled CLI) can branch without parsing prose.
"""

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import NotUnitary, QslMetricsError
from ..experiments import (
    TABLE1_P_VALUES,
    generator_fuzz,
    large_n_limit_ratio,
    pseudo_oracle_fuzz,
    reproduce_table1,
    table1_max_deviation,
    table1_reference,
    triangle_fuzz,
    uniform_comb_ratio,
)
from ..qsl_bounds import TIGHT_P_MAX, SpectralState, amplitude_constant, tau_c2
from ..un_metrics import MetricSpec, metric_d, pseudometric_d
from ..unitary_core import UnitaryMatrix, eigenphases, validate_unitary
from ..weighted_norms import as_exponent
from . import schemas

__all__ = ["create_app", "app"]

_SERVICE_VERSION = "0.1.0"


def _to_unitary(payload: schemas.MatrixPayload, tol: float | None = None) -> UnitaryMatrix:
    entries = np.asarray(payload.re, dtype=float) + 1j * np.asarray(payload.im, dtype=float)
    return validate_unitary(entries, tol=tol)


def _to_state(payload: schemas.StatePayload) -> SpectralState:
    return SpectralState(tuple(payload.energies), tuple(payload.weights))


def _metric_warnings(p: float) -> list[str]:
    if p < 1.0:
        return [
            "exponent below 1: the triangle inequality is conjectural in this regime"
        ]
    return []


def _bound_warnings(p: float) -> list[str]:
    if p > TIGHT_P_MAX:
        return [
            "exponent above pi/2: the bound holds but is not tight for every target fidelity"
        ]
    return []


def _p_key(p: float) -> str:
    return f"{p:g}"


def _row_payload(row) -> schemas.TableRowPayload:
    return schemas.TableRowPayload(
        state_label=row.state_label,
        tau_exact=row.tau_exact,
        ratios={_p_key(p): v for p, v in row.ratios.items()},
    )


def _metric_response(u: UnitaryMatrix, v: UnitaryMatrix, spec: MetricSpec,
                     pseudo: bool) -> schemas.MetricResponse:
    warnings = _metric_warnings(spec.p.p)
    if pseudo:
        result = pseudometric_d(u, v, spec)
        return schemas.MetricResponse(
            value=result.value,
            argmin_x=result.argmin_x,
            candidates_examined=result.candidates_examined,
            warnings=warnings,
        )
    return schemas.MetricResponse(value=metric_d(u, v, spec), warnings=warnings)


def create_app() -> FastAPI:
    app = FastAPI(
        title="qslmetrics",
        version=_SERVICE_VERSION,
        description=(
            "Weighted-lp distances on the unitary group and the matching "
            "evolution-time lower bounds."
        ),
    )

    @app.exception_handler(QslMetricsError)
    async def _domain_error(request: Request, exc: QslMetricsError):
        detail = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, NotUnitary):
            detail["defect"] = exc.defect
            detail["tol"] = exc.tol
        return JSONResponse(status_code=422, content={"detail": detail})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": _SERVICE_VERSION}

    @app.get("/constants", response_model=schemas.ConstantsResponse)
    def constants(p: float) -> schemas.ConstantsResponse:
        consts = amplitude_constant(as_exponent(p))
        return schemas.ConstantsResponse(p=consts.p, x_c=consts.x_c, a_p=consts.a_p)

    @app.post("/phases", response_model=schemas.PhasesResponse)
    def phases(request: schemas.PhasesRequest) -> schemas.PhasesResponse:
        u = _to_unitary(request.matrix, request.tol)
        return schemas.PhasesResponse(
            n=u.n,
            phases=list(eigenphases(u).phases),
            unitarity_defect=u.unitarity_defect,
        )

    @app.post("/metric", response_model=schemas.MetricResponse)
    def metric(request: schemas.MetricRequest) -> schemas.MetricResponse:
        spec = MetricSpec.of(request.mu, request.p)
        u = _to_unitary(request.u)
        v = _to_unitary(request.v)
        return _metric_response(u, v, spec, request.pseudo)

    @app.post("/metric/batch", response_model=schemas.MetricBatchResponse)
    def metric_batch(request: schemas.MetricBatchRequest) -> schemas.MetricBatchResponse:
        spec = MetricSpec.of(request.mu, request.p)
        results = []
        for pair in request.pairs:
            u = _to_unitary(pair.u)
            v = _to_unitary(pair.v)
            results.append(_metric_response(u, v, spec, request.pseudo))
        return schemas.MetricBatchResponse(results=results)

    @app.post("/bound", response_model=schemas.BoundResponse)
    def bound(request: schemas.BoundRequest) -> schemas.BoundResponse:
        state = _to_state(request.state)
        report = tau_c2(state, request.p, request.epsilon, hbar=request.hbar)
        return schemas.BoundResponse(
            **report.to_dict(), warnings=_bound_warnings(report.p)
        )

    @app.get("/table1", response_model=schemas.Table1Response)
    def table1(large_n: int = 1000, hbar: float = 1.0) -> schemas.Table1Response:
        rows = reproduce_table1(large_n=large_n, hbar=hbar)
        reference = table1_reference()
        finite = {
            _p_key(p): uniform_comb_ratio(p, large_n, hbar=hbar)
            for p in TABLE1_P_VALUES
        }
        finite_gap = max(
            abs(finite[_p_key(p)] - large_n_limit_ratio(p)) for p in TABLE1_P_VALUES
        )
        return schemas.Table1Response(
            p_values=list(TABLE1_P_VALUES),
            rows=[_row_payload(r) for r in rows],
            reference=[_row_payload(r) for r in reference],
            max_abs_deviation=table1_max_deviation(rows, reference),
            large_n=large_n,
            finite_comb_ratios=finite,
            finite_comb_max_gap=finite_gap,
        )

    @app.post("/fuzz", response_model=schemas.FuzzResponse)
    def fuzz(request: schemas.FuzzRequest) -> schemas.FuzzResponse:
        mu = request.mu if request.mu is not None else [1.0] * request.n
        if request.mode == "triangle":
            report = triangle_fuzz(request.n, request.p, mu, request.trials, request.seed)
        elif request.mode == "pseudo-oracle":
            report = pseudo_oracle_fuzz(
                request.n, request.p, mu, request.trials, request.seed,
                grid_points=request.grid_points,
            )
        else:
            report = generator_fuzz(
                request.n, request.p, mu, request.trials, request.seed,
                k_range=request.k_range,
            )
        payload = report.to_dict()
        payload["violations"] = [
            schemas.ViolationPayload(**v) for v in payload["violations"]
        ]
        return schemas.FuzzResponse(**payload, warnings=_metric_warnings(report.p))

    return app


app = create_app()
