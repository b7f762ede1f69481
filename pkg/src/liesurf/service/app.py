"""FastAPI service wrapping the classification pipeline.

Endpoints are stateless compute: surfaces and matrices travel in the request
body, reports in the response.  The CLI is a thin client of this app (over
an in-process ASGI transport by default, or a remote URL).

Run standalone with:  uvicorn liesurf.service.app:app
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import gallery
from ..errors import LieSurfError, SurfaceSyntaxError
from ..gridscan import scan_grid
from ..pipeline import (
    RunConfig,
    classify_point,
    run_classify,
    run_steer,
    run_sweep,
)
from ..minkowski import is_lie_transformation
from ..reporting import obj_mesh
from ..surface import parse_surface
from . import models as m

app = FastAPI(
    title="liesurf",
    description="Lie sphere transformations of surfaces and classification "
                "of their wavefront singularities",
    version="0.1.0",
)


@app.exception_handler(LieSurfError)
async def _liesurf_error(request: Request, exc: LieSurfError):
    status = 422 if isinstance(exc, SurfaceSyntaxError) else 400
    body = m.ErrorBody(error=exc.code, message=str(exc),
                       context=getattr(exc, "context", {}) or {})
    return JSONResponse(status_code=status, content=body.model_dump())


@app.exception_handler(KeyError)
async def _key_error(request: Request, exc: KeyError):
    return JSONResponse(status_code=404,
                        content={"error": "not_found", "message": str(exc)})


def _surface_text(spec: m.SurfaceSpec) -> str:
    return spec.text if spec.text is not None else gallery.get_surface_text(spec.name)


def _matrix(spec: m.MatrixSpec | None) -> np.ndarray | None:
    if spec is None:
        return None
    if spec.rows is not None:
        return np.array(spec.rows, dtype=float)
    return gallery.get_matrix(spec.name, spec.xi)


def _steering(spec: m.SteeringSpec | None) -> dict | None:
    if spec is None:
        return None
    d = {"point": spec.point, "mode": spec.mode, "seed": spec.seed, "xi": spec.xi}
    if spec.sphere is not None:
        d["sphere"] = spec.sphere
    return d


def _point_report(outcome) -> m.PointReport:
    return m.PointReport.model_validate(outcome.as_report_dict())


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/gallery")
def list_gallery():
    return {"surfaces": sorted(gallery.SURFACES),
            "matrices": sorted(gallery.MATRIX_FAMILIES)}


@app.post("/classify", response_model=m.ClassifyResponse,
          response_model_by_alias=True)
def classify(req: m.ClassifyRequest):
    config = RunConfig(
        surface_text=_surface_text(req.surface),
        matrix=_matrix(req.matrix),
        steering=_steering(req.steering),
        grid=tuple(req.grid),
        order=req.order,
        domain=req.domain,
        max_points=req.max_points,
        projection_tol=req.projection_tol,
    )
    report = run_classify(config)
    report.pop("outcomes")
    return m.ClassifyResponse.model_validate(report)


@app.post("/classify-point", response_model=m.PointResponse)
def classify_one(req: m.PointRequest):
    text = _surface_text(req.surface)
    surf = parse_surface(text)
    a = _matrix(req.matrix)
    if req.steering is not None:
        from ..pipeline import resolve_steering
        a, _, _ = resolve_steering(surf, _steering(req.steering), req.order)
    out = classify_point(surf, a, req.point, req.order)
    return m.PointResponse(
        report=_point_report(out),
        agreement=out.agreement,
        direct_class=out.direct_cls,
        lie_class=out.lie_cls,
        sphere_index=out.sphere_index,
        surface_type=out.surface_type,
        note=out.note,
    )


@app.post("/sweep", response_model=m.SweepResponse, response_model_by_alias=True)
def sweep(req: m.SweepRequest):
    family = None
    if req.family is not None:
        fam_name = req.family
        gallery.get_matrix(fam_name, 0.0)  # validate early

        def family(xi):
            return gallery.get_matrix(fam_name, xi)

    result = run_sweep(
        _surface_text(req.surface),
        req.point,
        req.xi_range,
        family=family,
        steering=_steering(req.steering),
        samples=req.samples,
        order=req.order,
    )
    return m.SweepResponse(
        point=tuple(result["point"]),
        rows=[m.SweepRow.model_validate(r) for r in result["rows"]],
        transition_xi=result["transition_xi"],
        transition_class=result["transition_class"],
        bracket=tuple(result["bracket"]),
    )


@app.post("/steer", response_model=m.SteerResponse)
def steer_endpoint(req: m.SteerRequest):
    result = run_steer(_surface_text(req.surface), req.point, req.target,
                       seed=req.seed, order=req.order)
    return m.SteerResponse(
        matrix=result["matrix"],
        phat=result["phat"],
        xi=result["xi"],
        mode=result["mode"],
        sphere=result["sphere"],
        verification=_point_report(result["verification"]),
    )


@app.post("/check-matrix", response_model=m.CheckMatrixResponse)
def check_matrix(req: m.CheckMatrixRequest):
    a = _matrix(req.matrix)
    ok, residual = is_lie_transformation(a, req.tol)
    return m.CheckMatrixResponse(is_lie=ok, residual=residual, tol=req.tol)


@app.post("/mesh", response_class=PlainTextResponse)
def mesh(req: m.MeshRequest):
    text = _surface_text(req.surface)
    surf = parse_surface(text)
    a = _matrix(req.matrix)
    if req.steering is not None:
        from ..pipeline import resolve_steering
        a, _, _ = resolve_steering(surf, _steering(req.steering))
    domain = req.domain or surf.domain
    scan = scan_grid(surf, a, domain, tuple(req.grid))
    return obj_mesh(scan, locus=req.locus)
