"""Command-line front end.

The CLI is a thin client of the HTTP service: it reads local files, posts
requests to the service API and writes the returned reports/meshes.  By
default it talks to the app in-process over an ASGI transport (no network);
``--server URL`` points it at a remote instance instead.

Exit codes: 0 ok, 1 computation error, 2 surface/expression parse error,
3 projection singular on more than half of the grid, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

PARSE_ERROR_CODES = {
    "syntax_error", "unknown_identifier", "non_smooth_function",
    "surface_file_error", "config_error",
}


def _client(server: str | None):
    import httpx
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from .service.app import app

    class _SyncASGITransport(httpx.BaseTransport):
        """Drive the ASGI app from synchronous code, one event loop per call."""

        def __init__(self, asgi_app):
            self._inner = httpx.ASGITransport(app=asgi_app)

        def handle_request(self, request):
            import asyncio

            async def go():
                resp = await self._inner.handle_async_request(request)
                body = b"".join([chunk async for chunk in resp.stream])
                await resp.aclose()
                return httpx.Response(resp.status_code, headers=resp.headers,
                                      content=body)

            return asyncio.run(go())

    return httpx.Client(transport=_SyncASGITransport(app),
                        base_url="http://liesurf.local", timeout=600.0)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        sys.exit(4)


def _surface_spec(arg: str) -> dict:
    if arg.startswith("builtin:"):
        return {"name": arg[len("builtin:"):]}
    return {"text": _read_file(arg)}


def _matrix_spec(arg: str | None, xi: float) -> dict | None:
    if arg is None:
        return None
    if arg.startswith("builtin:"):
        return {"name": arg[len("builtin:"):], "xi": xi}
    from .minkowski import read_matrix
    try:
        rows = read_matrix(_read_file(arg))
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(2)
    return {"rows": [[float(x) for x in row] for row in rows]}


def _steering_spec(args) -> dict | None:
    if not getattr(args, "steer", False):
        return None
    spec = {"point": tuple(args.point), "mode": args.mode, "seed": args.seed,
            "xi": args.xi}
    if args.sphere is not None:
        spec["sphere"] = args.sphere
    return spec


def _post(client, path: str, payload: dict):
    import httpx
    try:
        resp = client.post(path, json=payload)
    except httpx.TransportError as e:
        print(f"error: cannot reach service: {e}", file=sys.stderr)
        sys.exit(1)
    if resp.status_code >= 400:
        try:
            body = resp.json()
        except Exception:
            print(f"error: HTTP {resp.status_code}: {resp.text}", file=sys.stderr)
            sys.exit(1)
        code = body.get("error", "")
        msg = body.get("message", resp.text)
        print(f"error [{code}]: {msg}", file=sys.stderr)
        sys.exit(2 if code in PARSE_ERROR_CODES or resp.status_code == 422 else 1)
    return resp


def _write_output(path: str, text: str):
    from .reporting import write_atomic
    try:
        write_atomic(path, text)
    except OSError as e:
        print(f"error: cannot write {path}: {e}", file=sys.stderr)
        sys.exit(4)


def _emit_report(args, payload: dict):
    from .reporting import dumps
    text = dumps(payload)
    if args.report:
        _write_output(args.report, text)
        print(f"report written to {args.report}")
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="liesurf",
        description="Lie sphere transformations of surfaces and classification "
                    "of their wavefront singularities")
    parser.add_argument("--server", help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, matrix=True):
        p.add_argument("--surface", required=True,
                       help="surface file path or builtin:<name>")
        if matrix:
            p.add_argument("--matrix", help="matrix file path or builtin:<name>")
            p.add_argument("--xi", type=float, default=0.0,
                           help="family parameter for builtin matrix families / steering")
            p.add_argument("--steer", action="store_true",
                           help="steer a singularity instead of supplying a matrix")
            p.add_argument("--mode", choices=["generic", "degenerate"],
                           default="generic", help="steering mode")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--sphere", type=int, choices=[1, 2], default=None,
                           help="which curvature sphere to steer on")
        p.add_argument("--point", type=float, nargs=2, default=[0.0, 0.0],
                       metavar=("U", "V"))
        p.add_argument("--order", type=int, default=6, help="jet order (4..10)")

    p_classify = sub.add_parser("classify", help="scan the domain and classify "
                                                 "singular points")
    add_common(p_classify)
    p_classify.add_argument("--grid", type=int, nargs=2, default=[41, 41],
                            metavar=("N", "M"))
    p_classify.add_argument("--domain", type=float, nargs=4, default=None,
                            metavar=("U0", "U1", "V0", "V1"))
    p_classify.add_argument("--report", help="write the JSON report here")
    p_classify.add_argument("--obj", help="also export an OBJ mesh here")
    p_classify.add_argument("--tol-projection", type=float, default=None,
                            help="relative det B threshold for masking cells")

    p_point = sub.add_parser("classify-point", help="classify at one parameter point")
    add_common(p_point)
    p_point.add_argument("--report", help="write the JSON report here")

    p_sweep = sub.add_parser("sweep", help="classify along a one-parameter family "
                                           "and bisect the class transition")
    add_common(p_sweep, matrix=False)
    p_sweep.add_argument("--family", help="builtin matrix family name")
    p_sweep.add_argument("--steer", action="store_true")
    p_sweep.add_argument("--mode", choices=["generic", "degenerate"],
                         default="degenerate")
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--sphere", type=int, choices=[1, 2], default=None)
    p_sweep.add_argument("--xi", type=float, default=0.0)
    p_sweep.add_argument("--xi-range", type=float, nargs=2, default=[0.0, 1.0],
                         metavar=("A", "B"))
    p_sweep.add_argument("--samples", type=int, default=11)
    p_sweep.add_argument("--report", help="write the JSON report here")

    p_steer = sub.add_parser("steer", help="construct a transformation achieving "
                                           "a target class")
    add_common(p_steer, matrix=False)
    p_steer.add_argument("--target", required=True,
                         help="CuspidalEdge | Swallowtail | CuspidalLips | "
                              "CuspidalBeaks | CuspidalButterfly")
    p_steer.add_argument("--seed", type=int, default=0)
    p_steer.add_argument("--matrix-out", help="write the matrix file here")
    p_steer.add_argument("--report", help="write the JSON report here")

    p_mesh = sub.add_parser("mesh", help="export an OBJ mesh of the "
                                         "(transformed) surface")
    add_common(p_mesh)
    p_mesh.add_argument("--grid", type=int, nargs=2, default=[41, 41])
    p_mesh.add_argument("--domain", type=float, nargs=4, default=None)
    p_mesh.add_argument("--obj", required=True)

    p_check = sub.add_parser("check-matrix", help="verify O(4,2) membership")
    p_check.add_argument("--matrix", required=True,
                         help="matrix file path or builtin:<name>")
    p_check.add_argument("--xi", type=float, default=0.0)
    p_check.add_argument("--tol-orthogonal", type=float, default=1e-12)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn
        from .service.app import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    client = _client(args.server)
    if args.command == "classify":
        payload = {
            "surface": _surface_spec(args.surface),
            "matrix": _matrix_spec(args.matrix, args.xi),
            "steering": _steering_spec(args),
            "grid": list(args.grid),
            "order": args.order,
        }
        if args.domain:
            payload["domain"] = list(args.domain)
        if args.tol_projection is not None:
            payload["projection_tol"] = args.tol_projection
        resp = _post(client, "/classify", payload)
        body = resp.json()
        _emit_report(args, body)
        if args.obj:
            mesh_payload = {k: payload[k] for k in ("surface", "matrix", "steering",
                                                    "grid") if payload.get(k) is not None}
            if args.domain:
                mesh_payload["domain"] = list(args.domain)
            if body.get("locus"):
                mesh_payload["locus"] = body["locus"]
            mesh_resp = _post(client, "/mesh", mesh_payload)
            _write_output(args.obj, mesh_resp.text)
            print(f"mesh written to {args.obj}")
        frac = body.get("stats", {}).get("masked_fraction", 0.0)
        if frac > 0.5:
            print(f"error: projection singular on {frac:.0%} of the grid",
                  file=sys.stderr)
            return 3
        return 0

    if args.command == "classify-point":
        payload = {
            "surface": _surface_spec(args.surface),
            "matrix": _matrix_spec(args.matrix, args.xi),
            "steering": _steering_spec(args),
            "point": list(args.point),
            "order": args.order,
        }
        resp = _post(client, "/classify-point", payload)
        _emit_report(args, resp.json())
        return 0

    if args.command == "sweep":
        payload = {
            "surface": _surface_spec(args.surface),
            "xi_range": list(args.xi_range),
            "samples": args.samples,
            "point": list(args.point),
            "order": args.order,
        }
        if args.family:
            payload["family"] = args.family.removeprefix("builtin:")
        else:
            payload["steering"] = {"point": list(args.point), "mode": args.mode,
                                   "seed": args.seed, "xi": args.xi,
                                   **({"sphere": args.sphere} if args.sphere else {})}
        resp = _post(client, "/sweep", payload)
        body = resp.json()
        for row in body["rows"]:
            print(f"xi = {row['xi']:+.6f}   {row['class']:<18} detHess = {row['detHess']:+.6e}")
        print(f"transition at xi* = {body['transition_xi']:.10f} "
              f"({body['transition_class']})")
        if args.report:
            _emit_report(args, body)
        return 0

    if args.command == "steer":
        payload = {
            "surface": _surface_spec(args.surface),
            "point": list(args.point),
            "target": args.target,
            "seed": args.seed,
            "order": args.order,
        }
        resp = _post(client, "/steer", payload)
        body = resp.json()
        print(f"steered {body['verification']['class']} at "
              f"({args.point[0]}, {args.point[1]}) via sphere {body['sphere']} "
              f"({body['mode']}, xi = {body['xi']})")
        if args.matrix_out:
            from .reporting import write_atomic
            from .minkowski import format_matrix
            import numpy as np
            _write_output(args.matrix_out, format_matrix(np.array(body["matrix"])))
            print(f"matrix written to {args.matrix_out}")
        if args.report:
            _emit_report(args, body)
        return 0

    if args.command == "mesh":
        payload = {
            "surface": _surface_spec(args.surface),
            "matrix": _matrix_spec(args.matrix, args.xi),
            "steering": _steering_spec(args),
            "grid": list(args.grid),
        }
        if args.domain:
            payload["domain"] = list(args.domain)
        resp = _post(client, "/mesh", payload)
        _write_output(args.obj, resp.text)
        print(f"mesh written to {args.obj}")
        return 0

    if args.command == "check-matrix":
        payload = {
            "matrix": _matrix_spec(args.matrix, args.xi),
            "tol": getattr(args, "tol_orthogonal"),
        }
        resp = _post(client, "/check-matrix", payload)
        body = resp.json()
        verdict = "PASS" if body["is_lie"] else "FAIL"
        print(f"{verdict}: |A^T J A - J|_inf = {body['residual']:.3e} "
              f"(tol {body['tol']:.1e})")
        return 0 if body["is_lie"] else 1

    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
