"""HTTP service backing the graphical editor.

Scenarios persist as canonical scenario files in a workspace directory
(the exact format the CLI reads), with a revision counter in a sidecar
meta file for optimistic concurrency: a PUT carrying a stale revision is
rejected with 409. Export and run share the CLI's core, so API artifacts
are byte-identical to CLI output for the same input.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import concretize
from .errors import ParseError, ScenarioError, SchemaError
from .executor import TickConfig, run
from .library import (
    library_list,
    library_save,
    module_document,
    module_from_document,
    module_revision,
)
from .registry import DEFAULT_REGISTRY, Registry
from .serialize import from_document, serialize, to_document
from .validation import validate
from .xosc import ExportOptions, export


class Workspace:
    def __init__(self, directory: Path):
        self.directory = directory
        directory.mkdir(parents=True, exist_ok=True)

    def _scenario_path(self, scenario_id: str) -> Path:
        return self.directory / f"{scenario_id}.json"

    def _meta_path(self, scenario_id: str) -> Path:
        return self.directory / f"{scenario_id}.meta.json"

    def exists(self, scenario_id: str) -> bool:
        return self._scenario_path(scenario_id).exists()

    def revision(self, scenario_id: str) -> int:
        return json.loads(self._meta_path(scenario_id).read_text(encoding="utf-8"))["revision"]

    def read(self, scenario_id: str) -> dict:
        text = self._scenario_path(scenario_id).read_text(encoding="utf-8")
        return json.loads(text)

    def write(self, scenario_id: str, graph, revision: int) -> None:
        self._scenario_path(scenario_id).write_text(serialize(graph), encoding="utf-8")
        self._meta_path(scenario_id).write_text(
            json.dumps({"revision": revision}) + "\n", encoding="utf-8"
        )


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": code, "message": message}, status_code=status)


def create_app(
    workspace: Path,
    catalog: Path,
    registry: Registry = DEFAULT_REGISTRY,
    allow_origins=("*",),
) -> FastAPI:
    app = FastAPI(title="scenograph", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(allow_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = Workspace(Path(workspace))
    catalog = Path(catalog)

    async def _json_body(request: Request) -> Optional[dict]:
        raw = await request.body()
        if not raw:
            return None
        return json.loads(raw)

    def _parse_scenario(doc: dict):
        return from_document(doc)

    def _load(scenario_id: str):
        return _parse_scenario(store.read(scenario_id))

    @app.post("/scenarios", status_code=201)
    async def create_scenario(request: Request):
        try:
            body = await _json_body(request)
            if body is None:
                return _error(400, "BadRequest", "request body must be a scenario document")
            graph = _parse_scenario(body)
        except (json.JSONDecodeError, ParseError, SchemaError) as exc:
            return _error(400, "BadRequest", str(exc))
        scenario_id = uuid.uuid4().hex[:12]
        store.write(scenario_id, graph, revision=1)
        return {"id": scenario_id, "revision": 1, "scenario": to_document(graph)}

    @app.get("/scenarios/{scenario_id}")
    async def get_scenario(scenario_id: str):
        if not store.exists(scenario_id):
            return _error(404, "NotFound", f"no scenario {scenario_id!r}")
        return {
            "id": scenario_id,
            "revision": store.revision(scenario_id),
            "scenario": store.read(scenario_id),
        }

    @app.put("/scenarios/{scenario_id}")
    async def put_scenario(scenario_id: str, request: Request):
        if not store.exists(scenario_id):
            return _error(404, "NotFound", f"no scenario {scenario_id!r}")
        try:
            body = await _json_body(request) or {}
            revision = body["revision"]
            graph = _parse_scenario(body["scenario"])
        except (json.JSONDecodeError, ParseError, SchemaError, KeyError, TypeError) as exc:
            return _error(400, "BadRequest", f"expected {{revision, scenario}}: {exc}")
        current = store.revision(scenario_id)
        if revision != current:
            return _error(409, "StaleRevision",
                          f"revision {revision} is stale; current is {current}")
        store.write(scenario_id, graph, revision=current + 1)
        return {"id": scenario_id, "revision": current + 1}

    @app.post("/scenarios/{scenario_id}/validate")
    async def validate_scenario(scenario_id: str, request: Request):
        if not store.exists(scenario_id):
            return _error(404, "NotFound", f"no scenario {scenario_id!r}")
        try:
            body = await _json_body(request)
            graph = _parse_scenario(body["scenario"]) if body and "scenario" in body \
                else _load(scenario_id)
        except (json.JSONDecodeError, ParseError, SchemaError, TypeError) as exc:
            return _error(400, "BadRequest", str(exc))
        return validate(graph, registry).to_json()

    @app.post("/scenarios/{scenario_id}/export")
    async def export_scenario(scenario_id: str, request: Request):
        if not store.exists(scenario_id):
            return _error(404, "NotFound", f"no scenario {scenario_id!r}")
        try:
            body = await _json_body(request) or {}
        except json.JSONDecodeError as exc:
            return _error(400, "BadRequest", str(exc))
        options = ExportOptions(
            catalog_locations=tuple(tuple(p) for p in body.get("catalog_locations", [])),
            parameterize=tuple(body.get("parameterize", [])),
        )
        try:
            document = export(_load(scenario_id), options, registry)
        except ScenarioError as exc:
            return _error(422, type(exc).__name__, str(exc))
        return Response(content=document.text, media_type="application/xml")

    @app.post("/scenarios/{scenario_id}/run")
    async def run_scenario(scenario_id: str, request: Request):
        if not store.exists(scenario_id):
            return _error(404, "NotFound", f"no scenario {scenario_id!r}")
        try:
            body = await _json_body(request) or {}
        except json.JSONDecodeError as exc:
            return _error(400, "BadRequest", str(exc))
        config = TickConfig(
            dt=body.get("dt", 0.05),
            max_time=body.get("max_time", 60.0),
            seed=body.get("seed", 0),
        )
        try:
            graph = _load(scenario_id)
            if "index" in body:
                plan_ = concretize.plan(graph, registry)
                graph = concretize.enumerate_variant(graph, plan_, body["index"], registry)
            trace = run(graph, config, registry)
        except ScenarioError as exc:
            return _error(422, type(exc).__name__, str(exc))
        return trace.to_json(stride=body.get("stride", 1))

    @app.get("/library/modules")
    async def list_modules():
        return {"modules": library_list(catalog)}

    @app.post("/library/modules", status_code=201)
    async def add_module(request: Request):
        try:
            body = await _json_body(request)
            if body is None:
                return _error(400, "BadRequest", "request body must be a module document")
            module = module_from_document(body)
        except (json.JSONDecodeError, SchemaError) as exc:
            return _error(400, "BadRequest", str(exc))
        revision = library_save(module, catalog)
        return {"name": module.name, "revision": revision}

    @app.get("/library/modules/{name}")
    async def get_module(name: str):
        from .errors import NotFound
        from .library import library_load

        try:
            module = library_load(catalog, name)
        except NotFound as exc:
            return _error(404, "NotFound", str(exc))
        return {
            "name": module.name,
            "revision": module_revision(module),
            "module": module_document(module),
        }

    return app
