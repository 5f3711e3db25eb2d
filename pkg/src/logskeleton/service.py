"""HTTP facade: log upload, skeleton views, classification.

The service keeps uploaded logs in memory (optionally mirrored to a
data directory and reloaded on startup).  Logs are immutable once
uploaded, so skeleton views are cached per (log, filter, view) with an
LRU bound and no invalidation.  Responses are rendered through the same
helpers as the CLI, byte for byte.

Endpoints:

* ``POST /logs?format=F&name=N`` — raw log file as the request body;
  returns the stored log's handle.  400 on parse failure, 413 over the
  size limit.
* ``GET /logs`` / ``GET /logs/{id}`` — stored handles.
* ``GET /logs/{id}/skeleton`` — graph document for the filtered log
  under the requested view; parameters ``required``, ``forbidden``,
  ``activities``, ``relations`` (comma-separated or repeated), ``hyper``
  and ``format`` (``json`` or ``dot``).
* ``POST /logs/{id}/classify`` — body ``{"traces": ..., "config": ...}``
  where traces are a trace-lines document (all-or-nothing) or a list of
  lines / activity-name lists (per-item errors reported inline).
  Long-running classifications are cut off after a configurable timeout
  with a 504 response.
"""

from __future__ import annotations

import json
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from .classify import ClassifierConfig, classify_batch
from .ingest import (
    ParseError,
    canonical_json,
    parse_log,
    parse_trace_line,
    parse_trace_list,
    verdict_to_dict,
)
from .model import ActivityLog, ActivityTrace, FilterSpec, regular
from .render import (
    ViewConfig,
    build_view,
    graph_doc,
    parse_relation_tokens,
    provenance_comments,
    resolve_activity_token,
    to_dot,
)

DEFAULT_MAX_UPLOAD = 16 * 1024 * 1024


@dataclass(frozen=True)
class ServiceConfig:
    data_dir: Path | None = None
    ui_dir: Path | None = None
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD
    cache_size: int = 128
    classify_timeout_s: float = 60.0
    cors: bool = True  # dev convenience for a separately served UI


class LogStore:
    """Uploaded logs by stable id; optionally persisted as raw bytes."""

    def __init__(self, data_dir: Path | None):
        self._lock = threading.Lock()
        self._entries: OrderedDict[str, dict] = OrderedDict()
        self._counter = 0
        self._data_dir = data_dir
        if data_dir is not None:
            data_dir.mkdir(parents=True, exist_ok=True)
            self._load_existing(data_dir)

    def _load_existing(self, data_dir: Path) -> None:
        for meta_path in sorted(data_dir.glob("*.json")):
            try:
                meta = json.loads(meta_path.read_text())
                raw = (data_dir / f"{meta['id']}.raw").read_bytes()
                log = parse_log(raw, meta["format"])
            except (OSError, KeyError, ValueError):
                continue
            self._entries[meta["id"]] = {"name": meta["name"], "format": meta["format"], "log": log}
            number = meta["id"].removeprefix("log")
            if number.isdigit():
                self._counter = max(self._counter, int(number))

    def add(self, name: str, fmt: str, raw: bytes, log: ActivityLog) -> str:
        with self._lock:
            self._counter += 1
            log_id = f"log{self._counter}"
            self._entries[log_id] = {"name": name, "format": fmt, "log": log}
        if self._data_dir is not None:
            (self._data_dir / f"{log_id}.raw").write_bytes(raw)
            (self._data_dir / f"{log_id}.json").write_text(
                json.dumps({"id": log_id, "name": name, "format": fmt})
            )
        return log_id

    def get(self, log_id: str) -> dict:
        entry = self._entries.get(log_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown log id: {log_id}")
        return entry

    def handles(self) -> list[dict]:
        return [self.handle(log_id) for log_id in self._entries]

    def handle(self, log_id: str) -> dict:
        entry = self.get(log_id)
        log: ActivityLog = entry["log"]
        return {
            "id": log_id,
            "name": entry["name"],
            "alphabet": sorted(a.display for a in log.alphabet),
            "trace_count": log.total,
        }


class _ViewCache:
    def __init__(self, size: int):
        self._size = size
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple, tuple] = OrderedDict()

    def get_or_build(self, key: tuple, build):
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                return self._entries[key]
        value = build()
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self._size:
                self._entries.popitem(last=False)
        return value


def _split_params(values: list[str]) -> list[str]:
    tokens: list[str] = []
    for value in values:
        tokens.extend(t for t in value.split(",") if t != "")
    return tokens


def create_app(config: ServiceConfig = ServiceConfig()) -> FastAPI:
    app = FastAPI(title="log skeleton service")
    store = LogStore(config.data_dir)
    cache = _ViewCache(config.cache_size)
    executor = ThreadPoolExecutor(max_workers=4)
    app.state.store = store

    if config.cors:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=["*"],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def json_response(payload: object, status_code: int = 200) -> Response:
        return Response(
            content=canonical_json(payload),
            media_type="application/json",
            status_code=status_code,
        )

    @app.post("/logs", status_code=201)
    async def upload_log(
        request: Request,
        format: str = Query("trace-lines"),
        name: str = Query("log"),
    ) -> Response:
        raw = await request.body()
        if len(raw) > config.max_upload_bytes:
            raise HTTPException(status_code=413, detail="upload exceeds the size limit")
        try:
            log = parse_log(raw, format)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        log_id = store.add(name, format, raw, log)
        return json_response(store.handle(log_id), status_code=201)

    @app.get("/logs")
    def list_logs() -> Response:
        return json_response({"logs": store.handles()})

    @app.get("/logs/{log_id}")
    def get_log(log_id: str) -> Response:
        return json_response(store.handle(log_id))

    @app.get("/logs/{log_id}/skeleton")
    def skeleton_view(
        log_id: str,
        required: list[str] = Query(default=[]),
        forbidden: list[str] = Query(default=[]),
        activities: list[str] = Query(default=[]),
        relations: list[str] = Query(default=[]),
        hyper: bool = Query(default=False),
        format: str = Query(default="json"),
    ) -> Response:
        entry = store.get(log_id)
        log: ActivityLog = entry["log"]
        if format not in ("json", "dot"):
            raise HTTPException(status_code=400, detail=f"unknown format: {format!r}")
        try:
            spec = FilterSpec(
                frozenset(regular(n) for n in _split_params(required)),
                frozenset(regular(n) for n in _split_params(forbidden)),
            )
            relation_tokens = _split_params(relations)
            view = ViewConfig(
                activities=(
                    frozenset(resolve_activity_token(t) for t in _split_params(activities))
                    if activities
                    else None
                ),
                relations=(
                    parse_relation_tokens(relation_tokens)
                    if relation_tokens
                    else ViewConfig().relations
                ),
                hyper=hyper,
            )
            key = (log_id, spec, view)
            graph, provenance = cache.get_or_build(
                key, lambda: build_view(log, spec, view, log_name=entry["name"])
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        if format == "dot":
            return PlainTextResponse(to_dot(graph, provenance_comments(provenance)))
        return json_response({"graph": graph_doc(graph), "provenance": provenance})

    @app.post("/logs/{log_id}/classify")
    async def classify(log_id: str, request: Request) -> Response:
        entry = store.get(log_id)
        log: ActivityLog = entry["log"]
        try:
            body = json.loads(await request.body())
        except ValueError:
            raise HTTPException(status_code=400, detail="request body is not valid JSON") from None
        if not isinstance(body, dict) or "traces" not in body:
            raise HTTPException(status_code=400, detail="body must carry a 'traces' field")
        try:
            cfg = ClassifierConfig(**body.get("config", {}))
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"bad config: {exc}") from None

        raw_traces = body["traces"]
        traces: list[ActivityTrace] = []
        errors: dict[int, str] = {}
        if isinstance(raw_traces, str):
            try:
                traces = parse_trace_list(raw_traces)
            except ParseError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from None
            positions = list(range(len(traces)))
            total = len(traces)
        elif isinstance(raw_traces, list):
            positions = []
            total = len(raw_traces)
            for i, item in enumerate(raw_traces):
                try:
                    if isinstance(item, str):
                        parsed = parse_trace_line(item, line=i + 1)
                        if parsed is None:
                            raise ParseError("blank line", i + 1)
                        traces.append(parsed[0])
                    elif isinstance(item, list):
                        traces.append(ActivityTrace(tuple(regular(str(n)) for n in item)))
                    else:
                        raise ParseError("trace entries must be strings or name lists", i + 1)
                    positions.append(i)
                except ValueError as exc:
                    errors[i] = str(exc)
        else:
            raise HTTPException(status_code=400, detail="'traces' must be a string or a list")

        future = executor.submit(classify_batch, log, traces, cfg)
        try:
            verdicts = future.result(timeout=config.classify_timeout_s)
        except FutureTimeoutError:
            future.cancel()
            raise HTTPException(status_code=504, detail="classification timed out") from None

        rows: list[dict] = [{} for _ in range(total)]
        for position, verdict in zip(positions, verdicts):
            rows[position] = verdict_to_dict(replace(verdict, index=position))
        for position, message in errors.items():
            rows[position] = {"id": position + 1, "error": message}
        return json_response({"verdicts": rows})

    if config.ui_dir is not None and (config.ui_dir / "index.html").exists():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def root() -> Response:
            return json_response(
                {
                    "service": "log skeleton",
                    "endpoints": [
                        "POST /logs?format=&name=",
                        "GET /logs",
                        "GET /logs/{id}",
                        "GET /logs/{id}/skeleton",
                        "POST /logs/{id}/classify",
                    ],
                }
            )

    return app


def run(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
