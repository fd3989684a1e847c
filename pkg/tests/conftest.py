from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Callable, Iterator, Mapping, Optional, Sequence

import pytest

from qreform.identity_backend import BackendServer, make_server


@pytest.fixture
def write_ndjson_file(tmp_path: Path) -> Callable[[str, Sequence[Mapping]], Path]:
    def _write(name: str, rows: Sequence[Mapping]) -> Path:
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        return path

    return _write


def start_backend(transform: Optional[Callable[[str, str], str]] = None) -> tuple[BackendServer, str]:
    server = make_server("127.0.0.1", 0, transform)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    return server, f"http://{host}:{port}"


@pytest.fixture
def backend_factory() -> Iterator[Callable[..., str]]:
    servers: list[BackendServer] = []

    def _start(transform: Optional[Callable[[str, str], str]] = None) -> str:
        server, url = start_backend(transform)
        servers.append(server)
        return url

    yield _start
    for server in servers:
        server.shutdown()
        server.server_close()


@pytest.fixture
def identity_backend_url(backend_factory) -> str:
    return backend_factory(None)
