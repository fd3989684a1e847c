"""Reference reformulation backend: echoes every question unchanged.

Implements the reformulation wire protocol:

    POST /reformulate  {"operator": "REP"|"ROO"|"GEN", "question": str}
        -> 200 {"operator": str, "reformulation": str}
        -> 400 {"error": str} for unknown operator or empty question
    GET  /health       -> 200 {"status": "ok"}

The handler takes a pluggable (operator, question) -> str transform, so
tests can stand up scripted backends on the same protocol.
"""
from __future__ import annotations

import argparse
import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Optional, Sequence

from .qtypes import Operator

Transform = Callable[[str, str], str]

_VALID_OPERATORS = {op.value for op in Operator}


def identity_transform(operator: str, question: str) -> str:
    return question


class ProtocolHandler(BaseHTTPRequestHandler):
    """One wire-protocol request; the transform hangs off the server."""

    protocol_version = "HTTP/1.1"

    def log_message(self, fmt: str, *args: object) -> None:  # silence request logging
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:
        if self.path == "/health":
            self._send_json(200, {"status": "ok"})
        else:
            self._send_json(404, {"error": "not found"})

    def do_POST(self) -> None:
        if self.path != "/reformulate":
            self._send_json(404, {"error": "not found"})
            return
        length = int(self.headers.get("Content-Length", "0"))
        try:
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError):
            self._send_json(400, {"error": "invalid JSON body"})
            return
        operator = payload.get("operator")
        question = payload.get("question")
        if operator not in _VALID_OPERATORS:
            self._send_json(400, {"error": f"unknown operator: {operator!r}"})
            return
        if not isinstance(question, str) or not question.strip():
            self._send_json(400, {"error": "empty question"})
            return
        transform: Transform = self.server.transform  # type: ignore[attr-defined]
        try:
            reformulation = transform(operator, question)
        except Exception as exc:  # scripted backends may refuse a question
            self._send_json(500, {"error": str(exc)})
            return
        self._send_json(200, {"operator": operator, "reformulation": reformulation})


class BackendServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple, transform: Transform):
        super().__init__(address, ProtocolHandler)
        self.transform = transform


def make_server(
    host: str = "127.0.0.1",
    port: int = 0,
    transform: Optional[Transform] = None,
) -> BackendServer:
    """Create (but do not start) a protocol server; port 0 picks a free port."""
    return BackendServer((host, port), transform or identity_transform)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Run the identity reformulation backend")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8250)
    args = parser.parse_args(argv)
    server = make_server(args.host, args.port)
    print(f"identity backend listening on http://{args.host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
