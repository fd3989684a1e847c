"""Inference server speaking the reformulation wire protocol.

    POST /reformulate  {"operator": "REP"|"ROO"|"GEN", "question": str}
        -> 200 {"operator": str, "reformulation": str}
        -> 400 {"error": str} unknown operator / empty question
        -> 503 {"error": str} while the model is still loading
    GET  /health       -> 200 {"status": "ok"}

Decoding is greedy (beam search off by default) with the special tokens
suppressed, so identical requests always produce identical responses;
model invocations are serialized behind a lock.
"""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

import torch

from .data import BOS, DEFAULT_PREFIX_FORMAT, OPERATORS, PAD, UNK, Vocab, render_prefixed
from .model import load_checkpoint

MAX_NEW_TOKENS = 64


class ReformulationModel:
    """A loaded checkpoint plus its deterministic decoding routine."""

    def __init__(self, model, vocab: Vocab, prefix_format: str = DEFAULT_PREFIX_FORMAT,
                 max_source_len: int = 48, max_new_tokens: int = MAX_NEW_TOKENS,
                 num_beams: int = 1):
        self.model = model.eval()
        self.vocab = vocab
        self.prefix_format = prefix_format
        self.max_source_len = max_source_len
        self.max_new_tokens = max_new_tokens
        self.num_beams = num_beams
        self._lock = threading.Lock()

    @classmethod
    def from_checkpoint(cls, checkpoint_dir: str | Path, **kwargs) -> "ReformulationModel":
        model, vocab, _ = load_checkpoint(checkpoint_dir)
        return cls(model, vocab, **kwargs)

    def reformulate(self, operator: str, question: str) -> str:
        text = render_prefixed(operator, question, self.prefix_format)
        ids = self.vocab.encode(text, self.max_source_len)
        input_ids = torch.tensor([ids], dtype=torch.long)
        attention = torch.ones_like(input_ids)
        with self._lock, torch.no_grad():
            generated = self.model.generate(
                input_ids=input_ids,
                attention_mask=attention,
                max_new_tokens=self.max_new_tokens,
                min_new_tokens=1,
                do_sample=False,
                num_beams=self.num_beams,
                suppress_tokens=[PAD, BOS, UNK],
            )
        return self.vocab.decode(generated[0][1:])


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt: str, *args: object) -> None:
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
        model: Optional[ReformulationModel] = self.server.model  # type: ignore[attr-defined]
        if model is None:
            self._send_json(503, {"error": "model is loading"})
            return
        length = int(self.headers.get("Content-Length", "0"))
        try:
            payload = json.loads(self.rfile.read(length).decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError):
            self._send_json(400, {"error": "invalid JSON body"})
            return
        operator = payload.get("operator")
        question = payload.get("question")
        if operator not in OPERATORS:
            self._send_json(400, {"error": f"unknown operator: {operator!r}"})
            return
        if not isinstance(question, str) or not question.strip():
            self._send_json(400, {"error": "empty question"})
            return
        reformulation = model.reformulate(operator, question)
        self._send_json(200, {"operator": operator, "reformulation": reformulation})


class InferenceServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple, model: Optional[ReformulationModel]):
        super().__init__(address, _Handler)
        self.model = model


def make_server(
    host: str = "127.0.0.1", port: int = 0, model: Optional[ReformulationModel] = None
) -> InferenceServer:
    """Create (not start) the server; attach the model later to go ready."""
    return InferenceServer((host, port), model)


def serve(checkpoint_dir: str | Path, host: str = "127.0.0.1", port: int = 8260) -> None:
    """Load a checkpoint and serve forever; answers 503 until loading ends."""
    server = make_server(host, port, model=None)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        server.model = ReformulationModel.from_checkpoint(checkpoint_dir)
        print(
            f"reformulation backend ready on http://{host}:{server.server_address[1]}"
        )
        thread.join()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
        server.server_close()
