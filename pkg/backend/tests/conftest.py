from __future__ import annotations

import json
import threading
from pathlib import Path

import pytest

from qreform_backend.data import Vocab
from qreform_backend.model import build_model, save_checkpoint
from qreform_backend.server import InferenceServer, ReformulationModel, make_server
from qreform_backend.training import TrainingConfig


def write_pairs(path: Path, rows) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


def pair_row(source: str, target: str, operator: str) -> dict:
    target_type = "root" if operator == "ROO" else "other"
    return {
        "source": source,
        "target": target,
        "operator": operator,
        "source_type": "other",
        "target_type": target_type,
        "origin": "annotated",
    }


@pytest.fixture(scope="session")
def untrained_checkpoint(tmp_path_factory) -> Path:
    """A valid checkpoint directory whose model has never been trained."""
    out = tmp_path_factory.mktemp("ckpt") / "untrained"
    config = TrainingConfig(d_model=32, encoder_layers=1, decoder_layers=1, ffn_dim=64)
    vocab = Vocab.from_texts(["alpha bravo charlie delta echo", "ALPHA BRAVO"])
    import torch

    torch.manual_seed(0)
    model = build_model(len(vocab), config)
    save_checkpoint(out, model, vocab, config, meta={"stage": "untrained"})
    return out


def start_server(model: ReformulationModel | None) -> tuple[InferenceServer, str]:
    server = make_server("127.0.0.1", 0, model=model)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    return server, f"http://{host}:{port}"


@pytest.fixture
def server_factory():
    servers: list[InferenceServer] = []

    def _start(model: ReformulationModel | None) -> str:
        server, url = start_server(model)
        servers.append(server)
        return url

    yield _start
    for server in servers:
        server.shutdown()
        server.server_close()
