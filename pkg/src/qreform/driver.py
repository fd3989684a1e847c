"""Reformulation experiment orchestration.

Sends questions through operator pipelines on an HTTP reformulation
backend, joins the rewrites with the answerability oracle, and assembles
a per-question decision table. Backend failures mark the question
unanswered for that pipeline and are counted, never fatal.
"""
from __future__ import annotations

import json
import socket
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import (
    BackendError,
    BackendUnavailable,
    EmptyInput,
    EmptyReformulation,
    PipelineStepError,
    ProtocolError,
    Timeout,
)
from .oracle import PassageIndex, answer
from .qtypes import Operator
from .records import QuestionRecord, read_question_records

Pipeline = Tuple[Operator, ...]

OPTIMAL_LABEL = "OPTIMAL"
SINGLE_PIPELINES: Tuple[Pipeline, ...] = ((Operator.REP,), (Operator.ROO,), (Operator.GEN,))


def pipeline_label(ops: Sequence[Operator]) -> str:
    return "+".join(op.value for op in ops)


def parse_pipeline(label: Sequence[str] | str) -> Pipeline:
    names = label.split("+") if isinstance(label, str) else list(label)
    return tuple(Operator(name) for name in names)


@dataclass(frozen=True)
class BackendEndpoint:
    """Where and how to reach a reformulation backend."""

    base_url: str
    timeout: float = 10.0
    max_inflight: int = 4

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be at least 1")

    def url(self, path: str) -> str:
        return self.base_url.rstrip("/") + path


@dataclass(frozen=True)
class ExperimentPlan:
    """Which pipelines to run, against which corpus, at which threshold."""

    pipelines: Tuple[Pipeline, ...]
    threshold: float
    corpus_path: str
    include_optimal: bool = True

    def __post_init__(self) -> None:
        if not self.pipelines:
            raise ValueError("plan needs at least one pipeline")
        if any(not p for p in self.pipelines):
            raise ValueError("pipelines must be non-empty")
        if len(set(self.pipelines)) != len(self.pipelines):
            raise ValueError("duplicate pipelines in plan")
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        if self.include_optimal:
            missing = [pipeline_label(p) for p in SINGLE_PIPELINES if p not in self.pipelines]
            if missing:
                raise ValueError(
                    "OPTIMAL needs all three single-operator pipelines; missing: "
                    + ", ".join(missing)
                )

    @classmethod
    def from_json_dict(cls, data: Dict[str, Any], **overrides: Any) -> "ExperimentPlan":
        fields: Dict[str, Any] = {
            "pipelines": tuple(parse_pipeline(p) for p in data["pipelines"]),
            "threshold": data.get("tau", data.get("threshold")),
            "corpus_path": data.get("corpus", data.get("corpus_path")),
            "include_optimal": data.get("include_optimal", True),
        }
        for key, value in overrides.items():
            if value is not None:
                fields[key] = value
        return cls(**fields)


def _post_json(url: str, payload: Dict[str, Any], timeout: float) -> Dict[str, Any]:
    body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
    request = urllib.request.Request(
        url, data=body, headers={"Content-Type": "application/json; charset=utf-8"}
    )
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            raw = response.read()
    except urllib.error.HTTPError as exc:
        detail = ""
        try:
            detail = json.loads(exc.read().decode("utf-8")).get("error", "")
        except Exception:
            pass
        raise ProtocolError(f"HTTP {exc.code} from backend: {detail}") from exc
    except urllib.error.URLError as exc:
        if isinstance(exc.reason, (socket.timeout, TimeoutError)):
            raise Timeout(f"backend timed out after {timeout}s") from exc
        raise BackendUnavailable(f"cannot reach backend: {exc.reason}") from exc
    except (socket.timeout, TimeoutError) as exc:
        raise Timeout(f"backend timed out after {timeout}s") from exc
    try:
        return json.loads(raw.decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ProtocolError("backend response is not valid JSON") from exc


def reformulate(endpoint: BackendEndpoint, operator: Operator, question: str) -> str:
    """One reformulation call; retries once on transport failure."""
    if not question.strip():
        raise EmptyInput("question must be non-empty")
    payload = {"operator": operator.value, "question": question}
    url = endpoint.url("/reformulate")
    try:
        response = _post_json(url, payload, endpoint.timeout)
    except (BackendUnavailable, Timeout):
        response = _post_json(url, payload, endpoint.timeout)
    if not isinstance(response, dict) or "reformulation" not in response:
        raise ProtocolError("backend response lacks 'reformulation'")
    if response.get("operator") != operator.value:
        raise ProtocolError(
            f"backend echoed operator {response.get('operator')!r}, expected {operator.value!r}"
        )
    reformulation = response["reformulation"]
    if not isinstance(reformulation, str) or not reformulation.strip():
        raise EmptyReformulation(f"backend returned empty reformulation for {operator.value}")
    return reformulation


def run_pipeline(endpoint: BackendEndpoint, ops: Sequence[Operator], question: str) -> str:
    """Apply operators left to right; step i's output feeds step i+1."""
    if not ops:
        raise ValueError("pipeline must contain at least one operator")
    current = question
    for step, op in enumerate(ops):
        try:
            current = reformulate(endpoint, op, current)
        except BackendError as exc:
            raise PipelineStepError(step, exc) from exc
    return current


def health_check(endpoint: BackendEndpoint) -> bool:
    """True iff GET /health returns 200 {"status": "ok"}."""
    try:
        with urllib.request.urlopen(endpoint.url("/health"), timeout=endpoint.timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
        return payload.get("status") == "ok"
    except Exception:
        return False


@dataclass
class DecisionRow:
    """One (question, pipeline) outcome; `error` is kept off the wire."""

    question_id: str
    operator: str
    answered: bool
    score: float
    top_passage_id: Optional[str]
    error: Optional[str] = None

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "question_id": self.question_id,
            "operator": self.operator,
            "answered": self.answered,
            "score": self.score,
            "top_passage_id": self.top_passage_id,
        }


@dataclass
class ExperimentResult:
    """Decision table for one experiment run."""

    rows: List[DecisionRow] = field(default_factory=list)
    questions: int = 0
    error_count: int = 0
    parse_errors: int = 0

    def rows_for(self, label: str) -> List[DecisionRow]:
        return [row for row in self.rows if row.operator == label]

    def flags_for(self, label: str) -> List[int]:
        return [1 if row.answered else 0 for row in self.rows_for(label)]

    def answer_rates(self) -> Dict[str, float]:
        labels = {row.operator for row in self.rows}
        return {
            label: 100.0 * sum(self.flags_for(label)) / self.questions
            for label in sorted(labels)
        }


def _decide(
    endpoint: BackendEndpoint,
    index: PassageIndex,
    threshold: float,
    record: QuestionRecord,
    ops: Pipeline,
) -> DecisionRow:
    label = pipeline_label(ops)
    try:
        rewritten = run_pipeline(endpoint, ops, record.text)
        decision = answer(index, rewritten, threshold)
    except (BackendError, EmptyInput) as exc:
        return DecisionRow(
            question_id=record.id,
            operator=label,
            answered=False,
            score=0.0,
            top_passage_id=None,
            error=str(exc),
        )
    return DecisionRow(
        question_id=record.id,
        operator=label,
        answered=decision.answered,
        score=decision.score,
        top_passage_id=decision.top_passage_id,
    )


def run_experiment(
    plan: ExperimentPlan,
    endpoint: BackendEndpoint,
    index: PassageIndex,
) -> ExperimentResult:
    """Run every pipeline over the plan's corpus and join with the oracle.

    Questions are processed concurrently up to the endpoint's in-flight
    budget; the output table is keyed and ordered by input position, so
    completion order never changes the result.
    """
    records, parse_errors = read_question_records(plan.corpus_path)
    result = ExperimentResult(questions=len(records), parse_errors=parse_errors)

    def per_question(record: QuestionRecord) -> List[DecisionRow]:
        rows = [
            _decide(endpoint, index, plan.threshold, record, ops)
            for ops in plan.pipelines
        ]
        if plan.include_optimal:
            singles = {pipeline_label(p) for p in SINGLE_PIPELINES}
            single_rows = [row for row in rows if row.operator in singles]
            best = max(single_rows, key=lambda row: row.score)
            rows.append(
                DecisionRow(
                    question_id=record.id,
                    operator=OPTIMAL_LABEL,
                    answered=any(row.answered for row in single_rows),
                    score=best.score,
                    top_passage_id=best.top_passage_id,
                )
            )
        return rows

    if endpoint.max_inflight == 1:
        outcomes = [per_question(record) for record in records]
    else:
        with ThreadPoolExecutor(max_workers=endpoint.max_inflight) as pool:
            outcomes = list(pool.map(per_question, records))

    for rows in outcomes:
        result.rows.extend(rows)
        result.error_count += sum(1 for row in rows if row.error is not None)
    return result
