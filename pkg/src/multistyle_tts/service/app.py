"""HTTP service: synthesis endpoint plus listening-test session hosting.

Listener-facing payloads never contain the correct answer, style names, or
anything else that would unblind a stimulus; items and media files are
referenced by opaque ids only.
"""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..evalkit import (
    Answer,
    PreferenceItem,
    QueryMatchItem,
    load_abx_items,
    score_abx,
    score_preference,
    score_query_match,
)
from ..pipeline import StyleExtractor, SynthesisRequest, SynthesisError, TtsStack, synthesize
from ..stylemodel.embedding import StyleEmbedding
from .config import ServiceConfig
from .store import TEST_KINDS, SessionStore


class StyleSpec(BaseModel):
    named: Optional[str] = None
    embedding: Optional[list[float]] = None
    query_id: Optional[str] = None


class SynthesizeBody(BaseModel):
    text: str
    style: StyleSpec
    speaker: int = 0


class AnswerBody(BaseModel):
    item_id: str
    choice: str


def _load_models(config: ServiceConfig):
    """Best-effort model loading; the synth endpoint 503s if unavailable."""
    stack = None
    extractor = None
    try:
        if config.prosody_path and config.acoustic_path:
            from ..tts.checkpoint import load_tts_model

            neural = None
            if config.vocoder == "neural" and config.neural_vocoder_path:
                neural = load_tts_model(config.neural_vocoder_path)
            stack = TtsStack(
                prosody=load_tts_model(config.prosody_path),
                acoustic=load_tts_model(config.acoustic_path),
                vocoder=config.vocoder,
                neural_vocoder=neural,
                sample_rate=config.sample_rate,
            )
        if config.classifier_path:
            from ..corpus.normalize import NormStats
            from ..stylemodel.checkpoint import load_classifier

            stats = NormStats.load(config.norm_stats_path) if config.norm_stats_path else None
            extractor = StyleExtractor(classifier=load_classifier(config.classifier_path), stats=stats)
    except FileNotFoundError:
        stack = None
    return stack, extractor


def _load_pool(pool_dir: Path) -> dict:
    pool: dict = {"abx": [], "preference": [], "query_match": [], "queries": {}}
    abx_path = pool_dir / "abx_items.jsonl"
    if abx_path.exists():
        pool["abx"] = load_abx_items(abx_path)
    pref_path = pool_dir / "preference_items.jsonl"
    if pref_path.exists():
        with open(pref_path, "r", encoding="utf-8") as f:
            pool["preference"] = [
                PreferenceItem(id=r["id"], slots=r["slots"], arm_by_slot=r["arm_by_slot"])
                for r in map(json.loads, filter(str.strip, f))
            ]
    qm_path = pool_dir / "query_match_items.jsonl"
    if qm_path.exists():
        with open(qm_path, "r", encoding="utf-8") as f:
            pool["query_match"] = [
                QueryMatchItem(id=r["id"], query_audio=r["query_audio"], response_audio=r["response_audio"])
                for r in map(json.loads, filter(str.strip, f))
            ]
    queries_path = pool_dir / "queries.jsonl"
    if queries_path.exists():
        with open(queries_path, "r", encoding="utf-8") as f:
            for r in map(json.loads, filter(str.strip, f)):
                pool["queries"][r["id"]] = r
    return pool


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="multistyle-tts")
    data_dir = Path(config.data_dir)
    media_dir = Path(config.media_dir)
    media_dir.mkdir(parents=True, exist_ok=True)
    store = SessionStore(data_dir)
    pool = _load_pool(Path(config.pool_dir))
    stack, extractor = _load_models(config)

    items_by_kind = {
        "abx": {item.id: item for item in pool["abx"]},
        "preference": {item.id: item for item in pool["preference"]},
        "query_match": {item.id: item for item in pool["query_match"]},
    }

    app.mount("/media", StaticFiles(directory=str(media_dir)), name="media")

    def _media_url(name: str) -> str:
        return f"/media/{name}"

    def _item_payload(kind: str, item) -> dict:
        if kind == "abx":
            audio = {"a": _media_url(item.audio_a), "b": _media_url(item.audio_b), "x": _media_url(item.audio_x)}
        elif kind == "preference":
            audio = {slot: _media_url(ref) for slot, ref in sorted(item.slots.items())}
        else:
            audio = {"query": _media_url(item.query_audio), "response": _media_url(item.response_audio)}
        return {"item_id": item.id, "audio": audio}

    @app.post("/api/synthesize")
    def synthesize_endpoint(body: SynthesizeBody):
        if stack is None:
            raise HTTPException(status_code=503, detail="TTS models not loaded")
        if not body.text.strip():
            raise HTTPException(status_code=422, detail="empty text")
        sources = [s for s in (body.style.named, body.style.embedding, body.style.query_id) if s is not None]
        if len(sources) != 1:
            raise HTTPException(status_code=400, detail=f"exactly one style source required, got {len(sources)}")

        request_kwargs: dict = {"text": body.text, "speaker": body.speaker}
        if body.style.named is not None:
            request_kwargs["style_name"] = body.style.named
        elif body.style.embedding is not None:
            try:
                request_kwargs["style_embedding"] = StyleEmbedding(np.asarray(body.style.embedding))
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
        else:
            query = pool["queries"].get(body.style.query_id)
            if query is None:
                raise HTTPException(status_code=400, detail=f"unknown query id {body.style.query_id!r}")
            if extractor is None:
                raise HTTPException(status_code=503, detail="style extraction model not loaded")
            request_kwargs["query_audio"] = str(media_dir / query["audio"])
            request_kwargs["query_text"] = query["text"]

        try:
            wav, emb = synthesize(SynthesisRequest(**request_kwargs), stack, extractor)
        except SynthesisError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        from ..audio import wav_bytes

        return Response(
            content=wav_bytes(wav),
            media_type="audio/wav",
            headers={"X-Style-Embedding": json.dumps(emb.tolist())},
        )

    def _session_or_404(kind: str, sid: str):
        if kind not in TEST_KINDS:
            raise HTTPException(status_code=404, detail=f"unknown test kind {kind!r}")
        session = store.get(kind, sid)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.get("/api/test/{kind}/session")
    def create_session(kind: str):
        if kind not in TEST_KINDS:
            raise HTTPException(status_code=404, detail=f"unknown test kind {kind!r}")
        items = pool[kind]
        if not items:
            raise HTTPException(status_code=404, detail=f"no {kind} test pool built")
        session = store.create(kind, [item.id for item in items])
        return {"session_id": session.session_id, "kind": kind, "total": len(items)}

    @app.get("/api/test/{kind}/{sid}/next")
    def next_item(kind: str, sid: str):
        session = _session_or_404(kind, sid)
        item_id = session.next_item_id()
        if item_id is None:
            raise HTTPException(status_code=410, detail="session complete")
        payload = _item_payload(kind, items_by_kind[kind][item_id])
        payload["answered"] = session.cursor
        payload["total"] = len(session.item_ids)
        return payload

    @app.post("/api/test/{kind}/{sid}/answer")
    def post_answer(kind: str, sid: str, body: AnswerBody):
        session = _session_or_404(kind, sid)
        item = items_by_kind[kind].get(body.item_id)
        if item is None or body.item_id not in session.item_ids:
            raise HTTPException(status_code=404, detail="unknown item for this session")
        # No completion guard here: in a complete session every item is
        # already answered, so the duplicate check below answers with 409.

        if kind == "abx":
            choice = body.choice.upper()
            if choice not in ("A", "B"):
                raise HTTPException(status_code=400, detail="choice must be A or B")
        elif kind == "preference":
            # Listeners answer with a blind slot name; store the resolved arm.
            arm = item.arm_by_slot.get(body.choice)
            if arm is None:
                raise HTTPException(status_code=400, detail=f"choice must be one of {sorted(item.arm_by_slot)}")
            choice = arm
        else:
            choice = body.choice.lower()
            if choice not in ("good", "bad"):
                raise HTTPException(status_code=400, detail="choice must be good or bad")

        answer = Answer(session_id=sid, item_id=body.item_id, choice=choice, timestamp=time.time())
        if not store.record_answer(session, answer):
            raise HTTPException(status_code=409, detail="item already answered in this session")
        return {"accepted": True, "answered": session.cursor, "total": len(session.item_ids)}

    @app.get("/api/results/{kind}")
    def results(kind: str):
        if kind not in TEST_KINDS:
            raise HTTPException(status_code=404, detail=f"unknown test kind {kind!r}")
        answers = store.logs[kind].answers()
        if not answers:
            return {"kind": kind, "total": 0}
        if kind == "abx":
            report = score_abx(answers, pool["abx"])
            return {
                "kind": kind,
                "total": report.total,
                "matches": report.matches,
                "accuracy_percent": report.percent,
                "per_pair": {f"{a}|{b}": {"matches": m, "total": n} for (a, b), (m, n) in report.per_pair.items()},
            }
        if kind == "preference":
            report = score_preference(answers)
            return {
                "kind": kind,
                "total": report.total,
                "tallies": report.tallies,
                "percentages": report.percentages,
            }
        rate = score_query_match(answers)
        good = sum(1 for a in answers if a.choice == "good")
        return {"kind": kind, "total": len(answers), "good": good, "match_rate_percent": 100.0 * rate}

    return app
