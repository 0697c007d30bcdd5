"""Chat-completion gateway with record/replay caching, retries, and rate limiting.

Live requests go to a configurable chat-completions endpoint (single user
turn). Record mode writes every response into a content-addressed cache;
replay mode serves exclusively from that cache and never touches the network,
which is what makes the rest of the pipeline reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

import requests

from .prompting import RenderedPrompt

DEFAULT_ENDPOINT = "https://api.groq.com/openai/v1/chat/completions"
API_KEY_ENV = "LLM_API_KEY"

RETRYABLE_STATUS = {429, 500, 502, 503, 504}


class GatewayError(RuntimeError):
    pass


class ReplayCacheMiss(GatewayError):
    def __init__(self, unit_id: str, key: str):
        super().__init__(f"replay cache miss for unit {unit_id} (key {key})")
        self.unit_id = unit_id
        self.key = key


class GatewayMode(Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class ModelSettings:
    model_name: str = "llama-3-8b-instruct"
    temperature: float = 0.0
    seed: int = 42
    max_tokens: int = 1024
    endpoint_url: str = DEFAULT_ENDPOINT

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be > 0")


@dataclass(frozen=True)
class RawResponse:
    text: str
    unit_id: str
    prompt_hash: str
    model_name: str
    retrieved_at: str
    source: str  # "live" | "cache"


def cache_key(prompt: RenderedPrompt, settings: ModelSettings) -> str:
    """Stable digest over prompt content and the settings that affect output."""
    material = json.dumps(
        {
            "content_hash": prompt.content_hash,
            "model_name": settings.model_name,
            "temperature": repr(settings.temperature),
            "seed": settings.seed,
            "max_tokens": settings.max_tokens,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class ResponseCache:
    """File cache: cache/<first 2 hex of key>/<key>.json; entries are immutable."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.Lock()

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> dict | None:
        path = self._path(key)
        if not path.exists():
            return None
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)

    def put(self, key: str, prompt_hash: str, settings: ModelSettings, response_text: str) -> None:
        with self._lock:
            path = self._path(key)
            if path.exists():
                return  # entries are write-once
            path.parent.mkdir(parents=True, exist_ok=True)
            entry = {
                "key": key,
                "prompt_hash": prompt_hash,
                "settings": {
                    "model_name": settings.model_name,
                    "temperature": settings.temperature,
                    "seed": settings.seed,
                    "max_tokens": settings.max_tokens,
                },
                "response_text": response_text,
                "retrieved_at": _now_iso(),
            }
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, ensure_ascii=False, indent=1), encoding="utf-8")
            tmp.replace(path)


class RateLimiter:
    """Sliding-window limiter: at most `rpm` acquisitions per 60s window."""

    def __init__(self, rpm: int, clock=time.monotonic, sleep=time.sleep):
        self.rpm = rpm
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._stamps: list[float] = []

    def acquire(self) -> None:
        if self.rpm <= 0:
            return
        while True:
            with self._lock:
                now = self._clock()
                self._stamps = [t for t in self._stamps if now - t < 60.0]
                if len(self._stamps) < self.rpm:
                    self._stamps.append(now)
                    return
                wait = 60.0 - (now - self._stamps[0])
            self._sleep(max(wait, 0.01))


@dataclass
class RetryPolicy:
    attempts: int = 5
    base_delay: float = 1.0
    jitter: float = 0.2  # +-20%


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


class Gateway:
    def __init__(
        self,
        settings: ModelSettings,
        cache: ResponseCache,
        mode: GatewayMode = GatewayMode.REPLAY,
        rate_limiter: RateLimiter | None = None,
        retry: RetryPolicy | None = None,
        api_key: str | None = None,
        sleep=time.sleep,
        rng: random.Random | None = None,
    ):
        self.settings = settings
        self.cache = cache
        self.mode = mode
        self.rate_limiter = rate_limiter or RateLimiter(rpm=0)
        self.retry = retry or RetryPolicy()
        self._api_key = api_key
        self._sleep = sleep
        self._rng = rng or random.Random()

    @property
    def api_key(self) -> str | None:
        return self._api_key if self._api_key is not None else os.environ.get(API_KEY_ENV)

    def complete(self, prompt: RenderedPrompt) -> RawResponse:
        key = cache_key(prompt, self.settings)

        if self.mode is GatewayMode.REPLAY:
            entry = self.cache.get(key)
            if entry is None:
                raise ReplayCacheMiss(prompt.unit_id, key)
            return RawResponse(
                text=entry["response_text"],
                unit_id=prompt.unit_id,
                prompt_hash=prompt.content_hash,
                model_name=self.settings.model_name,
                retrieved_at=entry.get("retrieved_at", ""),
                source="cache",
            )

        text = self._request_with_retries(prompt)
        if self.mode is GatewayMode.RECORD:
            self.cache.put(key, prompt.content_hash, self.settings, text)
        return RawResponse(
            text=text,
            unit_id=prompt.unit_id,
            prompt_hash=prompt.content_hash,
            model_name=self.settings.model_name,
            retrieved_at=_now_iso(),
            source="live",
        )

    def _request_with_retries(self, prompt: RenderedPrompt) -> str:
        last_status = None
        for attempt in range(self.retry.attempts):
            if attempt > 0:
                delay = self.retry.base_delay * (2 ** (attempt - 1))
                delay *= 1.0 + self._rng.uniform(-self.retry.jitter, self.retry.jitter)
                self._sleep(delay)
            self.rate_limiter.acquire()
            try:
                resp = self._post(prompt)
            except requests.ConnectionError as exc:
                last_status = f"connection error: {exc}"
                continue
            if resp.status_code in RETRYABLE_STATUS:
                last_status = resp.status_code
                continue
            if resp.status_code != 200:
                raise GatewayError(
                    f"endpoint returned HTTP {resp.status_code} for unit {prompt.unit_id}"
                )
            return self._extract_content(resp, prompt)
        raise GatewayError(
            f"giving up after {self.retry.attempts} attempts for unit {prompt.unit_id} "
            f"(last: {last_status})"
        )

    def _post(self, prompt: RenderedPrompt) -> requests.Response:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = {
            "model": self.settings.model_name,
            "messages": [{"role": "user", "content": prompt.text}],
            "temperature": self.settings.temperature,
            "seed": self.settings.seed,
            "max_tokens": self.settings.max_tokens,
        }
        return requests.post(
            self.settings.endpoint_url, headers=headers, json=payload, timeout=120
        )

    @staticmethod
    def _extract_content(resp: requests.Response, prompt: RenderedPrompt) -> str:
        try:
            doc = resp.json()
            content = doc["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise GatewayError(
                f"malformed endpoint reply for unit {prompt.unit_id}: {exc}"
            ) from exc
        if not isinstance(content, str):
            raise GatewayError(f"malformed endpoint reply for unit {prompt.unit_id}: "
                               "message content is not text")
        return content
