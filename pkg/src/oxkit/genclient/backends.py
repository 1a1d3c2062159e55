"""Generation backends: a deterministic stub and a generic HTTP adapter.

A backend turns (prompt, n, size) into a list of RGB rasters. The HTTP
adapter speaks the common images-generation wire shape (JSON request,
base64 image payloads) with retry/backoff on transient failures; the stub
fabricates seeded checkerboards so nothing in the test suite touches a live
API.
"""

from __future__ import annotations

import base64
import io
import time
from dataclasses import dataclass

import httpx
import numpy as np
from PIL import Image

from ..errors import ConfigError, InputError, OxkitError

DEFAULT_PROMPT = "Herd of muskoxen seen from above with a winter background, aerial imagery"
MAX_BATCH = 10
SUPPORTED_SIZES = (256, 512, 1024)

API_KEY_ENV = "OXGEN_API_KEY"

RETRYABLE_STATUS = {408, 429, 500, 502, 503, 504}


class GenBackendError(OxkitError):
    """Generation failed after exhausting retries, or the payload was bad."""


@dataclass(frozen=True)
class GenRequest:
    """One batch generation request."""

    prompt: str = DEFAULT_PROMPT
    n: int = MAX_BATCH
    size: int = 1024
    backend: str = "stub"

    def __post_init__(self):
        if not 1 <= self.n <= MAX_BATCH:
            raise InputError(f"batch size {self.n} outside [1, {MAX_BATCH}]")
        if self.size not in SUPPORTED_SIZES:
            raise InputError(f"size {self.size} not one of {SUPPORTED_SIZES}")
        if not self.prompt.strip():
            raise InputError("prompt must be non-empty")


class StubBackend:
    """Deterministic offline backend producing seeded checkerboards."""

    name = "stub"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._calls = 0

    def generate(self, prompt: str, n: int, size: int) -> list[np.ndarray]:
        call_index = self._calls
        self._calls += 1
        images = []
        for i in range(n):
            rng = np.random.default_rng(np.random.SeedSequence([self.seed, call_index, i]))
            cell = int(rng.choice([16, 32, 64]))
            c0 = rng.integers(0, 256, 3, dtype=np.uint8)
            c1 = rng.integers(0, 256, 3, dtype=np.uint8)
            yy, xx = np.mgrid[0:size, 0:size]
            board = ((yy // cell + xx // cell) % 2).astype(bool)
            img = np.where(board[:, :, None], c1[None, None, :], c0[None, None, :])
            images.append(img.astype(np.uint8))
        return images


class HttpBackend:
    """Adapter for an images-generation HTTP API.

    POSTs ``{"prompt", "n", "size"}`` to ``{base_url}/images/generations``
    and expects ``{"data": [{"b64_json": ...} | {"url": ...}, ...]}``.
    Transient failures retry with exponential backoff up to the configured
    limit.
    """

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        name: str = "http",
        model: str | None = None,
        max_retries: int = 3,
        backoff_s: float = 0.5,
        timeout_s: float = 60.0,
        client: httpx.Client | None = None,
        sleep=time.sleep,
    ):
        if not base_url:
            raise ConfigError("http backend needs a base URL")
        self.name = name
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.model = model
        self.max_retries = max_retries
        self.backoff_s = backoff_s
        self._sleep = sleep
        self._client = client or httpx.Client(timeout=timeout_s)

    def generate(self, prompt: str, n: int, size: int) -> list[np.ndarray]:
        payload: dict = {"prompt": prompt, "n": n, "size": f"{size}x{size}"}
        if self.model:
            payload["model"] = self.model
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        url = f"{self.base_url}/images/generations"
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            try:
                resp = self._client.post(url, json=payload, headers=headers)
                if resp.status_code in RETRYABLE_STATUS:
                    raise httpx.HTTPStatusError(
                        f"status {resp.status_code}", request=resp.request, response=resp
                    )
                resp.raise_for_status()
                return self._decode(resp.json(), n)
            except (httpx.TransportError, httpx.HTTPStatusError) as exc:
                status = getattr(getattr(exc, "response", None), "status_code", None)
                if status is not None and status not in RETRYABLE_STATUS:
                    raise GenBackendError(f"generation request rejected: {exc}") from exc
                last_error = exc
                if attempt < self.max_retries:
                    self._sleep(self.backoff_s * (2**attempt))
        raise GenBackendError(
            f"generation failed after {self.max_retries + 1} attempts: {last_error}"
        ) from last_error

    def _decode(self, doc: dict, n: int) -> list[np.ndarray]:
        items = doc.get("data")
        if not isinstance(items, list) or len(items) < n:
            rid = doc.get("id", "<no response id>")
            raise GenBackendError(f"payload missing images (response id {rid!r})")
        images = []
        for item in items[:n]:
            if "b64_json" in item:
                raw = base64.b64decode(item["b64_json"])
            elif "url" in item:
                raw = self._client.get(item["url"]).content
            else:
                rid = doc.get("id", "<no response id>")
                raise GenBackendError(f"image entry missing payload (response id {rid!r})")
            with Image.open(io.BytesIO(raw)) as img:
                images.append(np.asarray(img.convert("RGB"), dtype=np.uint8))
        return images
