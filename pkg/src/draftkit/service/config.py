"""Service configuration: one JSON file plus environment-variable overrides
for secrets.

Example:

    {
      "listen": "127.0.0.1:8100",
      "card_sets": {"NEO": "data/neo_cards.json"},
      "persistence_dir": "var/sessions",
      "frequency_table": "var/neo_rates.json",
      "llm": {"base_url": "https://api.example.com/v1", "model": "gpt-4o"},
      "ui_dir": "frontend/dist"
    }

The LLM API key is never placed in the file; it is read from
DRAFTKIT_LLM_API_KEY.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..agents import LlmEndpointConfig

API_KEY_ENV = "DRAFTKIT_LLM_API_KEY"
BASE_URL_ENV = "DRAFTKIT_LLM_BASE_URL"


@dataclass
class ServiceConfig:
    card_sets: dict[str, str]
    persistence_dir: str = "var/sessions"
    listen_host: str = "127.0.0.1"
    listen_port: int = 8100
    frequency_table: str | None = None
    llm: LlmEndpointConfig | None = None
    ui_dir: str | None = None
    default_set: str = field(default="")

    def __post_init__(self):
        if not self.card_sets:
            raise ValueError("config must name at least one card set")
        if not self.default_set:
            self.default_set = next(iter(self.card_sets))


def load_config(path: str | Path) -> ServiceConfig:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    host, port = "127.0.0.1", 8100
    listen = raw.get("listen")
    if listen:
        host, _, port_text = listen.rpartition(":")
        port = int(port_text)

    llm = None
    llm_raw = raw.get("llm")
    if llm_raw:
        llm = LlmEndpointConfig(
            base_url=os.environ.get(BASE_URL_ENV, llm_raw["base_url"]),
            model=llm_raw["model"],
            api_key=os.environ.get(API_KEY_ENV, ""),
            max_output_tokens=int(llm_raw.get("max_output_tokens", 30)),
            temperature=float(llm_raw.get("temperature", 0.0)),
            timeout_ms=int(llm_raw.get("timeout_ms", 30_000)),
            max_retries=int(llm_raw.get("max_retries", 3)),
            max_concurrency=int(llm_raw.get("max_concurrency", 4)),
        )

    return ServiceConfig(
        card_sets=dict(raw["card_sets"]),
        persistence_dir=raw.get("persistence_dir", "var/sessions"),
        listen_host=host,
        listen_port=port,
        frequency_table=raw.get("frequency_table"),
        llm=llm,
        ui_dir=raw.get("ui_dir"),
        default_set=raw.get("default_set", ""),
    )
