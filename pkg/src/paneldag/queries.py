"""Taxonomy-structured causal prompt generation plus the two external clients
(chat-completion service, PubMed E-utilities).

Prompts are a cartesian product: drivers x categories x styles. The category
fixes the verb framing, the style fixes the scaffolding (bare question, two
fixed worked exemplars, or an appended step-by-step instruction). Everything is
deterministic so archived runs are reproducible; network clients have a stub
mode used throughout the tests and by default in the pipeline.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import dataclass, field

import requests

from .errors import ConfigError, FormatError, TransportError

__all__ = [
    "CATEGORY_VERBS",
    "STYLES",
    "CausalQuery",
    "LlmResponse",
    "ArticleRecord",
    "LlmClientConfig",
    "LiteratureConfig",
    "build_queries",
    "render_prompt",
    "ask_llm",
    "search_literature",
    "literature_terms",
]

# category -> verb set used in its question framing
CATEGORY_VERBS = {
    "Direct": ("increase", "trigger"),
    "Preventative": ("prevent", "reduce", "inhibit"),
    "Facilitative": ("enable", "allow", "support"),
    "Resultative": ("lead to", "result in", "cause"),
    "Influential": ("influence", "impact", "affect"),
}
CATEGORIES = tuple(CATEGORY_VERBS)
STYLES = ("zero-shot", "few-shot", "chain-of-thought")

_WDI_CODE_RE = re.compile(r"^[A-Z0-9]{2,3}(\.[A-Z0-9]{1,8})+$")

_QUESTIONS = {
    "Direct": "Does {driver} directly increase or trigger changes in {target}?",
    "Preventative": "Could {driver} prevent, reduce, or inhibit {target}?",
    "Facilitative": (
        "Does {driver} enable, allow, or support other factors that change {target}?"
    ),
    "Resultative": "Do changes in {driver} lead to, result in, or cause changes in {target}?",
    "Influential": "In what ways does {driver} influence, impact, or affect {target}?",
}

_FEW_SHOT_PREAMBLE = """\
Here are two worked examples of causal judgements about development indicators.

Example 1.
Question: Does access to electricity (EG.ELC.ACCS.ZS) directly increase or trigger changes in household air quality?
Answer: Yes, plausibly causal. Electrification displaces solid-fuel burning for lighting and heating, a direct mechanism; cross-country adoption timing supports the direction.

Example 2.
Question: Could forest area (AG.LND.FRST.ZS) prevent, reduce, or inhibit national flood damages?
Answer: Partially. Forest cover slows runoff in specific basins, but aggregate national damages are dominated by exposure and infrastructure, so the effect is indirect and heterogeneous.

Now answer the following question in the same style.
"""

_COT_SUFFIX = (
    "Think step by step: state the candidate mechanism, the likely confounders, "
    "the expected sign, and only then your conclusion."
)


@dataclass(frozen=True)
class CausalQuery:
    category: str
    style: str
    driver_code: str
    driver_name: str
    target: str
    prompt_text: str = ""

    def __post_init__(self):
        if self.category not in CATEGORY_VERBS:
            raise ConfigError(f"unknown taxonomy category {self.category!r}")
        if self.style not in STYLES:
            raise ConfigError(f"unknown prompt style {self.style!r}")
        if not _WDI_CODE_RE.match(self.driver_code):
            raise ConfigError(f"driver code {self.driver_code!r} is not an indicator code")


def render_prompt(query: CausalQuery) -> str:
    """Deterministic prompt text for a query; includes the driver code and name
    verbatim, the category verbs, and the style scaffolding."""
    driver = f"{query.driver_name} ({query.driver_code})"
    question = _QUESTIONS[query.category].format(driver=driver, target=query.target)
    if query.style == "zero-shot":
        return question
    if query.style == "few-shot":
        return _FEW_SHOT_PREAMBLE + "\nQuestion: " + question
    return question + "\n" + _COT_SUFFIX


def build_queries(drivers, target: str, categories=None, styles=None) -> list[CausalQuery]:
    """One query per (driver, category, style), in canonical taxonomy order."""
    drivers = list(drivers)
    if not drivers:
        raise ConfigError("need at least one driver")
    categories = CATEGORIES if categories is None else tuple(categories)
    styles = STYLES if styles is None else tuple(styles)
    if not categories or not styles:
        raise ConfigError("categories and styles must be non-empty")
    for c in categories:
        if c not in CATEGORY_VERBS:
            raise ConfigError(f"unknown taxonomy category {c!r}")
    for s in styles:
        if s not in STYLES:
            raise ConfigError(f"unknown prompt style {s!r}")

    queries = []
    for code, name in drivers:
        for category in CATEGORIES:
            if category not in categories:
                continue
            for style in STYLES:
                if style not in styles:
                    continue
                q = CausalQuery(
                    category=category,
                    style=style,
                    driver_code=code,
                    driver_name=name,
                    target=target,
                )
                queries.append(
                    CausalQuery(
                        category=category,
                        style=style,
                        driver_code=code,
                        driver_name=name,
                        target=target,
                        prompt_text=render_prompt(q),
                    )
                )
    return queries


# -- chat-completion client ----------------------------------------------------


@dataclass(frozen=True)
class LlmClientConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4o"
    auth_env: str = "PANELDAG_LLM_TOKEN"
    timeout: float = 30.0
    max_retries: int = 3
    stub: bool = True
    # test hooks: transport(url, headers, payload, timeout) -> (status, json dict)
    transport: object = None
    sleep: object = time.sleep


@dataclass
class LlmResponse:
    text: str
    model_id: str
    latency_ms: float
    token_usage: dict = field(default_factory=dict)
    status: str = "success"
    attempts: int = 1


def _stub_response(prompt: str, cfg: LlmClientConfig) -> LlmResponse:
    digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:12]
    text = (
        f"[stub {digest}] Deterministic offline answer: the association is "
        "plausible but this stub performs no reasoning."
    )
    return LlmResponse(text=text, model_id="stub", latency_ms=0.0, token_usage={}, attempts=0)


def ask_llm(prompt: str, cfg: LlmClientConfig = LlmClientConfig()) -> LlmResponse:
    """Send one chat-completion request (or answer from the stub).

    Live mode requires the auth token in the environment variable named by
    ``cfg.auth_env`` — checked before any network activity. Transient failures
    (HTTP 429/5xx, timeouts, connection errors) are retried with exponential
    backoff up to ``max_retries`` attempts; auth failures are never retried.
    """
    if cfg.stub:
        return _stub_response(prompt, cfg)
    import os

    token = os.environ.get(cfg.auth_env)
    if not token:
        raise ConfigError(
            f"live mode needs an API token in ${cfg.auth_env} (none set)"
        )
    payload = {"model": cfg.model, "messages": [{"role": "user", "content": prompt}]}
    headers = {"Authorization": f"Bearer {token}", "Content-Type": "application/json"}

    def default_transport(url, headers, payload, timeout):
        resp = requests.post(url, headers=headers, json=payload, timeout=timeout)
        try:
            body = resp.json()
        except ValueError:
            body = {}
        return resp.status_code, body

    transport = cfg.transport or default_transport
    start = time.monotonic()
    last_error = "no attempts made"
    for attempt in range(1, cfg.max_retries + 1):
        try:
            status, body = transport(cfg.endpoint, headers, payload, cfg.timeout)
        except (requests.Timeout, requests.ConnectionError, TimeoutError, OSError) as exc:
            last_error = f"transport failure: {exc}"
            if attempt < cfg.max_retries:
                cfg.sleep(0.5 * 2 ** (attempt - 1))
            continue
        if status in (401, 403):
            raise TransportError(f"authentication rejected (HTTP {status}); not retrying")
        if status == 429 or status >= 500:
            last_error = f"HTTP {status}"
            if attempt < cfg.max_retries:
                cfg.sleep(0.5 * 2 ** (attempt - 1))
            continue
        if status != 200:
            raise TransportError(f"chat endpoint returned HTTP {status}")
        try:
            text = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise FormatError(f"unexpected chat-completion payload: {exc}") from exc
        return LlmResponse(
            text=text,
            model_id=str(body.get("model", cfg.model)),
            latency_ms=1000.0 * (time.monotonic() - start),
            token_usage=dict(body.get("usage", {})),
            attempts=attempt,
        )
    raise TransportError(
        f"chat endpoint kept failing after {cfg.max_retries} attempts ({last_error})"
    )


# -- literature client ----------------------------------------------------------


@dataclass
class ArticleRecord:
    external_id: str
    title: str
    year: int | None = None
    source: str = "pubmed"


@dataclass(frozen=True)
class LiteratureConfig:
    base_url: str = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils"
    stub: bool = True
    timeout: float = 30.0
    min_interval: float = 1.0 / 3.0  # at most 3 requests/second
    # test hook: transport(url, params, timeout) -> (status, json dict)
    transport: object = None
    sleep: object = time.sleep
    clock: object = time.monotonic


_last_request_time = [0.0]


def _rate_limit(cfg: LiteratureConfig) -> None:
    now = cfg.clock()
    wait = _last_request_time[0] + cfg.min_interval - now
    if wait > 0:
        cfg.sleep(wait)
    _last_request_time[0] = cfg.clock()


def literature_terms(driver_name: str, target_label: str) -> list[str]:
    """Search terms for one driver: the head phrase of its name (up to the
    first comma or parenthesis, lowercased) plus a target phrase."""
    head = re.split(r"[,(]", driver_name)[0].strip().lower()
    target_phrase = (
        "carbon emissions" if target_label.startswith("EN.ATM.CO2E") else target_label
    )
    return [head, target_phrase]


def _stub_records():
    from importlib.resources import files

    payload = json.loads(files("paneldag").joinpath("data/pubmed_stub.json").read_text())
    return [
        ArticleRecord(
            external_id=rec["id"],
            title=rec["title"],
            year=rec.get("year"),
            source="pubmed",
        )
        for rec in payload["records"]
    ]


def search_literature(
    terms, max_results: int = 5, cfg: LiteratureConfig = LiteratureConfig()
) -> list[ArticleRecord]:
    """AND-joined term search against PubMed (esearch then esummary), capped at
    ``max_results`` records; the stub returns the bundled fixture."""
    terms = [t for t in terms if str(t).strip()]
    if not terms:
        raise ConfigError("need at least one search term")
    if max_results < 1:
        raise ConfigError("max_results must be >= 1")
    query = " AND ".join(str(t) for t in terms)
    if cfg.stub:
        return _stub_records()[:max_results]

    def default_transport(url, params, timeout):
        resp = requests.get(url, params=params, timeout=timeout)
        try:
            return resp.status_code, resp.json()
        except ValueError as exc:
            raise FormatError(f"non-JSON payload from {url}") from exc

    transport = cfg.transport or default_transport
    _rate_limit(cfg)
    try:
        status, body = transport(
            f"{cfg.base_url}/esearch.fcgi",
            {"db": "pubmed", "retmode": "json", "retmax": max_results, "term": query},
            cfg.timeout,
        )
    except (requests.RequestException, OSError) as exc:
        raise TransportError(f"esearch failed: {exc}") from exc
    if status != 200:
        raise TransportError(f"esearch returned HTTP {status}")
    try:
        ids = body["esearchresult"]["idlist"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"unexpected esearch payload: {exc}") from exc
    if not ids:
        return []

    _rate_limit(cfg)
    try:
        status, body = transport(
            f"{cfg.base_url}/esummary.fcgi",
            {"db": "pubmed", "retmode": "json", "id": ",".join(ids)},
            cfg.timeout,
        )
    except (requests.RequestException, OSError) as exc:
        raise TransportError(f"esummary failed: {exc}") from exc
    if status != 200:
        raise TransportError(f"esummary returned HTTP {status}")
    records = []
    try:
        result = body["result"]
        for uid in ids:
            entry = result[uid]
            year = None
            pubdate = entry.get("pubdate", "")
            if pubdate[:4].isdigit():
                year = int(pubdate[:4])
            records.append(
                ArticleRecord(external_id=uid, title=entry["title"], year=year)
            )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"unexpected esummary payload: {exc}") from exc
    return records[:max_results]
