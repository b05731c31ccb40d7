import hashlib

import pytest
import requests

import paneldag.queries as queries_mod
from paneldag import (
    CATEGORY_VERBS,
    STYLES,
    CausalQuery,
    ConfigError,
    FormatError,
    LiteratureConfig,
    LlmClientConfig,
    TransportError,
    ask_llm,
    build_queries,
    literature_terms,
    render_prompt,
    search_literature,
)

DRIVERS = [
    ("EG.CFT.ACCS.RU.ZS", "Access to clean fuels and technologies for cooking, rural"),
    ("EG.CFT.ACCS.UR.ZS", "Access to clean fuels and technologies for cooking, urban"),
    ("SP.URB.TOTL.IN.ZS", "Urban population share"),
]
TARGET = "per-capita CO2 emissions"


# ---------------------------------------------------------------- taxonomy

def test_full_battery_is_45_prompts():
    queries = build_queries(DRIVERS, TARGET)
    assert len(queries) == 45
    combos = {(q.driver_code, q.category, q.style) for q in queries}
    assert len(combos) == 45


def test_canonical_order():
    queries = build_queries(DRIVERS[:1], TARGET)
    assert [(q.category, q.style) for q in queries] == [
        (c, s) for c in CATEGORY_VERBS for s in STYLES
    ]


def test_category_verbs_present():
    for q in build_queries(DRIVERS, TARGET):
        for verb in CATEGORY_VERBS[q.category]:
            assert verb in q.prompt_text, (q.category, q.style, verb)


def test_driver_name_and_code_verbatim():
    for q in build_queries(DRIVERS, TARGET):
        assert f"{q.driver_name} ({q.driver_code})" in q.prompt_text
        assert TARGET in q.prompt_text


def test_style_scaffolding():
    by_style = {}
    for q in build_queries(DRIVERS[:1], TARGET, categories=["Direct"]):
        by_style[q.style] = q.prompt_text
    assert set(by_style) == set(STYLES)
    assert by_style["few-shot"].startswith("Here are two worked examples")
    assert "Example 2." in by_style["few-shot"]
    assert by_style["chain-of-thought"].startswith(by_style["zero-shot"])
    assert len(by_style["chain-of-thought"]) > len(by_style["zero-shot"])
    assert "step by step" in by_style["chain-of-thought"]
    assert "Example" not in by_style["zero-shot"]


def test_render_is_idempotent_and_stored():
    for q in build_queries(DRIVERS, TARGET):
        assert render_prompt(q) == q.prompt_text


def test_subset_selection():
    queries = build_queries(DRIVERS, TARGET, categories=["Influential"], styles=["zero-shot"])
    assert len(queries) == 3
    assert all(q.category == "Influential" and q.style == "zero-shot" for q in queries)


def test_build_queries_validation():
    with pytest.raises(ConfigError):
        build_queries([], TARGET)
    with pytest.raises(ConfigError):
        build_queries(DRIVERS, TARGET, categories=["Sideways"])
    with pytest.raises(ConfigError):
        build_queries(DRIVERS, TARGET, styles=["variable-shot"])
    with pytest.raises(ConfigError):
        build_queries(DRIVERS, TARGET, categories=[])


def test_query_rejects_malformed_driver_code():
    with pytest.raises(ConfigError, match="indicator code"):
        CausalQuery("Direct", "zero-shot", "not a code", "Name", TARGET)
    with pytest.raises(ConfigError, match="category"):
        CausalQuery("Diagonal", "zero-shot", "AA.BB", "Name", TARGET)
    with pytest.raises(ConfigError, match="style"):
        CausalQuery("Direct", "one-shot", "AA.BB", "Name", TARGET)


# ---------------------------------------------------------------- chat client

def test_stub_answer_is_deterministic():
    prompt = "Does urbanization cause emissions?"
    a = ask_llm(prompt)
    b = ask_llm(prompt)
    assert a.text == b.text
    assert a.model_id == "stub" and a.attempts == 0
    digest = hashlib.sha256(prompt.encode()).hexdigest()[:12]
    assert a.text.startswith(f"[stub {digest}]")
    # different prompts get different stub tags
    assert ask_llm(prompt + "?").text != a.text


def test_live_mode_checks_token_before_any_network(monkeypatch):
    monkeypatch.delenv("PANELDAG_LLM_TOKEN", raising=False)

    def transport(url, headers, payload, timeout):  # pragma: no cover
        raise AssertionError("network touched without a token")

    cfg = LlmClientConfig(stub=False, transport=transport)
    with pytest.raises(ConfigError, match="PANELDAG_LLM_TOKEN"):
        ask_llm("q", cfg)


def test_live_mode_success_and_headers(monkeypatch):
    monkeypatch.setenv("PANELDAG_LLM_TOKEN", "sekret")
    seen = []

    def transport(url, headers, payload, timeout):
        seen.append((url, headers, payload))
        return 200, {
            "choices": [{"message": {"content": "plausible"}}],
            "model": "gpt-4o-2024",
            "usage": {"total_tokens": 12},
        }

    cfg = LlmClientConfig(stub=False, transport=transport)
    resp = ask_llm("q", cfg)
    assert resp.text == "plausible"
    assert resp.model_id == "gpt-4o-2024"
    assert resp.token_usage == {"total_tokens": 12}
    assert resp.attempts == 1
    url, headers, payload = seen[0]
    assert headers["Authorization"] == "Bearer sekret"
    assert payload["messages"] == [{"role": "user", "content": "q"}]


def test_retry_on_transient_failures(monkeypatch):
    monkeypatch.setenv("PANELDAG_LLM_TOKEN", "t")
    outcomes = [
        requests.ConnectionError("refused"),
        (503, {}),
        (200, {"choices": [{"message": {"content": "ok"}}]}),
    ]
    sleeps = []

    def transport(url, headers, payload, timeout):
        out = outcomes.pop(0)
        if isinstance(out, Exception):
            raise out
        return out

    cfg = LlmClientConfig(stub=False, transport=transport, sleep=sleeps.append)
    resp = ask_llm("q", cfg)
    assert resp.text == "ok" and resp.attempts == 3
    assert sleeps == [0.5, 1.0]  # exponential backoff


def test_auth_rejection_is_not_retried(monkeypatch):
    monkeypatch.setenv("PANELDAG_LLM_TOKEN", "t")
    calls = []

    def transport(url, headers, payload, timeout):
        calls.append(url)
        return 401, {}

    cfg = LlmClientConfig(stub=False, transport=transport, sleep=lambda s: None)
    with pytest.raises(TransportError, match="not retrying"):
        ask_llm("q", cfg)
    assert len(calls) == 1


def test_retries_exhausted(monkeypatch):
    monkeypatch.setenv("PANELDAG_LLM_TOKEN", "t")
    cfg = LlmClientConfig(
        stub=False, transport=lambda *a: (429, {}), sleep=lambda s: None
    )
    with pytest.raises(TransportError, match="3 attempts"):
        ask_llm("q", cfg)


def test_malformed_payload(monkeypatch):
    monkeypatch.setenv("PANELDAG_LLM_TOKEN", "t")
    cfg = LlmClientConfig(stub=False, transport=lambda *a: (200, {"choices": []}))
    with pytest.raises(FormatError):
        ask_llm("q", cfg)


# ---------------------------------------------------------------- literature

def test_literature_terms_head_phrase():
    name = "Access to clean fuels and technologies for cooking, rural (% of rural population)"
    assert literature_terms(name, "EN.ATM.CO2E.PC") == [
        "access to clean fuels and technologies for cooking",
        "carbon emissions",
    ]
    assert literature_terms("Urban population (% of total)", "EN.ATM.CO2E.PC") == [
        "urban population",
        "carbon emissions",
    ]
    # non-emissions targets pass through as-is
    assert literature_terms("Forest area", "SP.DYN.LE00.IN")[1] == "SP.DYN.LE00.IN"


def test_stub_search_returns_bundled_records():
    records = search_literature(["clean cooking", "carbon emissions"])
    assert len(records) == 5
    assert all(r.source == "pubmed" for r in records)
    assert all(r.external_id and r.title for r in records)
    assert search_literature(["x"], max_results=2) == records[:2]


def test_search_validation():
    with pytest.raises(ConfigError):
        search_literature([])
    with pytest.raises(ConfigError):
        search_literature(["  ", ""])
    with pytest.raises(ConfigError):
        search_literature(["x"], max_results=0)


def test_live_search_two_stage(monkeypatch):
    calls = []

    def transport(url, params, timeout):
        calls.append((url, dict(params)))
        if url.endswith("esearch.fcgi"):
            return 200, {"esearchresult": {"idlist": ["111", "222"]}}
        return 200, {
            "result": {
                "111": {"title": "Cooking fuels and health", "pubdate": "2019 Jan"},
                "222": {"title": "Urban growth", "pubdate": "n.d."},
            }
        }

    cfg = LiteratureConfig(stub=False, transport=transport, sleep=lambda s: None)
    records = search_literature(["clean cooking", "emissions"], max_results=5, cfg=cfg)
    assert [(r.external_id, r.title, r.year) for r in records] == [
        ("111", "Cooking fuels and health", 2019),
        ("222", "Urban growth", None),
    ]
    assert calls[0][1]["term"] == "clean cooking AND emissions"
    assert calls[1][1]["id"] == "111,222"


def test_live_search_empty_result(monkeypatch):
    calls = []

    def transport(url, params, timeout):
        calls.append(url)
        return 200, {"esearchresult": {"idlist": []}}

    cfg = LiteratureConfig(stub=False, transport=transport, sleep=lambda s: None)
    assert search_literature(["nothing"], cfg=cfg) == []
    assert len(calls) == 1  # no esummary call for an empty hit list


def test_live_search_http_error():
    cfg = LiteratureConfig(stub=False, transport=lambda *a: (500, {}), sleep=lambda s: None)
    with pytest.raises(TransportError, match="esearch"):
        search_literature(["x"], cfg=cfg)


def test_rate_limiter_spaces_requests(monkeypatch):
    monkeypatch.setattr(queries_mod, "_last_request_time", [0.0])
    ticks = iter([10.0, 10.0, 10.1, 10.35])
    sleeps = []

    def transport(url, params, timeout):
        if url.endswith("esearch.fcgi"):
            return 200, {"esearchresult": {"idlist": ["1"]}}
        return 200, {"result": {"1": {"title": "T", "pubdate": "2020"}}}

    cfg = LiteratureConfig(
        stub=False,
        transport=transport,
        sleep=sleeps.append,
        clock=lambda: next(ticks),
    )
    search_literature(["x"], cfg=cfg)
    # first request goes straight through; the second waits out the interval
    assert len(sleeps) == 1
    assert sleeps[0] == pytest.approx(cfg.min_interval - 0.1)
