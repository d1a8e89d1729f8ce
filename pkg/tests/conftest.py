import json
from pathlib import Path

import pytest

from summpilot import LlmGateway, ScriptedProvider, make_document_set

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def playbook_path() -> Path:
    return FIXTURES / "playbook_tomjane.json"


@pytest.fixture(scope="session")
def playbook_rules(playbook_path) -> list[dict]:
    return json.loads(playbook_path.read_text(encoding="utf-8"))


@pytest.fixture()
def tomjane_gateway(playbook_rules) -> LlmGateway:
    return LlmGateway(ScriptedProvider(playbook_rules), sleep=lambda _: None)


@pytest.fixture(scope="session")
def tomjane_articles() -> list[str]:
    return [
        (FIXTURES / "articles" / "tom_jane_1.txt").read_text(encoding="utf-8"),
        (FIXTURES / "articles" / "tom_jane_2.txt").read_text(encoding="utf-8"),
    ]


@pytest.fixture()
def tomjane_docset(tomjane_articles):
    return make_document_set(tomjane_articles, created_at="2025-01-01T00:00:00+00:00")


@pytest.fixture(scope="session")
def fox_article() -> str:
    return (FIXTURES / "articles" / "fox.txt").read_text(encoding="utf-8")


@pytest.fixture()
def fox_docset(fox_article):
    return make_document_set([fox_article], created_at="2025-01-01T00:00:00+00:00")
