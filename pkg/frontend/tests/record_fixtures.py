"""Record API fixtures for the UI contract tests.

Run from the repo root with the Python package installed:
    python frontend/tests/record_fixtures.py
Captures real responses from the HTTP app (in-process) into tests/fixtures/.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from shopchat.api import create_app
from shopchat.catalog import load_catalog
from shopchat.config import AppConfig
from shopchat.gateway import LLMGateway, MockBackend
from shopchat.intent import load_ruleset
from shopchat.orchestrator import ShoppingAssistant

FIXTURES = Path(__file__).parent / "fixtures"


def write(name: str, payload) -> None:
    FIXTURES.mkdir(exist_ok=True)
    (FIXTURES / name).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {name}")


def record_bundled() -> None:
    client = TestClient(create_app(ShoppingAssistant.from_config(AppConfig())))
    sid = client.post("/sessions").json()["session_id"]
    write("session_create.json", {"session_id": sid})

    oppo = client.post(f"/sessions/{sid}/messages", json={"text": "oppo mobile"}).json()
    write("search_oppo.json", oppo)

    answer_sid = client.post("/sessions").json()["session_id"]
    client.post(f"/sessions/{answer_sid}/messages", json={"text": "PETER ENGLAND suit for wedding under 6000"})
    answer = client.post(
        f"/sessions/{answer_sid}/messages",
        json={"text": "No, what is the color of VAN HEUSEN suit?"},
    ).json()
    write("answer_van_heusen.json", answer)

    feedback = client.post(f"/sessions/{sid}/turns/0/feedback", json={"thumbs": "up"}).json()
    write("feedback_ok.json", feedback)

    sofa_sid = client.post("/sessions").json()["session_id"]
    sofa = client.post(f"/sessions/{sofa_sid}/messages", json={"text": "3 seater sofa"}).json()
    write("search_small.json", sofa)


def record_wide_catalog(tmp: Path) -> None:
    # 30 look-alike widgets so one query fills the 24-result window.
    catalog_path = tmp / "wide_catalog.jsonl"
    with catalog_path.open("w", encoding="utf-8") as handle:
        for i in range(30):
            handle.write(
                json.dumps(
                    {
                        "id": f"W{i:03d}",
                        "title": f"Gizmo Widget {i:03d}",
                        "brand": "Gizmo",
                        "category": "Electronics",
                        "price": 1000 + 37 * i,
                        "specs": {"Color": ["Black", "Blue", "Green"][i % 3], "Size": str(i % 4)},
                    }
                )
                + "\n"
            )
    assistant = ShoppingAssistant(
        catalog=load_catalog(catalog_path),
        gateway=LLMGateway(MockBackend([])),
        ruleset=load_ruleset(AppConfig().ruleset_path),
        config=AppConfig(),
    )
    client = TestClient(create_app(assistant))
    sid = client.post("/sessions").json()["session_id"]
    search = client.post(f"/sessions/{sid}/messages", json={"text": "gizmo widget"}).json()
    write("search_24.json", search)
    all_products = client.get(f"/sessions/{sid}/products", params={"all": "true"}).json()
    write("products_all_24.json", all_products)
    visible = client.get(f"/sessions/{sid}/products").json()
    write("products_visible_8.json", visible)


if __name__ == "__main__":
    import tempfile

    record_bundled()
    with tempfile.TemporaryDirectory() as tmp:
        record_wide_catalog(Path(tmp))
