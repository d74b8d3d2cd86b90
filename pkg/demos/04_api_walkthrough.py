"""Walk every HTTP endpoint against an in-process test client.

Ingests the sample corpus into a temporary repository directory the same
way the `riskatlas ingest` command does, then issues the requests the
dashboard makes: taxonomy slice, shares, both treemaps, gap ranking, and
document traceback with pagination.

    python demos/04_api_walkthrough.py
"""

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from riskatlas.cli import main as riskatlas_cli
from riskatlas.service import create_app_for_repo

DATA = Path(__file__).parent / "data"


def show(label, payload):
    print(f"\n--- {label} ---")
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    lines = text.splitlines()
    print("\n".join(lines[:25] + ([f"... ({len(lines) - 25} more lines)"]
                                  if len(lines) > 25 else [])))


def main():
    with tempfile.TemporaryDirectory() as repo_dir:
        riskatlas_cli(["ingest", "--corpus", str(DATA / "corpus.jsonl"),
                       "--taxonomy", str(DATA / "classification.tsv"),
                       "--config", str(DATA / "config"),
                       "--repo", repo_dir])
        client = TestClient(create_app_for_repo(repo_dir))

        show("GET /taxonomy?max_levels=2",
             client.get("/taxonomy", params={"max_levels": 2}).json())
        show("GET /indicators/shares",
             client.get("/indicators/shares").json())
        show("GET /indicators/occurrences?role=at_risk&filter=covid",
             client.get("/indicators/occurrences",
                        params={"role": "at_risk", "filter": "covid"}).json())
        show("GET /indicators/gap?k=5&filter=covid",
             client.get("/indicators/gap", params={"k": 5, "filter": "covid"}).json())

        gap = client.get("/indicators/gap", params={"k": 1, "filter": "covid"}).json()
        top_code = gap["rows"][0]["code"]
        show(f"GET /documents?code={top_code} (traceback)",
             client.get("/documents", params={"code": top_code, "limit": 5}).json())


if __name__ == "__main__":
    main()
