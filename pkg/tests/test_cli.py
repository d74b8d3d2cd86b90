import json
from pathlib import Path

import pytest

from riskatlas.cli import main
from riskatlas.corpus import Repository

SAMPLE = Path(__file__).resolve().parent.parent / "demos" / "data"


@pytest.fixture
def ingested_repo(tmp_path):
    repo_dir = tmp_path / "repo"
    code = main(["ingest",
                 "--corpus", str(SAMPLE / "corpus.jsonl"),
                 "--taxonomy", str(SAMPLE / "classification.tsv"),
                 "--config", str(SAMPLE / "config"),
                 "--repo", str(repo_dir)])
    assert code == 0
    return repo_dir


class TestIngestCommand:
    def test_creates_repository_files(self, ingested_repo):
        for name in ("snapshot.jsonl", "titles.jsonl", "ingest_log.jsonl",
                     "taxonomy.json"):
            assert (ingested_repo / name).exists()

    def test_counts_printed(self, tmp_path, capsys):
        main(["ingest", "--corpus", str(SAMPLE / "corpus.jsonl"),
              "--taxonomy", str(SAMPLE / "classification.tsv"),
              "--config", str(SAMPLE / "config"),
              "--repo", str(tmp_path / "repo")])
        out = capsys.readouterr().out
        assert "processed 26 documents" in out

    def test_repository_contents(self, ingested_repo):
        repo = Repository.load(ingested_repo)
        assert len(repo) == 26
        covid_docs = repo.select_subset(filter_name="covid")
        assert len(covid_docs) > 5
        pneumonia = repo.records[("medrxiv", "mx-0001")]
        assert "CA40" in pneumonia.codes
        assert "5B81" in pneumonia.risk_codes  # obesity named as a risk factor

    def test_incremental_second_ingest_keeps_records(self, ingested_repo, tmp_path):
        extra = tmp_path / "extra.jsonl"
        extra.write_text(json.dumps({
            "source": "pubmed", "doc_id": "pm-9999",
            "title": "Obesity is a risk factor in pneumonia",
            "abstract": [], "body": []}) + "\n", encoding="utf-8")
        main(["ingest", "--corpus", str(extra),
              "--taxonomy", str(SAMPLE / "classification.tsv"),
              "--config", str(SAMPLE / "config"),
              "--repo", str(ingested_repo)])
        repo = Repository.load(ingested_repo)
        assert len(repo) == 27
        assert repo.records[("pubmed", "pm-9999")].risk_codes == {"5B81", "CA40"}

    def test_repo_from_environment(self, tmp_path, monkeypatch):
        repo_dir = tmp_path / "env-repo"
        monkeypatch.setenv("RISKATLAS_REPO", str(repo_dir))
        main(["ingest", "--corpus", str(SAMPLE / "corpus.jsonl"),
              "--taxonomy", str(SAMPLE / "classification.tsv"),
              "--config", str(SAMPLE / "config")])
        assert (repo_dir / "snapshot.jsonl").exists()


class TestExportCommand:
    def test_writes_products(self, ingested_repo, tmp_path, capsys):
        out_dir = tmp_path / "export"
        main(["export", "--repo", str(ingested_repo), "--out", str(out_dir),
              "--filter", "covid", "--k", "5"])
        shares = json.loads((out_dir / "shares.json").read_text())
        assert shares["subset"]["filter"] == "covid"
        assert shares["rows"]
        gap = json.loads((out_dir / "gap.json").read_text())
        assert len(gap["rows"]) <= 5
        for name in ("occurrences_found.json", "occurrences_at_risk.json"):
            payload = json.loads((out_dir / name).read_text())
            assert payload["trees"]

    def test_branch_scoped_export(self, ingested_repo, tmp_path):
        out_dir = tmp_path / "export"
        main(["export", "--repo", str(ingested_repo), "--out", str(out_dir),
              "--branch", "CA40"])
        shares = json.loads((out_dir / "shares.json").read_text())
        assert shares["branch"] is not None


class TestReportCommand:
    def test_prints_counters(self, ingested_repo, capsys):
        main(["report", "--repo", str(ingested_repo)])
        out = capsys.readouterr().out
        assert "total documents=26" in out
        assert "batch=26" in out


class TestMatchCommand:
    def test_disease_matches(self, capsys):
        main(["match", "--taxonomy", str(SAMPLE / "classification.tsv"),
              "--config", str(SAMPLE / "config"),
              "--text", "Severe pneumonia with type 2 diabetes"])
        out = capsys.readouterr().out
        assert "CA40" in out
        assert "5A11" in out

    def test_risk_matches(self, capsys):
        main(["match", "--taxonomy", str(SAMPLE / "classification.tsv"),
              "--config", str(SAMPLE / "config"),
              "--processor", "risk",
              "--text", "obesity is a major risk factor"])
        assert "RISK" in capsys.readouterr().out

    def test_filter_matches(self, capsys):
        main(["match", "--taxonomy", str(SAMPLE / "classification.tsv"),
              "--config", str(SAMPLE / "config"),
              "--processor", "filter:covid",
              "--text", "the SARS-CoV-2 outbreak"])
        assert "covid" in capsys.readouterr().out

    def test_unknown_processor(self, capsys):
        code = main(["match", "--taxonomy", str(SAMPLE / "classification.tsv"),
                     "--config", str(SAMPLE / "config"),
                     "--processor", "bogus", "--text", "x"])
        assert code == 2


class TestServeWiring:
    def test_served_app_answers(self, ingested_repo):
        from fastapi.testclient import TestClient

        from riskatlas.service import create_app_for_repo

        client = TestClient(create_app_for_repo(ingested_repo))
        taxonomy = client.get("/taxonomy").json()
        assert any(node["code"] == "CA40" for node in taxonomy["nodes"])
        shares = client.get("/indicators/shares", params={"filter": "covid"}).json()
        assert shares["subset"]["size"] == len(
            Repository.load(ingested_repo).select_subset(filter_name="covid"))
        docs = client.get("/documents", params={"code": "5B81"}).json()
        assert docs["total"] >= 3
