"""End-to-end: ingest the sample corpus, then compute every indicator.

Scans the bundled 26-document literature sample into a temporary
repository and prints branch shares, occurrence rollups (the treemap
input), document frequencies, and the risk-vs-corpus gap ranking, both
for the whole corpus and for the COVID-19 filter subset.

    python demos/03_corpus_indicators.py
"""

from pathlib import Path

from riskatlas import (
    Repository,
    Role,
    branch_occurrences,
    branch_share,
    build_indicator_table,
    build_processors,
    gap_ranking,
    load_config,
    load_taxonomy,
)
from riskatlas.corpus import ingest_corpus_file

DATA = Path(__file__).parent / "data"


def main():
    config = load_config(DATA / "config")
    taxonomy = load_taxonomy(DATA / "classification.tsv",
                             stop_title=config.stop_title,
                             discard_codes=config.discard_codes())
    processors = build_processors(taxonomy, config.lexicon)

    repo = Repository()
    report = ingest_corpus_file(repo, DATA / "corpus.jsonl", processors.disease,
                                processors.risk, processors.filters)
    print(f"ingested {report.documents_processed} documents, "
          f"{report.documents_with_code} with a disease, "
          f"{report.documents_with_risk_code} with a disease at risk")

    for label, subset in [
        ("whole corpus", repo.select_subset()),
        ("covid-filtered", repo.select_subset(filter_name="covid")),
    ]:
        table = build_indicator_table(repo, taxonomy, subset)
        print(f"\n=== {label}: {table.subset_size} documents, "
              f"{len(table.found_set)} diseases found, "
              f"{len(table.at_risk_set)} at risk ===")

        print("chapter shares (catalog / found / at-risk):")
        per_role = {role: branch_share(table, taxonomy, None, role) for role in Role}
        for i, row in enumerate(per_role[Role.CATALOG].rows):
            title = taxonomy.node(row.node_id).title
            found = per_role[Role.FOUND].rows[i].share
            risk = per_role[Role.AT_RISK].rows[i].share
            print(f"  {title:<50} {row.share:5.2f} / {found:5.2f} / {risk:5.2f}")

        print("at-risk occurrences by chapter (treemap totals):")
        trees = branch_occurrences(table, taxonomy, None, Role.AT_RISK)
        for tree in sorted(trees, key=lambda t: -t.total):
            print(f"  {taxonomy.node(tree.node_id).title:<50} {tree.total}")

        print("top gaps (risk frequency minus corpus frequency):")
        for row in gap_ranking(table, k=5):
            title = taxonomy.node(taxonomy.resolve_code(row.code)).title
            print(f"  {title:<40} found {row.freq_found:5.2f} "
                  f"risk {row.freq_risk:5.2f} gap {row.gap:+5.2f}")


if __name__ == "__main__":
    main()
