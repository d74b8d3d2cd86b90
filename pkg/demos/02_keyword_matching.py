"""How the phrasal matchers are built and what they match.

Builds the three keyword processors (disease names, risk expressions,
topical filters) from the bundled sample config and runs them over a few
sentences, showing word-boundary behaviour, longest-match selection, comma
truncation, and synonym expansion.

    python demos/02_keyword_matching.py
"""

from pathlib import Path

from riskatlas import build_processors, load_config, load_taxonomy
from riskatlas.keywords import tokenize

DATA = Path(__file__).parent / "data"

SENTENCES = [
    "Obesity and type 2 diabetes were major risk factors for severe COVID-19.",
    "Bronchopneumonia was ruled out, pneumonia confirmed.",  # word boundaries
    "Patients with chronic kidney disease fared worse.",     # longest match
    "The 2019-nCoV outbreak spread rapidly.",                # hyphenated token
    "Carcinoma of breast screening uptake declined.",
]


def main():
    config = load_config(DATA / "config")
    taxonomy = load_taxonomy(DATA / "classification.tsv",
                             stop_title=config.stop_title,
                             discard_codes=config.discard_codes())
    processors = build_processors(taxonomy, config.lexicon)
    print(f"disease surfaces: {processors.disease.size}, "
          f"risk surfaces: {processors.risk.size}, "
          f"filters: {sorted(processors.filters)}\n")

    for sentence in SENTENCES:
        print(sentence)
        tokens = tokenize(sentence)
        for key, start, end in processors.disease.extract_keys(sentence):
            title = taxonomy.node(taxonomy.resolve_code(key)).title
            print(f"  disease {key} ({title}): tokens {start}..{end - 1} "
                  f"= {' '.join(tokens[start:end])!r}")
        if processors.risk.contains_any(sentence):
            print("  risk context detected")
        for name, kp in processors.filters.items():
            if kp.contains_any(sentence):
                print(f"  filter {name!r} triggered")
        print()


if __name__ == "__main__":
    main()
