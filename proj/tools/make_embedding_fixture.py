"""Writes data/embeddings/fixture.50d.txt, a small GloVe-format table for tests.

Vectors are synthetic: each word sits near the centroid of a hand-assigned
semantic group, so related words have high cosine similarity. Not GloVe;
point embeddings.path at a real GloVe file for real use.
"""
import json
import pathlib
import re

import numpy as np

DIM = 50
SEED = 7
MAX_TOKENS = 300

GROUPS = {
    "vaccine": "vaccine vaccines vaccinated vaccination vax jab jabs shot shots dose doses booster boosters mrna "
               "pfizer moderna astrazeneca biontech novavax jnj johnson sputnik oxford sinovac covidshield "
               "phizer myrna zenca mirna needles injection",
    "conspiracy": "microchips microchip 5g gates depopulation poison hoax conspiracy lies lied hiding hidden "
                  "shed shedding spike gene genes dna alter alters therapy superpowers wake fake",
    "science": "data study survey researchers research trial trials clinical phase participants volunteers "
               "efficacy effective protection protects immunity percent report reports numbers evidence "
               "published released unverified rare mild precautionary risk nucleus ingredient",
    "harm": "clots blood myocarditis side effects fever chills reaction sick died kills killed deaths "
            "disaster terrible hurt arm sore severe disease hospitalized unsafe",
    "politics": "trump biden fauci government congress politicians mandates mandate federal administration "
                "president economy american americans supporters workers exemptions medical",
    "approval": "fda approval approved authorization emergency full august experimental tested schedule "
                "granted adults",
    "access": "appointment appointments available supply shortage pharmacy stadium weekend free wait "
              "waiting booked doses wasted shipped rollout",
    "place": "texas florida india russia uk brazil canada",
    "positive": "great happy best good strong well trust encouraged miracle recover",
    "speed": "rushed warp speed operation fast never",
}


def vocabulary(root):
    words = []
    seen = set()

    def add(w):
        if w and w not in seen and len(words) < MAX_TOKENS:
            seen.add(w)
            words.append(w)

    for group in GROUPS.values():
        for w in group.split():
            add(w)
    corpus = root / "data" / "fixtures" / "corpus.jsonl"
    for line in corpus.read_text(encoding="utf-8").splitlines():
        text = json.loads(line)["text"].lower()
        for w in re.findall(r"[a-z0-9']+", text):
            if len(w) > 1:
                add(w)
    return words


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    rng = np.random.default_rng(SEED)
    centroids = {name: rng.normal(size=DIM) for name in GROUPS}
    background = rng.normal(size=DIM)
    group_of = {}
    for name, members in GROUPS.items():
        for w in members.split():
            group_of.setdefault(w, name)
    out = root / "data" / "embeddings" / "fixture.50d.txt"
    with out.open("w", encoding="utf-8") as f:
        for w in vocabulary(root):
            base = centroids[group_of[w]] if w in group_of else background * 0.3
            v = base + 0.45 * rng.normal(size=DIM)
            f.write(w + " " + " ".join(f"{x:.5f}" for x in v) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
