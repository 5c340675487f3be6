"""Writes tests/fixtures/recommend50.jsonl: 50 posts with explicit annotations
and small integer post vectors, for the recommendation contract checks.

Integer components make exact cosine ties likely; a few posts have zero
coverage. Entity surfaces include hashtag and case variants and one surface
("oxford") that appears under two types.
"""
import json
import pathlib
import random

SEED = 2024
N = 50
DIM = 6

TOPICS = ["Shots", "Trials", "Politics"]
SENTIMENTS = ["negative", "positive", "neutral"]
ENTITIES = [
    ("pfizer", "VAC_TYPE"), ("#pfizer", "VAC_TYPE"), ("Pfizer", "VAC_TYPE"),
    ("moderna", "VAC_TYPE"), ("oxford", "VAC_TYPE"), ("oxford", "GPE"),
    ("fauci", "PERSON"), ("cdc", "ORG"), ("johnson and johnson", "VAC_TYPE"),
]


def main():
    rng = random.Random(SEED)
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "recommend50.jsonl"
    base = [rng.randint(-2, 2) for _ in range(DIM)]
    lines = []
    for i in range(N):
        label = "misleading" if i % 5 in (0, 3) else "non-misleading"
        # skew toward Shots/negative so the strict tier is rarely empty
        topic = TOPICS[0] if rng.random() < 0.6 else rng.choice(TOPICS[1:])
        sentiment = SENTIMENTS[0] if rng.random() < 0.55 else rng.choice(SENTIMENTS[1:])
        entities = rng.sample(ENTITIES, rng.randint(0, 2))
        if i % 7 == 3:
            vector = list(base)  # exact duplicates
        else:
            vector = [rng.randint(-3, 3) for _ in range(DIM)]
        coverage = 0.0 if i % 17 == 16 else 1.0
        lines.append(json.dumps({
            "id": f"R{i + 1:02d}",
            "label": label,
            "topic": topic,
            "sentiment": sentiment,
            "entities": [{"surface": s, "type": t} for s, t in entities],
            "vector": vector if coverage else [0] * DIM,
            "coverage": coverage,
        }))
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} posts to {out}")


if __name__ == "__main__":
    main()
