"""Writes data/fixtures/corpus.jsonl: a small hand-written corpus for end-to-end runs."""
import json
import pathlib

# (text, label) where label is "misleading", "non-misleading" or None.
POSTS = [
    ("The Pfizer vaccine will alter your DNA, do not take it!", "misleading"),
    ("Pfizer vaccine does not alter DNA. mRNA never enters the nucleus.", "non-misleading"),
    ("Bill Gates put microchips in the Moderna vaccine #5G", "misleading"),
    ("There are no microchips in the Moderna vaccine, the ingredient list is public.", "non-misleading"),
    ("AstraZeneca shots cause blood clots in everyone who gets them", "misleading"),
    ("Blood clots after AstraZeneca are very rare, about 4 per million doses.", "non-misleading"),
    ("The vaccine was rushed by Operation Warp Speed and never tested", "misleading"),
    ("Operation Warp Speed funded manufacturing early; the clinical trials still ran all three phases.", "non-misleading"),
    ("Trump says the vaccine is a miracle and nobody needs masks anymore", "misleading"),
    ("Trump got vaccinated in January and encouraged supporters to get the shot.", "non-misleading"),
    ("Johnson and Johnson vaccine kills more people than covid", "misleading"),
    ("The Johnson and Johnson vaccine pause was precautionary, the risk remains very low.", "non-misleading"),
    ("Novavax is hiding their trial deaths from the public", "misleading"),
    ("Novavax published phase 3 trial data showing 90 percent efficacy.", "non-misleading"),
    ("FDA approval was fake, the vaccine is still experimental", "misleading"),
    ("The FDA granted full approval to the Pfizer vaccine in August.", "non-misleading"),
    ("Vaccinated people shed the spike protein and make others sick", "misleading"),
    ("Shedding is not possible with mRNA vaccines, they contain no live virus.", "non-misleading"),
    ("Biden wants to force the jab on every American through mandates", "misleading"),
    ("Biden announced new vaccine mandates for federal workers with medical exemptions.", "non-misleading"),
    ("Got my second dose of Moderna today, sore arm but feeling great!", None),
    ("Booked a Pfizer appointment at the pharmacy, supply finally looks good", None),
    ("Side effects from the booster were a mild fever for one day", None),
    ("The CDC data shows vaccinated people are far less likely to be hospitalized", None),
    ("Myocarditis cases after mRNA vaccines are rare and mostly mild", None),
    ("I refuse to take the Pfizer vaccine, it is my choice", None),
    ("The vaccine is poison and the government knows it", None),
    ("Sputnik vaccine approved in Russia before trials ended", None),
    ("AstraZeneca efficacy against variants looks lower in new study", None),
    ("Trump vaccine rollout was a disaster in Texas", None),
    ("No vaccine appointments available anywhere in Florida, shortage everywhere", None),
    ("Moderna booster approved for adults over 65", None),
    ("BioNTech and Pfizer report strong protection from the booster", None),
    ("JnJ single shot is great for people who hate needles", None),
    ("The Oxford AstraZeneca trial had volunteers in the UK and Brazil", None),
    ("Phizer shot gave me superpowers lol", None),
    ("Myrna vaccine is gene therapy, wake up people", None),
    ("Zenca jab made my arm hurt for a week", None),
    ("Covidshield doses shipped to India this week", None),
    ("The vaccines are a depopulation plan by Bill Gates", None),
    ("Fauci lied about the vaccine efficacy numbers", None),
    ("Vaccine hesitancy is falling among Americans according to a new survey", None),
    ("Lock down again? The vaccine was supposed to end this", None),
    ("Millions of doses wasted while people wait for appointments", None),
    ("Pfizer made billions from the vaccine", None),
    ("I am so happy my parents got their first dose!", None),
    ("Terrible reaction to the Moderna shot, chills and fever all night", None),
    ("Clinical trial participants reported mostly mild side effects", None),
    ("The microchip conspiracy is a hoax, stop spreading lies", None),
    ("Vaccines are not effective against the delta variant at all", None),
    ("Emergency use authorization does not mean the vaccine is unsafe", None),
    ("Novavax could be approved soon according to the FDA schedule", None),
    ("My cousin died after the Johnson vaccine and nobody reports it", None),
    ("Johnson said the economy will recover soon", None),
    ("Free vaccine appointments available this weekend at the stadium", None),
    ("Biden administration to send vaccines to Canada", None),
    ("Mirna vaccine alters your genes permanently", None),
    ("The mRNA vaccine protects well against severe disease", None),
    ("Why would anyone trust a vaccine made at warp speed??", None),
    ("Great news: the booster is effective against the new variant", None),
    ("The vaccine has killed more people than the virus, look at VAERS", None),
    ("VAERS reports are unverified and anyone can submit them", None),
    ("Sinovac efficacy data released by researchers in Brazil", None),
    ("Politicians in Congress argue about vaccine mandates again", None),
    ("Moderna is the best vaccine, no side effects at all for me", None),
    ("Pfizer trial data was hidden from the public for 75 years", None),
]


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures" / "corpus.jsonl"
    start = 1617235200  # 2021-04-01T00:00:00Z
    with out.open("w", encoding="utf-8") as f:
        for i, (text, label) in enumerate(POSTS):
            rec = {
                "id": f"T{i + 1:03d}",
                "text": text,
                "timestamp": start + i * 7 * 3600 + (i % 5) * 600,
                "label": label,
                "source": "fixture",
            }
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(POSTS)} posts to {out}")


if __name__ == "__main__":
    main()
