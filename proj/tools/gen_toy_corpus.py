#!/usr/bin/env python3
"""Regenerates data/toy_corpus: 6 targets x 60 short documents.

Two planted topics share a small filler vocabulary. The first three
documents of every target place the target too close to the start to yield
a full 41-word window, so each target has 57 usable documents.
"""
import argparse
import pathlib
import random

TOPICS = {
    "bright": ["sunshine", "festival", "laughter", "celebration", "music", "dance",
               "garden", "picnic", "wedding", "birthday", "holiday", "smile",
               "friendship", "summer", "flowers", "singing", "reunion", "gift",
               "success", "victory", "puppy", "beach", "picnics", "balloons",
               "cake", "songs", "sunny", "meadow", "party", "cheering"],
    "dark": ["shadow", "darkness", "storm", "danger", "scream", "threat",
             "monster", "nightmare", "attack", "predator", "cliff", "ghost",
             "fire", "alley", "stranger", "trembling", "sirens", "wolves",
             "haunted", "crash", "injury", "warning", "panic", "sweat",
             "heartbeat", "locked", "cellar", "escape", "hiding", "thunder"],
}
TARGETS = {"joy": "bright", "delight": "bright", "gladness": "bright",
           "fear": "dark", "dread": "dark", "terror": "dark"}
FILLER = ["people", "often", "feel", "moment", "time", "life", "world", "story",
          "day", "friends", "think", "family", "words", "remember", "night",
          "morning", "simply", "really", "never", "always"]
NOISE = ["the", "and", "of", "to", "in", "is", "it", "was", "a", "with", "for", "they"]


def word(rng, topic):
    return rng.choice(FILLER) if rng.random() < 0.2 else rng.choice(TOPICS[topic])


def render(rng, words):
    out = []
    for i, w in enumerate(words):
        if rng.random() < 0.25:
            out.append(rng.choice(NOISE))
        if rng.random() < 0.03:
            out.append(str(rng.randint(1, 2024)))
        out.append(w)
        if i % 11 == 10:
            out[-1] += rng.choice([".", ",", "!", ";", "?"])
    text = " ".join(out)
    return text[0].upper() + text[1:] + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1] / "data" / "toy_corpus"))
    ap.add_argument("--seed", type=int, default=2011)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    root = pathlib.Path(args.out)
    for target, topic in TARGETS.items():
        d = root / target
        d.mkdir(parents=True, exist_ok=True)
        for doc in range(60):
            before = 5 if doc < 3 else rng.randint(22, 30)
            after = rng.randint(22, 30)
            words = [word(rng, topic) for _ in range(before)]
            words.append(target.capitalize() if rng.random() < 0.2 else target)
            words += [word(rng, topic) for _ in range(after)]
            (d / f"{doc + 1:03d}.txt").write_text(render(rng, words), encoding="utf-8")
    (root.parent / "toy_targets.txt").write_text(
        "# Targets of the bundled toy corpus\n" + "\n".join(TARGETS) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
