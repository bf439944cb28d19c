#!/usr/bin/env python3
"""Writes data/sample_dialogues.jsonl: 10 blog-comment threads, 229 messages.

Threads 0-4 close on a positive comment, 5-9 on a negative one. Output is
deterministic for a given seed.
"""
import argparse
import json
import random

TOPICS = {
    "office": ["the project deadline moved again", "my manager booked another meeting",
               "our team shipped the client report", "overtime on this shift is normal now",
               "the boss approved the promotion list", "colleagues shared the presentation"],
    "family": ["my kids loved the wedding photos", "my mother called my sister today",
               "the family dinner with my husband and son", "grandma met the baby",
               "our parents visited the children"],
    "domestic": ["the laundry and dishes piled up at home", "cooking dinner after cleaning the kitchen",
                 "groceries and household chores all weekend", "the house repairs and bills"],
    "medical": ["my father is in hospital after the accident", "the doctor ordered surgery",
                "the ambulance reached the emergency ward", "fever and infection at the clinic"],
    "aggression": ["people shout and blame each other", "the argument turned into a fight",
                   "rude insults and anger in the thread", "stop the hostile attack on colleagues"],
}
POSITIVE = ["great", "wonderful", "happy", "proud", "lovely", "helpful", "glad", "excellent"]
NEGATIVE = ["terrible", "awful", "sad", "stressed", "worried", "frustrated", "miserable", "upset"]
NEUTRAL = ["anyway", "we will see", "same here", "noted", "ok", "fair point"]
SIZES = [18, 25, 21, 30, 19, 27, 22, 24, 20, 23]


def sentence(rng, topic, mood):
    words = {"pos": POSITIVE, "neg": NEGATIVE}.get(mood)
    text = rng.choice(TOPICS[topic])
    if words:
        text = f"{text}, {rng.choice(words)}"
    else:
        text = f"{text}, {rng.choice(NEUTRAL)}"
    return text[0].upper() + text[1:] + "."


def thread(rng, index, size, positive_end):
    authors = [f"user{rng.randint(1, 40)}" for _ in range(5)]
    t = 1600000000 + index * 500000 + rng.randint(0, 3600)
    names = ["office", "family", "domestic", "medical", "aggression"]
    weights = [3, 3, 2, 1, 0.5] if positive_end else [3, 1, 1, 2, 2]
    messages = []
    for i in range(size):
        mood = rng.choice(["pos", "neg", None])
        text = sentence(rng, rng.choices(names, weights)[0], mood)
        if rng.random() < 0.15:
            text += " Thank you for sharing."
        if rng.random() < 0.1:
            text += " Sorry to hear that."
        messages.append(text)
    if positive_end:
        messages[-3] = sentence(rng, "family", "pos")
        messages[-2] = "Thank you, thank you, thank you all, this is wonderful."
        messages[-1] = "So happy and grateful for this community, great work everyone."
    else:
        messages[-3] = sentence(rng, "aggression", "neg")
        messages[-2] = sentence(rng, "medical", "neg")
        messages[-1] = "This is awful and sad, terrible news, sorry."
    out = []
    for text in messages:
        out.append({"dialogue_id": f"blog{index + 1:02d}", "timestamp": t,
                    "author_id": rng.choice(authors), "text": text})
        t += rng.randint(300, 8000)
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-o", "--output", default="data/sample_dialogues.jsonl")
    parser.add_argument("--seed", type=int, default=229)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    with open(args.output, "w", encoding="utf-8", newline="\n") as f:
        for index, size in enumerate(SIZES):
            for message in thread(rng, index, size, positive_end=index < 5):
                f.write(json.dumps(message, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
