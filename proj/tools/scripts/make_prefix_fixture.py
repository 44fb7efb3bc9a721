#!/usr/bin/env python3
# Copyright 2026 The autocompose Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Write the prefix-match conformance fixture.

Each line holds a candidate list (already in display order), the characters
typed since the last word boundary, and the expected match computed here by
a plain linear scan:

    {"candidates": [{"text": ..., "normalized_score": ...}, ...],
     "typed": "up",
     "expected": {"index": 0, "remainder": "loading the documents"} | null}

Both the core session tests and the playground client replay this file.

    make_prefix_fixture.py --out tests/data/prefix_match_conformance.ndjson
"""

import argparse
import json
import pathlib
import random

WORDS = ["up", "update", "updated", "uploading", "upload", "Up", "the", "then", "thank",
         "th", "documents", "doc", "for", "form", "fo", "you", "your", "café", "café-bar"]


def first_word(text):
    return text.split(" ", 1)[0]


def expected_match(candidates, typed):
    best = None
    for i, c in enumerate(candidates):
        text = c["text"]
        head = first_word(text)
        if not typed or not head.startswith(typed):
            continue
        if " " not in text and head == typed:
            continue
        if best is None or ranks_before(c, candidates[best]):
            best = i
    if best is None:
        return None
    return {"index": best, "remainder": candidates[best]["text"][len(typed):]}


def ranks_before(a, b):
    if a["normalized_score"] != b["normalized_score"]:
        return a["normalized_score"] > b["normalized_score"]
    return a["text"] < b["text"]


def sort_key(c):
    # Display order: score descending, then text ascending by UTF-8 bytes.
    return (-c["normalized_score"], c["text"].encode("utf-8"))


def hand_cases():
    return [
        ([("uploading the documents", -0.4), ("the update", -0.5)], "up"),
        ([("uploading the documents", -0.4), ("the update", -0.5)], "zz"),
        ([("uploading the documents", -0.4), ("the update", -0.5)], "uploading"),
        ([("the update", -0.5)], "the"),
        ([("the", -0.2)], "the"),
        ([("Up there", -0.2), ("up here", -0.3)], "up"),
        ([("then", -0.3), ("the end", -0.3)], "th"),
    ]


def random_cases(rng, count):
    scores = [-0.1, -0.25, -0.4, -0.4, -0.7, -1.3, -2.0]
    for _ in range(count):
        cands = []
        for _ in range(rng.randint(0, 5)):
            words = [rng.choice(WORDS) for _ in range(rng.randint(1, 3))]
            cands.append((" ".join(words), rng.choice(scores)))
        if cands and rng.random() < 0.8:
            w = first_word(rng.choice(cands)[0])
            typed = w[: rng.randint(1, len(w))]
        else:
            typed = "".join(rng.choice("uptfhdcxyé") for _ in range(rng.randint(1, 4)))
        yield cands, typed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=pathlib.Path, required=True)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cases = hand_cases() + list(random_cases(rng, args.count))
    with args.out.open("w", encoding="utf-8") as f:
        for cands, typed in cases:
            candidates = sorted(({"text": t, "normalized_score": s} for t, s in cands), key=sort_key)
            record = {"candidates": candidates, "typed": typed,
                      "expected": expected_match(candidates, typed)}
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
