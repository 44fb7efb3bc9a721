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
"""Convert Project Gutenberg play transcriptions into an NDJSON note corpus.

Every speech becomes one note; the speaker (qualified by play) becomes the
user id. Timestamps are synthetic and advance by a fixed step so that the
per-user training window has something to cut.

    plays_to_corpus.py --out data/shakespeare_notes.ndjson hamlet_gut.txt ...
"""

import argparse
import datetime as dt
import json
import pathlib
import re

SPEAKER = re.compile(r"^([A-Z][A-Za-z]*\.?(?: [A-Z][A-Za-z]*\.?){0,2})$")
STAGE = re.compile(r"\[[^\]]*\]")


def speeches(path):
    lines = path.read_text(encoding="utf-8", errors="replace").splitlines()
    speaker, buf = None, []
    for raw in lines + [""]:
        line = raw.strip()
        if not line:
            if speaker and buf:
                text = STAGE.sub(" ", " ".join(buf))
                text = " ".join(text.split())
                if text:
                    yield speaker, text
            speaker, buf = None, []
            continue
        if speaker is None and not buf and SPEAKER.match(line) and line.endswith("."):
            speaker = line.rstrip(".").lower().replace(" ", "_")
            continue
        if speaker is not None:
            buf.append(line)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", required=True)
    ap.add_argument("--min-bytes", type=int, default=1_100_000)
    ap.add_argument("--start", default="2023-01-01T08:00:00Z")
    ap.add_argument("--step-minutes", type=int, default=9)
    ap.add_argument("plays", nargs="+")
    args = ap.parse_args()

    t = dt.datetime.fromisoformat(args.start.replace("Z", "+00:00"))
    step = dt.timedelta(minutes=args.step_minutes)
    total = 0
    with open(args.out, "w", encoding="utf-8") as out:
        for play in args.plays:
            path = pathlib.Path(play)
            tag = path.stem.replace("_gut", "")
            for speaker, text in speeches(path):
                rec = {
                    "user_id": f"{tag}.{speaker}",
                    "created_at": t.strftime("%Y-%m-%dT%H:%M:%SZ"),
                    "text": text,
                }
                out.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")
                total += len(text.encode("utf-8"))
                t += step
            if total >= args.min_bytes:
                break
    print(f"wrote {args.out}: {total} bytes of note text")


if __name__ == "__main__":
    main()
