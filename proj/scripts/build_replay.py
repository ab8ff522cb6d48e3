#!/usr/bin/env python3
# Copyright 2026 The CurriAlign Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes golden request bodies and offline replay entries.

Request bodies are serialized compactly with keys in insertion order, which is
byte-compatible with the C++ client for ASCII content. Replay entries are named
by the SHA-256 of that body.
"""

import hashlib
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
REPLAY = ROOT / "data" / "replay"

MODEL = "classify-lm"

EXTRACT_SYSTEM = "\n".join([
    "You are a helpful AI assistant. Instructions:",
    "a. Carefully read the topic and the description.",
    "b. Provide a list of all subtopics contained within the description.",
    "c. Do not include any explanation or additional text in the response.",
])

CLASSIFY_SYSTEM = "\n".join([
    "You are a helpful AI assistant.",
    "Instructions:",
    "a. Carefully read the knowledge statement.",
    "b. Choose one or more of the following (0, 1, 2, 3, 4, 5, 6, 7, 8).",
    "c. Do NOT include any explanation or additional text in the response.",
])

OPTIONS = ",\n".join([
    'Options: {"0": "miscellaneous (this includes Computer Science, Business and Law, '
    'Communication and Networking, Information Technology, Cyberspace Practice, Pedagogy, '
    'and Intelligence)"',
    '"1": "data security"',
    '"2": "software security"',
    '"3": "component security"',
    '"4": "connection security"',
    '"5": "system security"',
    '"6": "human security"',
    '"7": "organizational security"',
    '"8": "societal security"}',
])


def body(system, user):
    doc = {"model": MODEL, "temperature": 0.0,
           "messages": [{"role": "system", "content": system},
                        {"role": "user", "content": user}]}
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=False)


def extract_body(title, description):
    return body(EXTRACT_SYSTEM, f"#topic: {title}, #description: {description}")


def classify_body(text):
    return body(CLASSIFY_SYSTEM,
                f"#Question: Classify the following statement {text} into one or multiple "
                f"of the following knowledge areas:\n{OPTIONS}")


def record(request, response):
    key = hashlib.sha256(request.encode("utf-8")).hexdigest()
    entry = {"request": json.loads(request), "response": response}
    (REPLAY / f"{key}.json").write_text(json.dumps(entry, indent=2) + "\n", encoding="utf-8")


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    REPLAY.mkdir(parents=True, exist_ok=True)
    for old in REPLAY.glob("*.json"):
        old.unlink()

    courses = [json.loads(l) for l in (ROOT / "data" / "kth_electives.jsonl").open()]
    bnss = next(c for c in courses if c["id"] == "bnss")

    (GOLDEN / "extract_topics_request.json").write_text(
        extract_body(bnss["title"], bnss["description"]), encoding="utf-8")
    (GOLDEN / "classify_zero_shot_request.json").write_text(
        classify_body("encryption algorithms"), encoding="utf-8")

    topics = bnss["topics"]
    reply = "\n".join(f"{i + 1}. {t['text'].capitalize()}" for i, t in enumerate(topics))
    record(extract_body(bnss["title"], bnss["description"]), reply)
    for t in topics:
        record(classify_body(t["text"]), ", ".join(str(x) for x in t["labels"]))
    record(classify_body("encryption algorithms"), "1")

    # Zero-shot replies for the 50 sample knowledge statements, prefix stripped.
    for line in (ROOT / "data" / "kds_sample.jsonl").open():
        kd = json.loads(line)
        text = kd["text"].lower()
        if text.startswith("knowledge of "):
            text = text[len("knowledge of "):]
        record(classify_body(text.strip()), ", ".join(str(x) for x in kd["labels"]))
    print(f"replay entries: {len(list(REPLAY.glob('*.json')))}")


if __name__ == "__main__":
    main()
