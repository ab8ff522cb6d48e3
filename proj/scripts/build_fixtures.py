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
"""Regenerates the hand-entered fixtures under data/.

Course and role distributions are entered by hand in the tables below; the
job-demand counts are fitted so that the demand-weighted market profile lands
on the reference per-area market weights.
"""

import csv
import io
import json
import pathlib

import numpy as np
from scipy.optimize import nnls

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

# Percentages in area order 0..8 (Misc, Data, Software, Component,
# Connection, System, Human, Organizational, Societal).
KTH_CORE = [7.7, 18.4, 4.9, 4.9, 5.2, 12.5, 5.3, 24.2, 17.0]
KTH_ELECTIVES = [
    ("anss", "Advanced Networked Systems Security", [10, 0, 20, 0, 40, 20, 0, 10, 0]),
    ("bnss", "Building Networked Systems Security", [12.5, 0, 0, 0, 12.5, 12.5, 0, 62.5, 0]),
    ("cps", "Cyber-Physical Security", [4, 36, 4, 4, 12, 16, 0, 20, 4]),
    ("crypto", "Foundations of Cryptography", [0, 100, 0, 0, 0, 0, 0, 0, 0]),
    ("df", "Digital Forensics", [0, 88.9, 0, 0, 0, 0, 0, 11.1, 0]),
    ("ftol", "Design of Fault-tolerant Systems", [8.7, 8.7, 34.8, 8.7, 8.7, 13.0, 0, 17.4, 0]),
    ("hw", "Hardware Security", [0, 10, 10, 0, 0, 20, 30, 10, 20]),
    ("lbs", "Language-based Security", [0, 0, 44.4, 0, 0, 0, 22.2, 33.3, 0]),
    ("nss", "Networked Systems Security", [12.5, 0, 0, 0, 50, 37.5, 0, 0, 0]),
    ("pet", "Privacy Enhancing Technologies", [0, 21.4, 0, 0, 0, 0, 21.4, 28.6, 28.6]),
    ("projsys", "Project in Systems Security", [8.7, 0, 30.4, 26, 8.7, 8.7, 0, 17.4, 0]),
    ("salss", "Security Analysis of Large-Scale Systems", [22.2, 0, 0, 0, 11.1, 22.2, 0, 44.4, 0]),
]

# Paraphrased catalogue text; the replay fixture is keyed on these bytes.
BNSS_DESCRIPTION = (
    "Students work in teams on present-day security problems of networked systems, "
    "using problem-based learning to address current technical cybersecurity challenges. "
    "They study requirements, write design specifications, build solutions with "
    "professional tools and critically compare the efficiency of alternative solutions."
)
BNSS_TOPICS = [
    ("building networked systems security", [7]),
    ("handling contemporary security problems for networked systems", [4]),
    ("problem-based learning", [0]),
    ("teamwork in cybersecurity", [7]),
    ("investigating requirements for networked systems security", [5]),
    ("designing specifications for cybersecurity", [7]),
    ("preparing solutions with professional tools", [7]),
    ("critically assessing the efficiency of alternative solutions", [7]),
]

NTU_CORE = [4, 28, 10, 0, 5, 9, 14, 26, 4]
NTU_ELECTIVE_AGGREGATE = [5, 15, 12, 5, 16, 14, 4, 25, 3]
KTH_ELECTIVE_AGGREGATE = [7, 20, 13, 3, 13, 11, 6, 23, 4]
CMU_CORE = [13, 15, 4, 0, 13, 6, 5, 34, 10]

MARKET_WEIGHTS = [16.3, 8.9, 5.3, 1.9, 11.7, 5.5, 6.9, 33.3, 10.2]

CATEGORY_ROWS = [
    ("OVERSIGHT and GOVERNANCE", "OG", [16, 7, 3, 1, 9, 3, 7, 41, 12]),
    ("DESIGN and DEVELOPMENT", "DD", [14, 6, 10, 4, 11, 9, 5, 32, 8]),
    ("IMPLEMENTATION and OPERATION", "IO", [20, 11, 4, 2, 12, 5, 8, 29, 10]),
    ("PROTECTION and DEFENSE", "PD", [15, 11, 3, 1, 16, 5, 6, 33, 9]),
    ("INVESTIGATION", "IN", [12, 21, 3, 2, 9, 7, 5, 28, 12]),
]

ROLE_ROWS = [
    ("Communications Security (COMSEC) Management", "OG", [10, 12, 5, 5, 5, 4, 8, 38, 11]),
    ("Cybersecurity Policy and Planning", "OG", [15, 6, 2, 0, 8, 2, 6, 44, 17]),
    ("Cybersecurity Workforce Management", "OG", [19, 4, 3, 0, 7, 0, 4, 51, 12]),
    ("Cybersecurity Curriculum Development", "OG", [33, 6, 0, 0, 11, 2, 8, 29, 12]),
    ("Cybersecurity Instruction", "OG", [26, 8, 0, 0, 17, 3, 8, 26, 10]),
    ("Cybersecurity Legal Advice", "OG", [17, 12, 2, 0, 5, 0, 12, 36, 17]),
    ("Executive Cybersecurity Leadership", "OG", [8, 5, 2, 0, 15, 3, 5, 46, 15]),
    ("Privacy Compliance", "OG", [10, 11, 1, 1, 11, 4, 13, 31, 18]),
    ("Product Support Management", "OG", [18, 4, 4, 3, 7, 3, 4, 48, 10]),
    ("Program Management", "OG", [16, 5, 5, 3, 8, 3, 5, 45, 11]),
    ("Secure Project Management", "OG", [18, 4, 4, 3, 7, 3, 4, 45, 10]),
    ("Security Control Assessment", "OG", [23, 9, 6, 3, 11, 5, 6, 31, 7]),
    ("Systems Authorization", "OG", [15, 13, 3, 0, 8, 5, 6, 39, 11]),
    ("Systems Security Management", "OG", [14, 7, 6, 4, 12, 6, 5, 39, 7]),
    ("Technology Portfolio Management", "OG", [7, 7, 2, 0, 9, 0, 7, 51, 16]),
    ("Technology Program Auditing", "OG", [16, 6, 2, 0, 6, 0, 6, 51, 14]),
    ("Cybersecurity Architecture", "DD", [17, 7, 9, 4, 16, 13, 5, 25, 5]),
    ("Enterprise Architecture", "DD", [14, 6, 7, 5, 14, 13, 6, 28, 6]),
    ("Secure Software Development", "DD", [13, 3, 19, 4, 11, 11, 4, 28, 9]),
    ("Secure Systems Development", "DD", [17, 8, 12, 3, 13, 8, 6, 26, 7]),
    ("Software Security Assessment", "DD", [12, 3, 19, 5, 10, 9, 4, 29, 9]),
    ("Systems Requirements Planning", "DD", [14, 9, 6, 4, 8, 8, 8, 34, 9]),
    ("Systems Testing and Evaluation", "DD", [14, 6, 9, 5, 8, 9, 6, 34, 10]),
    ("Technology Research and Development", "DD", [18, 8, 8, 5, 16, 7, 3, 25, 10]),
    ("Operational Technology (OT) Cybersecurity Engineering", "DD", [5, 7, 0, 0, 7, 5, 5, 62, 9]),
    ("Data Analysis", "IO", [20, 13, 7, 1, 7, 8, 8, 25, 11]),
    ("Database Administration", "IO", [22, 17, 0, 0, 7, 1, 12, 29, 12]),
    ("Knowledge Management", "IO", [31, 8, 2, 0, 8, 0, 8, 31, 13]),
    ("Network Operations", "IO", [20, 10, 4, 4, 21, 5, 7, 23, 8]),
    ("Systems Administration", "IO", [12, 8, 5, 4, 21, 7, 6, 28, 8]),
    ("Systems Security Analysis", "IO", [18, 9, 6, 4, 14, 8, 6, 28, 7]),
    ("Technical Support", "IO", [18, 10, 1, 0, 9, 4, 10, 37, 10]),
    ("Defensive Cybersecurity", "PD", [17, 9, 6, 3, 20, 8, 5, 26, 6]),
    ("Digital Forensics", "PD", [14, 23, 5, 4, 11, 9, 3, 22, 10]),
    ("Incident Response", "PD", [10, 10, 1, 0, 19, 3, 10, 37, 10]),
    ("Infrastructure Support", "PD", [11, 11, 0, 0, 22, 3, 9, 34, 11]),
    ("Insider Threat Analysis", "PD", [15, 10, 0, 0, 8, 3, 5, 51, 8]),
    ("Threat Analysis", "PD", [32, 5, 2, 0, 18, 3, 5, 26, 8]),
    ("Vulnerability Analysis", "PD", [9, 10, 4, 0, 14, 6, 9, 36, 14]),
    ("Cybercrime Investigation", "IN", [12, 18, 1, 0, 9, 4, 6, 35, 15]),
    ("Digital Evidence Analysis", "IN", [13, 25, 5, 4, 10, 10, 4, 21, 10]),
]
NO_DEMAND = {"Operational Technology (OT) Cybersecurity Engineering"}

VA_SAMPLE_KDS = [
    ("K-PT", "Knowledge of penetration testing tools and techniques", [5]),
    ("K-SE", "Knowledge of social engineering tools and techniques", [6, 8]),
    ("K-CS", "Knowledge of cyberattack stages", [0]),
]


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")) + "\n")


def write_role_csv(path, rows, demand=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["role", "category"] + [f"ka{i}" for i in range(9)] + ["demand"])
    for name, cat, vals in rows:
        d = "" if demand is None or name not in demand else demand[name]
        w.writerow([name, cat] + vals + [d])
    path.write_text(buf.getvalue(), encoding="utf-8")


def kth():
    core = {"id": "kth-core", "title": "Mandatory courses", "description": "",
            "credits": 39.5, "kind": "mandatory", "distribution": KTH_CORE}
    electives = []
    for cid, title, dist in KTH_ELECTIVES:
        row = {"id": cid, "title": title, "description": "", "credits": 7.5,
               "kind": "elective", "distribution": dist}
        if cid == "bnss":
            row["description"] = BNSS_DESCRIPTION
            row["topics"] = [{"text": t, "labels": l} for t, l in BNSS_TOPICS]
        electives.append(row)
    free = {"id": "kth-free", "title": "Free-choice courses", "description": "",
            "credits": 20.5, "kind": "free"}
    thesis = {"id": "kth-thesis", "title": "Degree project", "description": "",
              "credits": 30, "kind": "mandatory", "degree_project": True}
    write_jsonl(DATA / "kth_curriculum.jsonl", [core] + electives + [free, thesis])
    write_jsonl(DATA / "kth_electives.jsonl", electives)


def ntu(annotations):
    rows = [{"id": "ntu-core", "title": "Core courses", "description": "",
             "credits": 12, "kind": "mandatory", "distribution": NTU_CORE}]
    titles = {"NTU-NETSEC": "Network Security", "NTU-SWSEC": "Software Security",
              "NTU-PPTAI": "Privacy Preserving Technologies and Security in AI"}
    for cid, title in titles.items():
        topics = [{"text": r["topic"], "labels": r["CurricuLLM"]}
                  for r in annotations if r["course_id"] == cid]
        rows.append({"id": cid.lower(), "title": title, "description": "", "credits": 3,
                     "kind": "elective", "topics": topics})
    rows.append({"id": "ntu-capstone", "title": "Capstone project", "description": "",
                 "credits": 6, "kind": "mandatory", "degree_project": True})
    write_jsonl(DATA / "ntu_curriculum.jsonl", rows)


def expand_cell(cell):
    cell = cell.strip()
    if cell == "--":
        return None
    out = set()
    for item in cell.split(","):
        item = item.strip().replace("–", "--").replace("--", "-")
        if "-" in item:
            lo, hi = item.split("-")
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(item))
    return sorted(out)


def load_course_annotations():
    with open(DATA / "annotations_courses.csv", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    for r in rows:
        r["CurricuLLM"] = expand_cell(r["CurricuLLM"])
    return rows


def fit_demand():
    """Non-negative demand shares whose weighted role mix hits MARKET_WEIGHTS."""
    names = [r[0] for r in ROLE_ROWS if r[0] not in NO_DEMAND]
    rows = {r[0]: np.array(r[2], float) for r in ROLE_ROWS}
    A = np.stack([rows[n] / rows[n].sum() for n in names], axis=1)
    t = np.array(MARKET_WEIGHTS) / sum(MARKET_WEIGHTS)
    # Sum-to-one row (heavily weighted) plus a small ridge pulling toward the
    # uniform mix, which keeps every role in play.
    lam = 0.02
    n = len(names)
    A_aug = np.vstack([A, 100.0 * np.ones((1, n)), lam * np.eye(n)])
    b_aug = np.concatenate([t, [100.0], lam * np.full(n, 1.0 / n)])
    w, _ = nnls(A_aug, b_aug)
    w /= w.sum()
    counts = {nm: int(round(x * 200000)) for nm, x in zip(names, w)}
    got = sum(counts[nm] * rows[nm] / rows[nm].sum() for nm in names) / sum(counts.values())
    err = np.abs(got * 100 - np.array(MARKET_WEIGHTS))
    assert err.max() <= 0.5, err
    return counts, err.max()


def main():
    kth()
    ann = load_course_annotations()
    ntu(ann)
    write_role_csv(DATA / "roles_nice2025.csv", ROLE_ROWS)
    write_role_csv(DATA / "categories_nice2025.csv", CATEGORY_ROWS)
    counts, err = fit_demand()
    write_jsonl(DATA / "demand_fitted.jsonl",
                [{"role": k, "count": v} for k, v in sorted(counts.items())])
    write_jsonl(DATA / "demand_uniform.jsonl",
                [{"role": r[0], "count": 1} for r in ROLE_ROWS if r[0] not in NO_DEMAND])
    write_jsonl(DATA / "va_sample_kds.jsonl",
                [{"id": i, "text": t, "labels": l} for i, t, l in VA_SAMPLE_KDS])
    write_jsonl(DATA / "va_sample_role_kds.jsonl",
                [{"role": "Vulnerability Analysis (sample KDs)", "category": "PD",
                  "kd_ids": [k[0] for k in VA_SAMPLE_KDS]}])
    print(f"demand fit max error {err:.3f} points")


if __name__ == "__main__":
    main()
