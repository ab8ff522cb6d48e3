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
"""Seeded generator for the synthetic text fixtures.

Writes
  data/finetune_corpus.jsonl   labeled short topic texts for the baseline
  data/kds_sample.jsonl        50 knowledge statements
  data/annotations_kds.csv     four annotators' labels for those statements

The annotator columns are searched so that the pairwise overlap counts equal
the reference agreement percentages for the 50 statements exactly.
"""

import csv
import io
import json
import pathlib
import random

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
SEED = 20250917

# Term banks per area (0 Misc .. 8 Societal). Deliberately overlapping in a
# few places ("privacy", "testing", "management") as the real taxonomy does.
BANKS = {
    0: """computer science fundamentals; discrete mathematics; algorithms and complexity;
    programming languages; operating systems concepts; computer architecture; database
    systems; business continuity economics; contract law basics; communication skills;
    technical writing; data communications; networking fundamentals; information
    technology service delivery; cyberspace operations practice; pedagogy for security
    education; curriculum design; intelligence analysis tradecraft; open source
    intelligence; statistics and probability; linear algebra; graph theory; compiler
    construction; project collaboration; presentation skills; professional development;
    research methodology; academic writing; teamwork; problem solving; critical thinking;
    systems engineering lifecycle; cloud computing concepts; virtualization basics;
    scripting with python; command line usage; spreadsheet modeling; mission planning;
    cyberattack stages; adversary tactics overview; case study discussion; laboratory
    exercises; capstone preparation; literature review; interdisciplinary seminar;
    mathematics for computing; logic and proofs; human computer interaction basics""",
    1: """symmetric cryptography; asymmetric cryptography; public key infrastructure; digital
    signatures; hash functions; message authentication codes; block ciphers; stream
    ciphers; elliptic curve cryptography; key exchange protocols; key management;
    cryptanalysis techniques; side channel cryptanalysis; random number generation;
    data integrity verification; authenticated encryption; disk encryption; file system
    forensics; memory forensics; evidence acquisition; chain of custody; forensic
    imaging; data recovery; steganography detection; secure data deletion; data
    classification; data loss prevention; database encryption; tokenization;
    homomorphic encryption; zero knowledge proofs; secure multiparty computation;
    differential privacy mechanisms; anonymization of datasets; secure storage
    architectures; backup integrity; certificate authorities; transport layer
    encryption; end to end encryption; quantum resistant cryptography; lattice based
    schemes; encryption algorithms; ciphertext indistinguishability; secret sharing;
    password hashing; key derivation functions; data at rest protection""",
    2: """secure coding practices; input validation; buffer overflow prevention; memory
    safety; injection vulnerabilities; cross site scripting; software design
    principles; threat modeling for applications; static code analysis; dynamic
    application testing; fuzz testing; code review; secure software development
    lifecycle; software deployment hardening; patch management for applications;
    dependency vulnerability scanning; software bill of materials; secure api design;
    language based security; type systems; information flow control; sandboxing
    untrusted code; compiler hardening flags; exploit mitigation; return oriented
    programming; reverse engineering binaries; malware analysis of executables;
    mobile application security; web application firewalls; authentication libraries;
    session management; error handling; secure configuration defaults; software
    documentation; unit testing security; formal verification of programs; program
    analysis; concurrency bugs; integer overflow; format string attacks; race
    conditions in code; software ethics; secure build pipelines; code signing;
    software supply chain integrity; regression testing""",
    3: """hardware trojans; integrated circuit design security; microcontroller security;
    firmware analysis; trusted platform modules; secure boot chains; hardware roots of
    trust; physical unclonable functions; fault injection attacks; power analysis;
    electromagnetic emanations; chip reverse engineering; component procurement;
    counterfeit component detection; supply chain risk for components; embedded
    system hardening; field programmable gate arrays; smart card security; tamper
    resistance; hardware security modules; processor speculative execution; cache
    timing channels; peripheral device security; usb device attacks; bios and uefi
    protection; iot device components; sensor spoofing; component testing; component
    design review; secure element chips; memory module attacks; rowhammer; cold boot
    attacks; printed circuit board inspection; hardware debugging interfaces; jtag
    access control; silicon lifecycle; component interfaces; device attestation;
    secure enclaves; trusted execution environments; hardware fault tolerance""",
    4: """network protocols security; tcp ip vulnerabilities; routing security; bgp
    hijacking; dns security extensions; firewalls and packet filtering; intrusion
    detection systems; intrusion prevention; network segmentation; virtual private
    networks; ipsec tunnels; wireless network security; wifi protected access;
    bluetooth attacks; denial of service mitigation; distributed denial of service;
    network traffic analysis; packet capture; network monitoring; secure network
    architecture; software defined networking; network access control; port scanning;
    man in the middle attacks; arp spoofing; transport layer security handshake;
    email security protocols; web proxies; content delivery networks; network
    defense; honeypots; network services hardening; physical media security; cabling
    and interfaces; cellular network security; satellite links; industrial control
    networks; network forensics; zero trust networking; load balancers; network
    hardware architecture; anomaly detection in traffic; secure remote access""",
    5: """system thinking; systems management; identity and access control; access control
    models; role based access control; mandatory access control; operating system
    hardening; system configuration management; vulnerability management; penetration
    testing; system retirement; system testing and evaluation; security architectures;
    defense in depth; cloud infrastructure security; container security; virtualization
    security; hypervisor isolation; logging and auditing; security information and
    event management; endpoint detection and response; system monitoring; incident
    detection; resilience engineering; fault tolerant system design; availability
    engineering; cyber physical systems; safety critical systems; distributed systems
    security; large scale system analysis; attack surface reduction; privilege
    escalation; system integrity monitoring; common criteria evaluation; security
    baselines; configuration drift; backup and recovery systems; host based
    firewalls; system hardening benchmarks; authentication services; single sign on;
    directory services; kernel security""",
    6: """identity management; social engineering; phishing awareness; security awareness
    training; usable security; human factors; personal privacy; online tracking;
    behavioral biometrics; password habits; insider behavior; human error; cognitive
    biases; security culture; user authentication experience; consent interfaces;
    privacy by design for users; digital identity; identity theft; pretexting;
    spear phishing; vishing; deception detection; trust and persuasion; security
    fatigue; human centered design; accessibility and security; user education;
    psychology of attackers; victim support; online harassment; cyberbullying;
    personal data rights; surveillance and individuals; privacy preferences;
    warning design; security nudges; mental models of security; human
    reliability; awareness campaigns""",
    7: """risk management; risk assessment; governance frameworks; security policy
    development; compliance management; audit and assurance; business continuity
    planning; disaster recovery planning; incident response planning; security
    program management; personnel security; security operations center; cybersecurity
    strategy; security metrics; budget planning; vendor risk management; third party
    assurance; security awareness programs; organizational roles; information security
    management systems; iso 27001; nist cybersecurity framework; control frameworks;
    asset management; change management; project management; security governance
    boards; executive reporting; contingency planning; crisis management; insurance
    for cyber risk; procurement policy; workforce planning; training programs;
    security architecture governance; enterprise risk; policy enforcement; problem
    based learning in teams; requirements analysis; design specifications;
    professional tools; solution assessment; operations management; service level
    agreements""",
    8: """cybercrime; cyber law; computer misuse legislation; intellectual property;
    privacy law; data protection regulation; gdpr obligations; cyber ethics;
    professional ethics codes; cyber policy; national security policy; international
    cyber norms; cyber warfare; critical infrastructure policy; digital rights;
    censorship; surveillance law; law enforcement cooperation; jurisdiction issues;
    electronic evidence admissibility; cyber diplomacy; public policy making;
    societal impact of technology; misinformation; election security; digital
    divide; ethics of hacking; responsible disclosure; export controls; cyber
    insurance regulation; liability for breaches; consumer protection; online fraud;
    identity fraud law; hacktivism; terrorism online; cyber espionage; ransomware
    economics; legal compliance obligations; court procedures for cybercrime""",
}


# Single-word descriptors appended as "covering a, b" to widen vocabulary.
KEYWORDS = {
    0: """curriculum syllabus lecture seminar tutorial pedagogy mathematics calculus algebra
    geometry probability statistics combinatorics recursion iteration abstraction
    compilers interpreters paradigms semantics syntax grammar automata turing
    computability heuristics optimization modeling simulation visualization
    documentation rhetoric negotiation leadership mentoring internship portfolio
    reflection inquiry epistemology taxonomy glossary terminology overview survey
    retrospective roadmap milestones deliverables workshop colloquium bootcamp
    certification examination assessment rubric grading coursework homework""",
    1: """ciphertext plaintext nonce salt pepper entropy keystream padding oracle rsa aes des
    chacha poly1305 sha3 blake2 hmac pbkdf2 argon2 scrypt bcrypt ecdsa ed25519 x25519
    diffie hellman pairing lattices isogenies merkle commitments obfuscation
    watermarking provenance lineage checksums parity redundancy deduplication
    snapshots archives journaling ledgers blockchain consensus pseudonymization
    redaction masking escrow revocation rotation wrapping enclaves vaults""",
    2: """refactoring linting sanitizers valgrind asan ubsan fuzzer afl libfuzzer symbolic
    concolic taint slicing decompilation disassembly debugger breakpoints
    heap stack pointers allocators garbage serialization deserialization parsers
    templating frameworks middleware microservices plugins extensions packages
    registries manifests lockfiles versioning semver branching merging commits
    continuous integration pipelines artifacts containers bytecode jit webassembly
    javascript typescript java rust golang kotlin swift csharp php ruby""",
    3: """silicon transistor wafer foundry lithography asic soc dram sram flash eeprom
    bootloader microcode chipset oscilloscope probe glitching laser decapsulation
    schematics netlist gerber solder connectors antenna rfid nfc zigbee lora
    actuators sensors accelerometer gyroscope thermal voltage clock crystal
    battery enclosure tamper epoxy fuses otp efuse arm riscv x86 coprocessor
    accelerator gpu tpu npu fpga cpld""",
    4: """packets frames datagrams sockets ports handshakes tunnels vlan mpls ospf rip
    eigrp icmp udp quic http2 http3 smtp imap dnssec dkim spf dmarc ntp snmp ssh
    telnet radius tacacs kerberos ldap wpa3 eap 802 ethernet fiber coax switches
    routers gateways bridges repeaters hubs proxies sniffers wireshark netflow
    zeek snort suricata nmap throughput latency jitter bandwidth congestion""",
    5: """kernels hypervisors orchestration kubernetes docker ansible puppet terraform
    provisioning inventory baselines benchmarks cis stig hardening telemetry
    syslog auditd splunk elastic dashboards alerts correlation triage uptime
    redundancy failover clustering replication sharding scalability elasticity
    mainframes scada plc historians servers workstations laptops endpoints
    privileges sudo capabilities selinux apparmor namespaces cgroups seccomp""",
    6: """users citizens employees customers patients students children elderly families
    emotions motivation attitudes habits perception attention memory fatigue stress
    empathy persuasion manipulation deception trust reputation consent autonomy
    dignity wellbeing harassment stalking doxxing grooming impersonation
    catfishing scams lures baiting tailgating shoulder surfing dumpster diving""",
    7: """governance oversight accountability stakeholders executives boards charters
    mandates budgets funding procurement contracts suppliers vendors outsourcing
    audits assessments maturity kpis scorecards roadmaps portfolios programs
    policies standards procedures guidelines exceptions waivers escalation
    staffing recruitment retention succession onboarding offboarding appraisal
    continuity resumption tabletop exercises drills lessons playbooks runbooks""",
    8: """legislation statutes treaties conventions courts judges prosecution defense
    jurisprudence precedent sanctions penalties fines liability tort negligence
    copyright patents trademarks licensing piracy counterfeiting smuggling
    extradition sovereignty geopolitics diplomacy alliances deterrence escalation
    propaganda disinformation polarization democracy elections voting journalism
    whistleblowing activism ethics morality justice equity inclusion""",
}

# Label-neutral application sectors.
SECTORS = """healthcare banking insurance aviation automotive maritime railways energy utilities
water telecommunications retail ecommerce logistics shipping manufacturing pharmaceuticals
agriculture mining construction hospitality tourism education universities government
municipalities defense military police emergency firefighting media broadcasting gaming
entertainment sports nonprofits charities startups fintech biotech aerospace space
satellites chemicals petroleum nuclear hydropower wind solar grids smartcities housing
transportation airports ports warehouses supermarkets pharmacies hospitals clinics
laboratories museums libraries archives newsrooms publishing advertising marketing
consulting legalservices accounting payroll recruitment""".split()

PREFIXES = ["", "", "", "principles of ", "introduction to ", "advanced ", "applied ",
            "foundations of ", "methods for ", "practical ", "techniques in ",
            "case studies in ", "tools for ", "fundamentals of ", "concepts of "]
SUFFIXES = ["", "", "", "", " in practice", " for enterprises", " for embedded devices",
            " in cloud environments", " for critical infrastructure", " and mitigation",
            " at scale", " in small organizations", " for mobile platforms",
            " in industrial settings", " using open source tooling", " and evaluation"]

# Area frequency in the corpus (roughly the skew of real CSEC2017 topic lists).
AREA_WEIGHTS = [0.10, 0.14, 0.13, 0.08, 0.13, 0.13, 0.08, 0.13, 0.08]


def bank(area):
    return [" ".join(t.split()) for t in BANKS[area].split(";") if t.strip()]


def make_text(rng, areas, noise):
    parts = []
    for a in areas:
        parts.append(rng.choice(bank(a)))
    if rng.random() < noise:
        other = rng.choice([a for a in range(9) if a not in areas])
        parts.append(rng.choice(bank(other)))
    if rng.random() < noise * 0.6:
        # Drop the informative phrase of one labeled area entirely.
        parts = parts[1:] if len(parts) > 1 else parts
    rng.shuffle(parts)
    text = rng.choice(PREFIXES) + " and ".join(parts) + rng.choice(SUFFIXES)
    if rng.random() < 0.85:
        src = areas[0] if rng.random() > noise else rng.randrange(9)
        words = KEYWORDS[src].split()
        text += " covering " + ", ".join(rng.sample(words, rng.randint(1, 2)))
    if rng.random() < 0.3:
        text += " in the " + rng.choice(SECTORS) + " sector"
    return text


def build_corpus(rng, n=2700, noise=0.12):
    rows = []
    seen = set()
    while len(rows) < n:
        primary = rng.choices(range(9), weights=AREA_WEIGHTS)[0]
        areas = [primary]
        if rng.random() < 0.22:
            areas.append(rng.choice([a for a in range(9) if a != primary]))
        text = make_text(rng, areas, noise)
        if text in seen:
            continue
        seen.add(text)
        rows.append({"text": text, "labels": sorted(set(areas))})
    return rows


# ---------------------------------------------------------------------------
# 50 knowledge statements and their four annotator columns.

KD_STEMS = [
    (1, "cryptographic key management concepts"), (1, "data backup and recovery integrity"),
    (1, "digital evidence preservation techniques"), (1, "encryption methodologies for data at rest"),
    (1, "hashing and digital signature mechanisms"), (2, "secure coding principles"),
    (2, "software vulnerability testing techniques"), (2, "application security testing tools"),
    (2, "web application attack patterns"), (2, "code review practices for security"),
    (3, "embedded device firmware security"), (3, "hardware supply chain verification"),
    (3, "trusted platform module usage"), (4, "network traffic analysis methods"),
    (4, "firewall and intrusion detection configuration"), (4, "wireless network protection methods"),
    (4, "virtual private network technologies"), (4, "network protocol vulnerabilities"),
    (4, "denial of service mitigation approaches"), (5, "system hardening procedures"),
    (5, "access control models"), (5, "penetration testing tools and techniques"),
    (5, "vulnerability scanning processes"), (5, "cloud infrastructure security controls"),
    (5, "endpoint monitoring and logging"), (6, "social engineering tactics"),
    (6, "security awareness training approaches"), (6, "identity management practices"),
    (6, "phishing indicators"), (7, "risk management frameworks"),
    (7, "incident response planning processes"), (7, "security policy development"),
    (7, "business continuity planning"), (7, "cybersecurity program governance"),
    (7, "supply chain risk management processes"), (7, "security audit procedures"),
    (7, "workforce development planning"), (7, "continuity of operations requirements"),
    (7, "enterprise security architecture governance"), (8, "cyber laws and regulations"),
    (8, "privacy legislation requirements"), (8, "ethics in cybersecurity"),
    (8, "cybercrime investigation legal procedures"), (8, "international cyber policy"),
    (0, "cyberattack stages"), (0, "operating system concepts"), (0, "intelligence analysis methods"),
    (0, "computer networking fundamentals"), (0, "instructional design principles"),
    (0, "programming language structures"),
]

# Target pairwise overlap counts out of 50 (X1, X2, X3, CurricuLLM).
TARGET_OVERLAP = {("X1", "X2"): 26, ("X1", "X3"): 27, ("X2", "X3"): 28,
                  ("X1", "CurricuLLM"): 28, ("X2", "CurricuLLM"): 30, ("X3", "CurricuLLM"): 27}
# Reference kappas for the same pairs; used only as a soft tie-breaker.
TARGET_KAPPA = {("X1", "X2"): 0.36, ("X1", "X3"): 0.34, ("X2", "X3"): 0.34,
                ("X1", "CurricuLLM"): 0.39, ("X2", "CurricuLLM"): 0.39, ("X3", "CurricuLLM"): 0.27}
ANNOTATORS = ["X1", "X2", "X3", "CurricuLLM"]

# Plausible secondary areas for each primary.
NEIGHBORS = {0: [7, 4, 5], 1: [5, 8, 2], 2: [5, 3, 1], 3: [5, 2, 4], 4: [5, 0, 1],
             5: [4, 7, 2], 6: [8, 7, 0], 7: [8, 0, 5], 8: [7, 6, 0]}


def kappa(a, b):
    total, used = 0.0, 0
    n = len(a)
    for j in range(9):
        x = [j in s for s in a]
        y = [j in s for s in b]
        po = sum(p == q for p, q in zip(x, y)) / n
        pa, pb = sum(x) / n, sum(y) / n
        pe = pa * pb + (1 - pa) * (1 - pb)
        if pe >= 1.0:
            continue
        total += (po - pe) / (1 - pe)
        used += 1
    return total / used if used else 1.0


def score(cols):
    over = 0
    kap = 0.0
    for (p, q), target in TARGET_OVERLAP.items():
        got = sum(1 for s, t in zip(cols[p], cols[q]) if set(s) & set(t))
        over += abs(got - target)
        kap += abs(kappa(cols[p], cols[q]) - TARGET_KAPPA[(p, q)])
    return over, kap


def candidate_sets(primary):
    n = NEIGHBORS[primary]
    return [[primary], [primary], [primary, n[0]], [n[0]], [n[1]], [n[2]],
            sorted({primary, n[1]}), [primary, n[2]]]


def build_kd_annotations(rng):
    kds = []
    for i, (area, stem) in enumerate(KD_STEMS):
        kds.append({"id": f"KD{i + 1:03d}", "text": f"Knowledge of {stem}", "primary": area})
    cols = {a: [sorted(set(rng.choice(candidate_sets(k["primary"])))) for k in kds]
            for a in ANNOTATORS}
    best = score(cols)
    for step in range(200000):
        a = rng.choice(ANNOTATORS)
        i = rng.randrange(len(kds))
        old = cols[a][i]
        cols[a][i] = sorted(set(rng.choice(candidate_sets(kds[i]["primary"]))))
        s = score(cols)
        if (s[0], s[1]) <= (best[0], best[1]) or rng.random() < 0.002:
            best = s
        else:
            cols[a][i] = old
        if best[0] == 0 and best[1] < 0.06:
            break
    assert score(cols)[0] == 0, score(cols)
    return kds, cols


def cell(labels):
    return ",".join(str(x) for x in labels)


def main():
    rng = random.Random(SEED)
    corpus = build_corpus(rng)
    kds, cols = build_kd_annotations(rng)
    with open(DATA / "finetune_corpus.jsonl", "w", encoding="utf-8") as f:
        for row in corpus:
            f.write(json.dumps(row, separators=(",", ":")) + "\n")
    with open(DATA / "kds_sample.jsonl", "w", encoding="utf-8") as f:
        for kd, labels in zip(kds, cols["CurricuLLM"]):
            f.write(json.dumps({"id": kd["id"], "text": kd["text"], "labels": labels},
                               separators=(",", ":")) + "\n")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["course_id", "topic"] + ANNOTATORS)
    for i, kd in enumerate(kds):
        w.writerow([kd["id"], kd["text"]] + [cell(cols[a][i]) for a in ANNOTATORS])
    (DATA / "annotations_kds.csv").write_text(buf.getvalue(), encoding="utf-8")
    vocab = {t for r in corpus for t in __import__("re").split(r"[^a-z0-9]+", r["text"].lower())
             if len(t) >= 2}
    over, kap = score(cols)
    print(f"corpus rows={len(corpus)} vocab={len(vocab)} kd overlap err={over} kappa err={kap:.3f}")


if __name__ == "__main__":
    main()
