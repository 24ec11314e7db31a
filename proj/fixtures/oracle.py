#!/usr/bin/env python3
"""Independent reference for fixture expectations.

Given a fixture directory and its mutant list, evaluates every mutant on its
own, one after another, in a fresh copy of the fixture, and writes the
expected outcome table and per-file gap records. Shares no code with the
C++ pipeline: LCOV parsing, patching, timeouts and scoring are redone here.

usage: oracle.py FIXTURE_DIR MUTANTS_JSONL OUT_DIR
"""

import json
import os
import shutil
import signal
import subprocess
import sys
import tempfile
import time
from fractions import Fraction

TIMEOUT_FLOOR_MS = 2000
TIMEOUT_FACTOR = 10


def read_conf(path):
    conf = {}
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            conf[key.strip()] = value.strip()
    return conf


def read_lcov(path):
    hits = {}
    current = None
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if line.startswith("SF:"):
                current = hits.setdefault(line[3:], {})
            elif line.startswith("DA:"):
                fields = line[3:].split(",")
                n = int(fields[0])
                current[n] = current.get(n, 0) + int(fields[1])
            elif line == "end_of_record":
                current = None
    return hits


def run(command, cwd, timeout_s=None):
    """Returns (exit_code, timed_out, seconds)."""
    start = time.monotonic()
    proc = subprocess.Popen(command, shell=True, cwd=cwd,
                            stdout=subprocess.DEVNULL,
                            stderr=subprocess.DEVNULL,
                            start_new_session=True)
    try:
        code = proc.wait(timeout=timeout_s)
        return code, False, time.monotonic() - start
    except subprocess.TimeoutExpired:
        os.killpg(proc.pid, signal.SIGKILL)
        proc.wait()
        return None, True, time.monotonic() - start


def evaluate(tree, mutant, conf, timeout_s):
    target = os.path.join(tree, mutant["path"])
    with open(target, newline="") as f:
        original_text = f.read()
    lines = original_text.split("\n")
    idx = mutant["line"] - 1
    line = lines[idx]
    ending = "\r" if line.endswith("\r") else ""
    if line[:len(line) - len(ending)] != mutant["original"]:
        return "INVALID", "stale"
    lines[idx] = mutant["mutated"] + ending
    try:
        with open(target, "w", newline="") as f:
            f.write("\n".join(lines))
        if conf.get("build_command"):
            code, timed_out, _ = run(conf["build_command"], tree, timeout_s)
            if timed_out or code != 0:
                return "INVALID", "build failed"
        code, timed_out, _ = run(conf["test_command"], tree, timeout_s)
        if timed_out:
            return "TIMEOUT", "timeout"
        return ("SURVIVED", "exit 0") if code == 0 else ("KILLED", "exit %d" % code)
    finally:
        with open(target, "w", newline="") as f:
            f.write(original_text)


def as_float(x):
    return None if x is None else float(x)


def gap_record(path, file_hits, mutants, verdicts):
    instrumented = sorted(file_hits) if file_hits else []
    covered = {n for n, h in (file_hits or {}).items() if h > 0}
    rec = {"path": path}
    total = valid = killed = on_cov = killed_cov = survived = timeouts = invalid = 0
    for m in mutants:
        v = verdicts[m["id"]]
        total += 1
        if v == "INVALID":
            invalid += 1
            continue
        valid += 1
        detected = v in ("KILLED", "TIMEOUT")
        survived += v == "SURVIVED"
        timeouts += v == "TIMEOUT"
        killed += detected
        if m["line"] in covered:
            on_cov += 1
            killed_cov += detected
    cov = Fraction(len(covered), len(instrumented)) if instrumented else None
    score = Fraction(killed, valid) if valid else None
    cscore = Fraction(killed_cov, on_cov) if on_cov else None
    raw = (cov - score) * 100 if cov is not None and score is not None else None
    cgap = (cov - cscore) * 100 if cov is not None and cscore is not None else None
    rec.update({
        "coverage": as_float(cov),
        "mutants_total": total,
        "mutants_valid": valid,
        "mutants_on_covered_lines": on_cov,
        "killed": killed,
        "killed_on_covered_lines": killed_cov,
        "mutation_score": as_float(score),
        "covered_mutation_score": as_float(cscore),
        "raw_gap": as_float(raw),
        "covered_gap": as_float(cgap),
        "coverage_available": bool(instrumented),
        "instrumented_lines": len(instrumented),
        "covered_line_count": len(covered),
        "survived": survived,
        "timeouts": timeouts,
        "invalid": invalid,
    })
    return rec


def main(argv):
    if len(argv) != 4:
        print(__doc__, file=sys.stderr)
        return 2
    fixture, mutants_path, out_dir = argv[1:]
    conf = read_conf(os.path.join(fixture, "oracle-gap.conf"))
    with open(mutants_path) as f:
        mutants = [json.loads(l) for l in f if l.strip()]
    hits = read_lcov(os.path.join(fixture, conf["coverage_report"]))

    work = tempfile.mkdtemp(prefix="oracle-")
    tree = os.path.join(work, "tree")
    try:
        shutil.copytree(fixture, tree, ignore=shutil.ignore_patterns(
            "expected", "oracle-gap-out", "__pycache__"))
        if conf.get("build_command"):
            code, _, _ = run(conf["build_command"], tree)
            if code != 0:
                raise SystemExit("baseline build failed")
        code, _, seconds = run(conf["test_command"], tree)
        if code != 0:
            raise SystemExit("baseline tests failed")
        timeout_ms = max(TIMEOUT_FLOOR_MS, int(TIMEOUT_FACTOR * seconds * 1000))
        verdicts = {}
        outcomes = []
        for m in mutants:
            verdict, detail = evaluate(tree, m, conf, timeout_ms / 1000.0)
            verdicts[m["id"]] = verdict
            outcomes.append({"mutant_id": m["id"], "verdict": verdict,
                             "duration_ms": 0, "detail": detail})
            print("%-40s %s" % (m["id"], verdict), file=sys.stderr)
    finally:
        shutil.rmtree(work, ignore_errors=True)

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "outcomes.jsonl"), "w") as f:
        f.write(json.dumps({"record": "header", "source": "oracle.py",
                            "timeout_ms": timeout_ms}) + "\n")
        for o in outcomes:
            f.write(json.dumps(o) + "\n")

    paths = sorted(set(p for p, h in hits.items() if h) | {m["path"] for m in mutants})
    files = [gap_record(p, hits.get(p), [m for m in mutants if m["path"] == p], verdicts)
             for p in paths]
    with open(os.path.join(out_dir, "gap.json"), "w") as f:
        json.dump({"files": files}, f, indent=2)
        f.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
