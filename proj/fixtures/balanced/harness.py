#!/usr/bin/env python3
"""Fixture harness: `test` runs the suite, `build` syntax-checks every
source, `coverage OUT` runs the suite under a line tracer and writes LCOV."""

import glob
import importlib.util
import os
import sys
import traceback

sys.dont_write_bytecode = True

ROOT = os.path.dirname(os.path.abspath(__file__))
SRC = os.path.join(ROOT, "src")
sys.path.insert(0, SRC)


def sources(pattern):
    return sorted(glob.glob(os.path.join(ROOT, pattern)))


def load(path):
    name = os.path.splitext(os.path.basename(path))[0]
    spec = importlib.util.spec_from_file_location(name, path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def run_suite():
    failures = 0
    ran = 0
    for path in sources("tests/test_*.py"):
        module = load(path)
        tests = [
            f for n, f in vars(module).items()
            if n.startswith("test") and callable(f)
        ]
        tests.sort(key=lambda f: f.__code__.co_firstlineno)
        for test in tests:
            ran += 1
            try:
                test()
            except Exception:
                failures += 1
                print("FAIL %s.%s" % (module.__name__, test.__name__))
                traceback.print_exc(limit=1)
    print("%d test(s), %d failure(s)" % (ran, failures))
    return failures


def build():
    for path in sources("src/*.py") + sources("tests/*.py"):
        with open(path) as f:
            text = f.read()
        try:
            compile(text, path, "exec")
        except SyntaxError as e:
            print("syntax error: %s" % e)
            return 1
    return 0


def code_lines(code, out):
    for _, _, line in code.co_lines():
        if line is not None and line > 0:
            out.add(line)
    for const in code.co_consts:
        if hasattr(const, "co_lines"):
            code_lines(const, out)


def coverage(out_path):
    targets = {os.path.realpath(p): p for p in sources("src/*.py")}
    hits = {p: {} for p in targets}

    def tracer(frame, event, arg):
        path = os.path.realpath(frame.f_code.co_filename)
        if path not in targets:
            return None
        if event == "line":
            counts = hits[path]
            counts[frame.f_lineno] = counts.get(frame.f_lineno, 0) + 1
        return tracer

    sys.settrace(tracer)
    try:
        failures = run_suite()
    finally:
        sys.settrace(None)

    records = []
    for real in sorted(targets, key=lambda p: targets[p]):
        with open(real) as f:
            code = compile(f.read(), real, "exec")
        lines = set()
        code_lines(code, lines)
        rel = os.path.relpath(targets[real], ROOT).replace(os.sep, "/")
        records.append("SF:%s" % rel)
        covered = 0
        for line in sorted(lines):
            n = hits[real].get(line, 0)
            covered += n > 0
            records.append("DA:%d,%d" % (line, n))
        records.append("LF:%d" % len(lines))
        records.append("LH:%d" % covered)
        records.append("end_of_record")
    with open(os.path.join(ROOT, out_path), "w") as f:
        f.write("TN:\n" + "\n".join(records) + "\n")
    return failures


def main(argv):
    if len(argv) >= 2 and argv[1] == "test":
        return 1 if run_suite() else 0
    if len(argv) >= 2 and argv[1] == "build":
        return build()
    if len(argv) == 3 and argv[1] == "coverage":
        return 1 if coverage(argv[2]) else 0
    print("usage: harness.py test | build | coverage OUT", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main(sys.argv))
