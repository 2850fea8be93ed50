"""End-to-end contract checks for the qtur CLI.

Usage: python3 cli_checks.py /path/to/qtur
Covers determinism, exit codes, report shapes, config-file precedence, and
the violation/repro-sidecar path.
"""

import json
import os
import pathlib
import subprocess
import sys
import tempfile

BIN = None


def run(args, threads="2", expect=0):
    env = dict(os.environ)
    env["QTUR_THREADS"] = threads
    proc = subprocess.run([BIN] + args, capture_output=True, text=True,
                          env=env, timeout=300)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(
            f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n"
            f"stdout:\n{proc.stdout}\nstderr:\n{proc.stderr}")
    return proc


def read(path):
    return pathlib.Path(path).read_bytes()


def csv_data_rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return lines[0], lines[1:]  # header, data


def check(cond, what):
    if not cond:
        raise AssertionError(what)


def main():
    global BIN
    BIN = sys.argv[1]
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="qtur_cli_"))

    # Determinism: same invocation, same bytes; thread count must not matter.
    base = ["verify", "--dims", "2,3", "--n", "40", "--seed", "42"]
    a, b = tmp / "a.csv", tmp / "b.csv"
    run(base + ["--out", str(a)])
    run(base + ["--out", str(b)])
    check(read(a) == read(b), "verify CSV is not reproducible")
    c = tmp / "c.csv"
    run(base + ["--out", str(c)], threads="7")
    check(read(a) == read(c), "verify CSV depends on the thread count")
    ja, jb = tmp / "a.json", tmp / "b.json"
    run(base + ["--format", "json", "--out", str(ja)])
    run(base + ["--format", "json", "--out", str(jb)], threads="5")
    check(read(ja) == read(jb), "verify JSON is not reproducible")

    # CSV shape and config echo.
    text = read(a).decode()
    check(text.startswith("# qtur-report v1\n"), "missing report preamble")
    check("# command=verify\n" in text, "missing command echo")
    check("# seed=42\n" in text, "missing seed echo")
    check("# lambda_grid=" in text, "missing lambda grid echo")
    header, data = csv_data_rows(text)
    check(header.startswith("instance,dim,rank_rho,seed,relative_entropy"),
          f"unexpected verify header: {header}")
    check(len(data) == 40, f"expected 40 verify rows, got {len(data)}")
    check("# summary violations=0" in text, "expected a clean summary")
    check(all(row.split(",")[14] == "ok" for row in data),
          "verify rows not all ok")

    # JSON mirror.
    doc = json.loads(read(ja))
    check(doc["version"] == "qtur-report v1", "bad json version")
    check(doc["config"]["seed"] == "42", "bad json config echo")
    check(len(doc["rows"]) == 40, "bad json row count")
    check(doc["violations"] == [], "unexpected json violations")

    # Exit code 1 on config errors, parse errors, unknown flags.
    run(["verify", "--n", "0"], expect=1)
    run(["verify", "--n", "10", "--dims", "1"], expect=1)
    run(["verify", "--no-such-flag"], expect=1)
    run(["verify", "--n", "5", "--format", "yaml"], expect=1)
    run(["verify", "--n", "5", "--lambda-grid", "0.5,1.5"], expect=1)
    run(["flux", "--betas", "0.2"], expect=1)
    run(["flux", "--protocol", "reset"], expect=1)
    run([], expect=1)  # a subcommand is required

    # Exit code 2 plus a parseable repro sidecar on violations.
    v = tmp / "viol.csv"
    run(["verify", "--dims", "2", "--n", "6", "--seed", "42",
         "--tol-entropy-slack=-1e9", "--out", str(v)], expect=2)
    sidecar = pathlib.Path(str(v) + ".repro.json")
    check(sidecar.exists(), "missing repro sidecar")
    blobs = json.loads(sidecar.read_text())
    check(isinstance(blobs, list) and blobs, "empty repro sidecar")
    check("rho" in blobs[0] and "failure" in blobs[0],
          "sidecar blob lacks instance payload")
    check("# violations 6" in read(v).decode(), "violation note missing")

    # Config file supplies defaults; explicit flags win.
    cfg = tmp / "campaign.ini"
    cfg.write_text("[verify]\nn=30\nseed=7\ndims=2\n")
    out1 = tmp / "cfg1.csv"
    run(["--config", str(cfg), "verify", "--out", str(out1)])
    _, rows1 = csv_data_rows(read(out1).decode())
    check(len(rows1) == 30, f"config file n ignored ({len(rows1)} rows)")
    check("# seed=7\n" in read(out1).decode(), "config file seed ignored")
    out2 = tmp / "cfg2.csv"
    run(["--config", str(cfg), "verify", "--n", "12", "--out", str(out2)])
    _, rows2 = csv_data_rows(read(out2).decode())
    check(len(rows2) == 12, "command line does not override the config file")

    # Flux sweep: seven columns, exact zero bound at angle zero.
    f = tmp / "flux.csv"
    run(["flux", "--out", str(f)])
    ftext = read(f).decode()
    header, rows = csv_data_rows(ftext)
    check(header == "angle,sigma,phi,var_t,var_0,bound,slack",
          f"unexpected flux header: {header}")
    check(len(rows) == 16, f"expected 16 flux rows, got {len(rows)}")
    first = rows[0].split(",")
    check(first[0] == "0" and first[5] == "0",
          f"angle-0 row should carry an exactly-zero bound: {rows[0]}")
    check("# summary sign_flip_exact=true" in ftext, "sign flip not exact")
    run(["flux", "--protocol", "both-reset", "--out", str(tmp / "fb.csv")])

    # Remaining subcommands smoke-run clean.
    proc = run(["cr-limit", "--n", "2", "--seed", "42"])
    check(proc.stdout.startswith("# qtur-report v1"), "cr-limit stdout report")
    check(",ok" in proc.stdout, "cr-limit rows missing")
    run(["reduce", "--n", "25", "--seed", "42"])
    run(["bound-table", "--n", "15", "--seed", "42"])

    print("cli-checks: all passed")


if __name__ == "__main__":
    main()
