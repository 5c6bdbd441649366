"""End-to-end checks of the command-line tool: exit codes, schema validity, determinism."""

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

BIN = sys.argv[1]
SCHEMA = json.loads(Path(sys.argv[2]).read_text())
validator = jsonschema.Draft202012Validator(SCHEMA)
failures = []


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True)


def expect(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def document(*args, code=0):
    r = run(*args)
    expect(r.returncode == code, f"{' '.join(args)} exits {code} (got {r.returncode})")
    try:
        doc = json.loads(r.stdout)
    except json.JSONDecodeError:
        expect(False, f"{' '.join(args)} emits JSON")
        return None
    errors = sorted(validator.iter_errors(doc), key=str)
    expect(not errors, f"{' '.join(args)} validates against the schema" + (f": {errors[0].message}" if errors else ""))
    return doc


def rerun_identical(*args):
    a, b = run(*args), run(*args)
    expect(a.stdout == b.stdout and a.returncode == b.returncode, f"{' '.join(args)} is bit-identical on rerun")


# catalogue
r = run("catalogue")
expect(r.returncode == 0 and all(n in r.stdout for n in
       ["plane", "stereographic_sphere", "clifford_torus", "holomorphic_graph"]), "catalogue lists the built-ins")
cat = document("catalogue", "--format", "json")
expect(cat is not None and len(cat["surfaces"]) == 4, "catalogue json has 4 surfaces")
expect(run("frobnicate").returncode == 2, "unknown subcommand exits 2")
expect(run().returncode == 2, "missing subcommand exits 2")

# analyze
d = document("analyze", "--surface", "clifford_torus", "--grid", "65")
if d:
    c = d["center"]["directions"]
    got = [c[0]["H"], c[1]["H"], c[0]["K"], c[1]["K"]]
    expect(all(abs(a - b) <= 1e-10 for a, b in zip(got, [-1, 0, 1, -1])), f"clifford centre (H, K) = {got}")

d = document("analyze", "--graph", "phi=(x^2-y^2)/2", "--graph", "psi=x*y", "--grid", "65")
if d:
    e = d["estimates"]
    expect(abs(e["dirichlet_energy"] - 3 * math.pi) <= 0.01 * 3 * math.pi, f"holomorphic D = {e['dirichlet_energy']}")
    expect(len(e["theta_emp"]) == 2, "theta_emp per direction")
    expect(abs(e["omega"] - math.pi / 4) <= 1e-6, f"holomorphic omega = {e['omega']}")

d = document("analyze", "--surface", "plane")
if d:
    expect(all(x == 0 for p in d["points"] for dd in p["directions"] for x in dd.values()), "plane curvatures are zero")

r = run("analyze", "--surface", "plane", "--format", "csv", "--grid", "9")
header = r.stdout.splitlines()[0].split(",")
expect(header == ["u", "v", "x1", "x2", "x3", "x4", "W", "conf_defect", "H1", "K1", "kap11", "kap12", "H2", "K2",
                  "kap21", "kap22", "res_gauss", "res_weingarten", "res_mcs"], "analyze csv header")
expect(all(len(line.split(",")) == 19 for line in r.stdout.splitlines()), "analyze csv rows have 19 columns")

expect(run("analyze", "--surface", "plane", "--grid", "8").returncode == 2, "even grid exits 2")
expect(run("analyze", "--surface", "torus").returncode == 2, "unknown surface exits 2")
expect(run("analyze", "--surface", "stereographic_sphere", "--frame", "projection", "--radius", "3").returncode == 3,
       "projection frame below threshold exits 3")
expect(run("analyze", "--surface", "plane", "--radius", "1e-7").returncode == 4, "degenerate metric exits 4")

# verify
expect(run("verify", "--surface", "stereographic_sphere", "--R", "2", "--tol", "1e-8").returncode == 0,
       "verify sphere R=2 passes")
expect(run("verify", "--surface", "clifford_torus", "--frame-derivative-step", "1e-4", "--tol", "1e-6").returncode == 0,
       "verify clifford with FD frame derivatives passes")
expect(run("verify", "--surface", "plane", "--tol", "1e-14").returncode == 0, "verify plane at 1e-14 passes")
expect(run("verify", "--surface", "clifford_torus", "--frame-derivative-step", "1e-2", "--tol", "1e-8").returncode == 5,
       "verify with a coarse frame-derivative step exits 5")
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "verify.json"
    r = run("verify", "--surface", "holomorphic_graph", "--output", str(out))
    doc = json.loads(out.read_text())
    expect(not list(validator.iter_errors(doc)) and doc["passed"], "verify json validates and passes")

# solve
d = document("solve", "--hbar", "zero", "--boundary", "holomorphic_graph", "--grid-h", "1/64")
if d:
    expect(d["report"]["converged"] and d["report"]["outer_iterations"] == 1, "minimal solve converges in 1 iteration")
d = document("solve", "--hbar", "const:0,0,0.05,0", "--boundary", "holomorphic_graph")
if d:
    expect(d["report"]["converged"] and d["report"]["residual"] <= 5 * d["request"]["tol"], "small-data solve converges")
expect(run("solve", "--grid-h", "0.3").returncode == 2, "solve with spacing 0.3 exits 2")
document("solve", "--hbar", "const:0,0,0.05,0", "--max-outer", "2", code=6)
expect(run("solve", "--hbar", "const:0,0,0.05,0", "--tnorm", "0.99").returncode == 3, "solve frame failure exits 3")
with tempfile.TemporaryDirectory() as tmp:
    knots = Path(tmp) / "knots.csv"
    knots.write_text("# theta,x1,x2,x3,x4\n" + "".join(
        f"{t!r},{math.cos(t)!r},{math.sin(t)!r},{math.cos(2 * t) / 2!r},{math.sin(2 * t) / 2!r}\n"
        for t in (2 * math.pi * k / 48 for k in range(48))))
    stem = Path(tmp) / "run"
    r = run("solve", "--boundary", f"knots:{knots}", "--output", str(stem))
    expect(r.returncode == 0, "solve from knot file converges")
    rows = (stem.with_suffix(".csv")).read_text().splitlines()
    expect(rows[0] == "u,v,x1,x2,x3,x4" and len(rows) > 1, "solve writes the field csv")
    doc = json.loads(stem.with_suffix(".json").read_text())
    expect(not list(validator.iter_errors(doc)), "solve json file validates")

# determinism
rerun_identical("analyze", "--graph", "phi=sin(x)*y", "--graph", "psi=x*y", "--grid", "33")
rerun_identical("verify", "--surface", "clifford_torus", "--format", "csv", "--grid", "17")
rerun_identical("solve", "--hbar", "const:0,0,0.05,0")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
