"""Input files and a subprocess runner shared by the CLI tests."""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
from pathlib import Path

from semiq.evaluation import random_matrix_tuple
from semiq.tableaux import CorrelatedTableau, Expression

SIMPLE_23 = CorrelatedTableau(2, 3, [[[1], [2], []], [[3], [], [4]], [[], [5], [6]]])
BLOCK_22 = CorrelatedTableau(2, 2, [[[1, 2], []], [[], [3, 4]]])


def write_inputs(root: Path) -> dict[str, Path]:
    files = {
        "monomial": {"n": 2, "d": 3, "rows": [[1, 3], [2, 5], [4, 6]]},
        "unsorted": {"n": 2, "d": 2, "rows": [[4, 1], [3, 2]]},
        "tableau": SIMPLE_23.to_json(),
        "block": BLOCK_22.to_json(),
        "expr": (Expression.of(BLOCK_22, 2) + Expression.of(
            CorrelatedTableau(2, 2, [[[1], [2]], [[3], [4]]]), -1)).to_json(),
        "mats22": random_matrix_tuple(2, 2, random.Random(0)).to_json(),
        "mdisc": {"matrices": [[["1", "0"], ["0", "1"]], [["1", "0"], ["0", "1"]]]},
        "diagram": {"counts": [[2, 1, 0], [0, 2, 1], [1, 0, 2]]},
    }
    paths = {}
    for name, obj in files.items():
        p = root / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = p
    return paths


def run_cli(*args: str, env: dict | None = None) -> subprocess.CompletedProcess:
    full_env = dict(os.environ)
    full_env.pop("SEMIQ_GUARD_MAX_TABLEAUX", None)
    full_env.update(env or {})
    return subprocess.run([sys.executable, "-m", "semiq", *map(str, args)], capture_output=True,
                          text=True, env=full_env, timeout=600)


def command_matrix(paths: dict[str, Path], out_dir: Path) -> list[list[str]]:
    """One invocation per subcommand; each writes its own file under out_dir when it supports --out."""
    p = {k: str(v) for k, v in paths.items()}
    o = str(out_dir)
    return [
        ["straighten", p["monomial"], "--out", f"{o}/straighten.json"],
        ["straighten", p["monomial"], "--pi", "1", "1", "--out", f"{o}/pi.json"],
        ["straighten", p["expr"], "--out", f"{o}/straighten_expr.json"],
        ["canon", p["expr"], "--out", f"{o}/canon.json"],
        ["eval", p["expr"], p["mats22"], "--out", f"{o}/eval.txt"],
        ["mdisc", p["mdisc"], "--out", f"{o}/mdisc.txt"],
        ["mdisc", p["mats22"], "--tableau", p["block"], "--out", f"{o}/mdisc_tab.txt"],
        ["rsk", p["diagram"], "--out", f"{o}/rsk.json"],
        ["dims", "-n", "2", "-d", "3", "--exact", "--out", f"{o}/dims.csv"],
        ["dims", "-n", "9", "-d", "2", "--format", "json", "--out", f"{o}/dims.json"],
        ["span-check", "-n", "2", "-d", "2", "--out", f"{o}/span22.json"],
        ["span-check", "-n", "2", "-d", "3", "--out", f"{o}/span23.json"],
        ["--guard-max-tableaux", "100", "span-check", "-n", "2", "-d", "3", "--out", f"{o}/span23s.json"],
        ["strong-span-check", "-n", "2", "-d", "3", "--out", f"{o}/strong23.json"],
        ["rewrite", "--tableau", p["tableau"], "--out", f"{o}/cert.json"],
        ["verify-cert", f"{o}/cert.json"],
        ["audit", "-n", "2", "-d", "2", "--out", f"{o}/audit.json"],
        ["sweep", "--n-max", "9", "--out", f"{o}/sweep.csv"],
    ]
