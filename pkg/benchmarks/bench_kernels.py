"""Time the compiled kernels against the interpreted fallback.

Each backend runs in a fresh interpreter (the backend is fixed at import
time by PATAVOID_PURE). Compilation is excluded: every workload is run once
to warm up, then timed over ``--repeat`` runs.

    python benchmarks/bench_kernels.py [--repeat 3] [--json out.json]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "enumerate AAB.BBAA": "from patavoid.search import enumerate_avoiders\n"
                          "enumerate_avoiders('AAB.BBAA', 2, 30)",
    "enumerate AAB.ABBA": "from patavoid.search import enumerate_avoiders\n"
                          "enumerate_avoiders('AAB.ABBA', 2, 40)",
    "find_square b3 prefix": "from patavoid.morphic import fixed_point_prefix\n"
                             "from patavoid.words import find_square\n"
                             "find_square(fixed_point_prefix('b3', 3000))",
    "occurrence in g_y image": "from patavoid.morphic import fixed_point_prefix\n"
                               "from patavoid.occurrence import avoids\n"
                               "avoids(fixed_point_prefix('g_y(b3)', 400), 'AA.ABA.ABBA')",
    "squares window m_abaab": "from patavoid.certify import _square_checks\n"
                              "from patavoid.morphic import load_morphism\n"
                              "_square_checks(load_morphism('m_abaab'), 3)",
}

CHILD = r"""
import json, sys, time
code, repeat = sys.argv[1], int(sys.argv[2])
exec(code)
best = float("inf")
for _ in range(repeat):
    t0 = time.perf_counter()
    exec(code)
    best = min(best, time.perf_counter() - t0)
print(json.dumps(best))
"""


def run(code: str, pure: bool, repeat: int) -> float:
    env = dict(os.environ, PATAVOID_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", CHILD, code, str(repeat)], env=env,
                         check=True, capture_output=True, text=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--only", help="substring filter on workload names")
    p.add_argument("--json", help="write results to this file")
    args = p.parse_args(argv)
    rows = []
    print(f"{'workload':28s} {'numba s':>10s} {'pure s':>10s} {'speedup':>9s}")
    for name, code in WORKLOADS.items():
        if args.only and args.only not in name:
            continue
        fast = run(code, False, args.repeat)
        slow = run(code, True, args.repeat)
        rows.append({"workload": name, "numba": fast, "pure": slow, "speedup": slow / fast})
        print(f"{name:28s} {fast:10.4f} {slow:10.4f} {slow / fast:9.1f}x", flush=True)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
