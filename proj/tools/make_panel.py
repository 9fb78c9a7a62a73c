#!/usr/bin/env python3
"""Writes fixtures/panel.csv: a 6-month x 7-day generation panel whose snapped
forecast errors have the pair counts

    from +20: 5 -> +20, 5 -> 0, 1 -> -20
    from   0: 4 -> +20, 7 -> 0, 5 -> -20
    from -20: 2 -> +20, 4 -> 0, 3 -> -20

Each day's mean over months equals the base forecast below, so the errors are
exactly the chosen levels plus small integer offsets.
"""
import random
import sys
from pathlib import Path

BASE = [50, 110, 90, 130, 80, 70, 100]
LEVELS = [20, 0, -20]
COUNTS = [[5, 5, 1], [4, 7, 5], [2, 4, 3]]
MONTHS, DAYS = 6, 7
RAW_FACTOR = 10  # stored values are ten times the energy units


def euler_circuit(rng):
    edges = {a: [b for b in range(3) for _ in range(COUNTS[a][b])] for a in range(3)}
    for out in edges.values():
        rng.shuffle(out)
    stack, circuit = [rng.randrange(3)], []
    while stack:
        v = stack[-1]
        if edges[v]:
            stack.append(edges[v].pop())
        else:
            circuit.append(stack.pop())
    return circuit[::-1]


def offsets(total):
    """Six integers in [-9, 9] summing to -total."""
    need = -total
    base, extra = divmod(need, MONTHS)
    out = [base] * MONTHS
    for k in range(extra):
        out[k] += 1
    assert all(abs(x) <= 9 for x in out) and sum(out) == need
    return out


def build(seed):
    rng = random.Random(seed)
    while True:
        circuit = euler_circuit(rng)
        if len(circuit) != 37:
            continue
        months = [circuit[6 * m: 6 * m + 7] for m in range(MONTHS)]
        sums = [sum(LEVELS[months[m][d]] for m in range(MONTHS)) for d in range(DAYS)]
        if all(abs(s) <= 54 for s in sums):
            return months, sums


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures" / "panel.csv"
    months, sums = build(seed=7)
    eps = [offsets(s) for s in sums]
    lines = ["month,day,value"]
    for m in range(MONTHS):
        for d in range(DAYS):
            value = BASE[d] + LEVELS[months[m][d]] + eps[d][m]
            lines.append(f"{m + 1},{d + 1},{value * RAW_FACTOR}")
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
