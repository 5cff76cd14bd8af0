#!/usr/bin/env python3
"""Regenerates the scenario files in scenarios/ (sampled signals included)."""
import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "scenarios")


def sine_samples(mean, amp, n):
    return [mean + amp * math.sin(2 * math.pi * i / n) for i in range(n)]


def one_minus_sin(n):
    return [1.0 - math.sin(2 * math.pi * i / n) for i in range(n)]


def write(name, doc):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print("wrote", path)


def constant_scenario(name, D, t_end):
    return {
        "name": name,
        "model": {
            "uptake": {"kind": "monod", "m": 1.0, "a": 0.3},
            "s0": {"kind": "constant", "value": 1.0},
            "D": {"kind": "constant", "value": D},
            "tau": 1.0,
        },
        "history": {"s": {"constant": 1.0}, "x": {"constant": 0.1}},
        "run": {"t_end": t_end, "h": 0.01},
        "criterion": {"check": "auto"},
    }


def periodic_scenario(name, mean_D, t_end):
    return {
        "name": name,
        "model": {
            "uptake": {"kind": "monod", "m": 1.0, "a": 0.3},
            "s0": {"kind": "constant", "value": 1.0},
            "D": {"kind": "periodic", "omega": 5.0,
                  "samples": sine_samples(mean_D, 0.1, 64)},
            "tau": 1.0,
        },
        "history": {"s": {"constant": 1.0}, "x": {"constant": 0.1}},
        "run": {"t_end": t_end, "h": 0.01},
        "criterion": {"check": "auto"},
    }


def main():
    os.makedirs(OUT, exist_ok=True)
    write("constant_persistent.json", constant_scenario("constant-persistent", 0.2, 160.0))
    write("constant_washout.json", constant_scenario("constant-washout", 0.7, 100.0))
    write("periodic_persistent.json", periodic_scenario("periodic-persistent", 0.25, 150.0))
    write("periodic_washout.json", periodic_scenario("periodic-washout", 0.65, 150.0))

    tau = math.pi / 2
    write("counterexample.json", {
        "name": "counterexample",
        "model": {
            "uptake": {"kind": "table", "s": [0.0, 1.0], "p": [0.0, math.pi]},
            "s0": {"kind": "constant", "value": 1.0},
            "D": {"kind": "periodic", "omega": 2 * math.pi,
                  "samples": one_minus_sin(256)},
            "tau": tau,
        },
        "history": {"s": {"constant": 1.0}, "x": {"constant": 0.1}},
        "run": {"t_end": 150.0, "h": tau / 314},
        "criterion": {"check": "auto"},
    })

    doc = constant_scenario("tau-zero", 0.5, 100.0)
    doc["model"]["tau"] = 0.0
    write("tau_zero.json", doc)


if __name__ == "__main__":
    main()
