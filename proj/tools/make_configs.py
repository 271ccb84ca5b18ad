#!/usr/bin/env python3
# Copyright 2026 The rfso Authors
#
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

"""Writes the figure-style sweep configurations into configs/."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "configs"

OUTAGE = ["op_exact", "op_asymp", "op_quad", "op_mc"]
RATE = ["asr_exact", "asr_asymp", "asr_quad", "asr_mc"]


def config(*, users=2, count=1, r=1, turbulence="moderate", pointing="weak",
           start=0, stop=30, points=13, metrics, trials=1000000, seed=1):
    return {
        "rf": {"m": 2, "users": users, "avg_snr_db": 10},
        "fso": {"turbulence": turbulence, "pointing": pointing, "r": r, "mu_r_db": 10},
        "interference": {"count": count, "m1": 1, "omega_i1_db": 0},
        "sweep": {"variable": "both_locked", "start_db": start, "stop_db": stop,
                  "points": points, "gamma_th_db": 0, "metrics": metrics},
        "mc": {"trials": trials, "seed": seed},
        "numerics": {"quad_tolerance": 1e-10, "delta": 1.0},
    }


def main():
    files = {}
    # Outage vs SNR: detection type, interferer count and pointing strength.
    for pointing in ("weak", "strong"):
        for r in (1, 2):
            for n in (1, 3):
                files[f"fig1_{pointing}_r{r}_n{n}.json"] = config(
                    r=r, count=n, pointing=pointing, metrics=OUTAGE, trials=2000000)
    # Sum rate vs SNR: number of RF users and detection type.
    for r in (1, 2):
        for k in (1, 2, 4):
            files[f"fig2_r{r}_k{k}.json"] = config(
                users=k, r=r, stop=40, points=9, metrics=RATE)
    # Sum rate vs SNR on the second turbulence set: number of interferers.
    for n in (1, 2, 4):
        files[f"fig3_n{n}.json"] = config(
            count=n, turbulence="second", stop=40, points=9, metrics=RATE)
    for name, body in files.items():
        (OUT / name).write_text(json.dumps(body, indent=2) + "\n")
    print(f"wrote {len(files)} files to {OUT}")


if __name__ == "__main__":
    main()
