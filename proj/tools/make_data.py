#!/usr/bin/env python3
# Copyright 2026 The hypwarp Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the sample inputs in data/."""

import json
import math
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def box_normals(eps, n=3):
    out = []
    for axis in range(1, n + 1):
        for sign in (1.0, -1.0):
            u = [math.sinh(eps)] + [0.0] * n
            u[axis] = sign * math.cosh(eps)
            out.append(u)
    return out


def boost(u, s):
    a, b = u[0], u[1]
    return [math.cosh(s) * a + math.sinh(s) * b, math.sinh(s) * a + math.cosh(s) * b] + u[2:]


def same_plane(u, v):
    scale = max(1.0, sum(x * x for x in u))
    tol = 1e-9 * scale
    return max(abs(x - y) for x, y in zip(u, v)) <= tol or max(abs(x + y) for x, y in zip(u, v)) <= tol


def write(name, obj):
    (DATA / name).write_text(json.dumps(obj, indent=1) + "\n")


def main():
    DATA.mkdir(exist_ok=True)

    # Box model cubes of half-width 0.3 centered every 0.3 along the e_1 axis.
    eps = 0.3
    normals = []
    for k in range(-2, 37):
        for u in box_normals(eps):
            v = boost(u, k * eps)
            if not any(same_plane(v, w) for w in normals):
                normals.append(v)
    write("chain_arrangement.json", {"n": 3, "normals": normals})

    write("box_cube.json", {"n": 3, "faces": box_normals(0.1)})

    golden = (1.0 + math.sqrt(5.0)) / 2.0
    s = math.acosh(golden)
    write("right_pentagon.json", {"sides": [s] * 5, "angles": [math.pi / 2] * 5})

    basis = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]
    samples = []
    for i in range(3):
        samples.append({"base": [1.0, 0.0, 0.0, 0.0], "frame": [basis[j] for j in range(3) if j != i]})
    write("origin_planes.json", {"n": 3, "samples": samples})


if __name__ == "__main__":
    main()
