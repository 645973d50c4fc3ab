#!/usr/bin/env python3
"""Import the built extension module and exercise each entry point.

Run after `cargo build -p stratum-py`:

    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent

PI_0 = """\
warm_blooded :- mammal.
live_on_land :- mammal, not ab1.
female :- mammal, not male.
male :- mammal, not female.
mammal :- dolphin.
ab1 :- dolphin.
mammal :- lion.
lion.
"""

PI_5 = """\
warm_blooded(X) :- mammal(X).
live_on_land(X) :- mammal(X), not ab1(X).
female(X) :- mammal(X), not male(X).
male(X) :- mammal(X), not female(X).
mammal(X) :- dolphin(X).
ab1(X) :- dolphin(X).
mammal(X) :- lion(X).
dolphin(flipper).
live_on_land(X) :- bird(X).
fly(X) :- bird(X), not ab2(X).
bird(X) :- penguin(X).
ab2(X) :- penguin(X).
bird(bigbird).
"""


def find_built_library() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("libstratum.so", "libstratum.dylib", "stratum.dll")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit("no built extension found; run `cargo build -p stratum-py` first")


def main() -> None:
    library = find_built_library()
    with tempfile.TemporaryDirectory() as scratch:
        # CPython insists on the bare module name for the file.
        shutil.copy(library, Path(scratch) / "stratum.so")
        sys.path.insert(0, scratch)
        import stratum

        models = stratum.solve(PI_0)
        assert len(models) == 2, models
        assert ["female", "lion", "live_on_land", "mammal", "warm_blooded"] in models
        assert ["lion", "live_on_land", "male", "mammal", "warm_blooded"] in models

        assert stratum.solve("a :- not a.") == []
        assert stratum.solve_one(PI_0) in models
        assert stratum.solve_one("a :- not a.") is None

        restricted = stratum.solve(PI_0, nogoods=[["female"]])
        assert len(restricted) == 1 and "male" in restricted[0]

        report = stratum.classify(PI_0)
        assert report["omega"] == 2 and not report["stratified"]
        assert len(report["nodes"]) == 7

        assert stratum.is_stable(PI_0, models[0])
        assert not stratum.is_stable(PI_0, ["lion"])

        answer = stratum.query(PI_0, "mammal", "cautious")
        assert answer["yes"] and answer["early_stop"]
        assert answer["visited"] == 3 and answer["total_nodes"] == 7
        assert not stratum.query(PI_0, "female", "cautious")["yes"]
        assert stratum.query(PI_0, "female", "brave")["yes"]

        fo_models = stratum.solve(PI_5)
        assert len(fo_models) == 2
        assert all("fly(bigbird)" in m for m in fo_models)
        assert all("live_on_land(flipper)" not in m for m in fo_models)
        flips = {("female(flipper)" in m, "male(flipper)" in m) for m in fo_models}
        assert flips == {(True, False), (False, True)}

        ground_text = stratum.ground(PI_5)
        assert "mammal(flipper) :- dolphin(flipper)." in ground_text
        assert stratum.ground(PI_0) == PI_0

        solver = stratum.Solver(PI_0)
        assert solver.models() == models
        update = solver.update("bird :- penguin.\nfly :- bird, not ab2.\npenguin.\nab2 :- penguin.\n")
        assert all("penguin" in m and "fly" not in m for m in update["models"])
        assert update["cached"] >= 2, update

        try:
            stratum.solve("p(X) :- not q(X).")
        except ValueError as error:
            assert "unsafe" in str(error)
        else:
            sys.exit("unsafe first-order input must raise ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
