"""Smoke test for the hyperfit Python extension.

Build it first, e.g. `maturin develop -m crates/python/Cargo.toml`, or
copy the cdylib from target/ next to this script as hyperfit.so.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import hyperfit  # noqa: E402


def main():
    assert hyperfit.distance_to_star(7, 20, 5) == 4
    assert hyperfit.star_to_drating(3, 20, 5) == "10"

    data, planted = hyperfit.synthetic(10, 60, seed=3)
    assert len(data) == 60 and data.dim == 10

    fit = hyperfit.fit(data, "algo1", solver="exact")
    assert fit.objective == "0", fit
    assert fit.status == "optimal"
    assert hyperfit.predict(fit.model, data) == data.levels

    round_trip = hyperfit.Dataset.from_json(data.to_json())
    assert round_trip.item_ids == data.item_ids

    model = hyperfit.UserModel.from_code("algo2", "+-0")
    assert model.coords == [1, -1, 0]

    plan = json.loads(hyperfit.make_folds_json(data, k=10))
    assert len(plan["assignments"]) == 60

    report = json.loads(hyperfit.cross_validate_json(data, "algo2", k=5, solver="local", iterations=2000))
    assert len(report["folds"]) == 5

    r = hyperfit.compare_methods([1, 2, 3, 4, 5], [11, 12, 13, 14, 15])
    assert r["significant"] and not r["welch_used"]

    assert "Subject To" in hyperfit.export_milp(data)

    try:
        hyperfit.fit(data, "algo3")
    except ValueError as e:
        assert "E_DOMAIN" in str(e)
    else:
        raise AssertionError("bad variant accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
