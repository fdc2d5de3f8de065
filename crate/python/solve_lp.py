"""Solves LP-format programs with HiGHS and prints one JSON record per file."""

import json
import sys

import highspy


def solve(path):
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("mip_abs_gap", 0.0)
    h.readModel(path)
    h.run()
    lp = h.getLp()
    sol = h.getSolution()
    return {
        "file": path,
        "status": h.modelStatusToString(h.getModelStatus()),
        "objective": h.getInfo().objective_function_value,
        "values": dict(zip(lp.col_names_, sol.col_value)),
    }


def main(paths):
    json.dump([solve(p) for p in paths], sys.stdout)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main(sys.argv[1:])
