#!/usr/bin/env python

# FogFlow, a cloud-fog workflow scheduling laboratory
# Copyright (C) 2026, FogFlow contributors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

import logging
import time

from fogflow import ExperimentConfig, describe, run_experiment
from fogflow.high_level import build_problem

current_time = time.strftime("%y%m%d_%H%M", time.localtime())

################################################################

######################## Inputs ########################

# Workflow source: give either a Pegasus DAX file ...
# workflow = "./test_data/dax/diamond.dax"
workflow = None
# ... or a layered synthetic workflow.
# layers = task count per layer; length_range in MI; edge_size_range in Mb
# density = probability of an edge between tasks of adjacent layers
layered = {
    "layers": [4, 8, 8, 6, 4],
    "length_range": [1000, 10000],
    "edge_size_range": [0, 20],
    "density": 0.5,
    "layered_seed": 7,
}

# Resource pool: (end devices, fog nodes, cloud servers) with default rates,
# or a CSV table of resources (see test_data/pool_table.csv).
pool = "1,5,5"
pool_table = None

# Optimizers to compare and their shared budget
algorithms = "pso,ga,de,gapso"
population = 50
iterations = 100

# Objective weights for makespan, cost and energy
weights = "0.3,0.3,0.3"

# Independent runs per algorithm; run r uses seed + r for every algorithm
repeats = 10
seed = 0

# Parallel worker processes (1 runs everything in this process)
jobs = 1

# Results directory
out = f"./results_{current_time}"

##############################################
# Collect parameters into a configuration mapping

inputs = {
    "algorithms": algorithms,
    "pop": population,
    "iters": iterations,
    "weights": weights,
    "repeats": repeats,
    "seed": seed,
    "jobs": jobs,
    "out": out,
}
if workflow is not None:
    inputs["workflow"] = workflow
else:
    inputs.update(layered)
if pool_table is not None:
    inputs["pool_table"] = pool_table
else:
    inputs["pool"] = pool

config = ExperimentConfig.from_mapping(inputs)

################### Execute  ##########################

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    print(describe(build_problem(config).workflow))
    report = run_experiment(config)

    ####################### Outputs #######################

    for row in report.summary():
        print(
            f"{row['algorithm']:>6}: fitness {row['fitness_mean']:.4f} +/- {row['fitness_std']:.4f}, "
            f"makespan {row['makespan_s_mean']:.2f} s, cost ${row['cost_usd_mean']:.2f}, "
            f"energy {row['energy_j_mean']:.0f} J"
        )
    print(f"results written to {config.output_dir}")
