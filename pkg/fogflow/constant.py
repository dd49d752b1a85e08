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

################## Constants #####################

# Unit Conversion
reference_mips = 1000.0   # DAX runtimes are calibrated to this machine [MI/s]
byte_To_bit = 8.0
Mb_To_bit = 1.0e6

# Default testbed parameters per layer.
# Power ratings are read as watts.
end_device = {
    "mips": 1000.0,           # [MI/s]
    "exec_cost_rate": 0.0,    # [$/s]
    "comm_cost_rate": 0.0,    # [$/Mb]
    "working_power": 700.0,   # [W]
    "idle_power": 30.0,       # [W]
    "uplink": 20.0,           # [Mbps]
    "downlink": 40.0,         # [Mbps]
}
fog_node = {
    "mips": 1300.0,
    "exec_cost_rate": 0.48,
    "comm_cost_rate": 0.01,
    "working_power": 800.0,
    "idle_power": 40.0,
    "uplink": 10.0,
    "downlink": 10.0,
}
cloud_server = {
    "mips": 1600.0,
    "exec_cost_rate": 0.96,
    "comm_cost_rate": 0.02,
    "working_power": 1600.0,
    "idle_power": 1300.0,
    "uplink": 1.0,
    "downlink": 10.0,
}

# Experiment protocol
population = 50
iterations = 100
repeats = 10
weight = 0.3
pool_counts = (1, 5, 5)    # (end devices, fog nodes, cloud servers)
brute_force_cap = 10**6

# Search operators
omega = 1.0
c1 = 2.0
c2 = 2.0
crossover_rate = 0.8
mutation_rate = 0.1
tournament_size = 2
elite_count = 1
de_cr = 0.4
de_f = 1.2

# Output
float_format = ".6g"   # 6 significant digits in every CSV

##################################################
