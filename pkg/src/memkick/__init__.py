"""Discrete accelerators with power-law memory.

Exact discrete maps for economies hit by periodic kicks whose response
carries power-law memory, the memoryless classical maps they reduce to,
closed economic scenarios built on them, and numerical fractional-calculus
oracles to check them against.
"""

from .economy import Closure, DivergenceError, Scenario, classical_matthews_check, run_scenario, warranted_growth_rate
from .fastsum import SumStrategy, memory_sum, trajectory_sums
from .fractional_oracle import SampledFunction, caputo_derivative, inverse_property_check, rl_integral
from .memory_maps import (
    InitialState,
    MapParams,
    Trajectory,
    capital_map_cumulative,
    capital_map_incremental,
    classical_capital_step,
    classical_output_step,
    general_map_step,
    multiplier_limit,
    output_map_incremental,
)
from .special_fn import KernelTable, MemoryOrder, build_kernel_table, gamma, kernel_v, power_weight

__version__ = "0.1.0"
