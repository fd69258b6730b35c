from .config import ConfigError, ScenarioConfig, config_from_dict, load_config
from .reports import compare_controllers, sweep_singularity, validate_inertia
from .simulate import (COL, COLUMNS, RunResult, SimulationError, read_csv, run_scenario,
                       write_csv)
