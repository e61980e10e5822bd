from typing import Optional


class SimulationError(Exception):
    """Base class for every error raised by the simulator."""


class ConfigError(SimulationError):
    """A run configuration value is missing, malformed or out of range."""

    def __init__(self, key: str, constraint: str):
        self.key = key
        self.constraint = constraint
        super().__init__(f"{key}: {constraint}")


class PropagationError(SimulationError):
    """Propagation produced a non-finite field state."""

    def __init__(self, message: str, cell_index: Optional[int] = None, z: Optional[float] = None):
        self.cell_index = cell_index
        self.z = z
        where = ""
        if cell_index is not None:
            where = f" (cell {cell_index}, z={z:.6g} um)"
        super().__init__(f"{message}{where}")


class LineExtractionError(SimulationError):
    """No EIT transmission peak could be located in a spectrum."""
