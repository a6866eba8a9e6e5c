"""Common container for oracle outputs."""

from dataclasses import dataclass


@dataclass(frozen=True)
class OracleResult:
    """High-precision reference value.

    ``value`` is a decimal string so golden files stay exact; ``digits``
    is the claimed number of correct significant digits.
    """

    value: str
    digits: int
    method: str

    def as_float(self) -> float:
        return float(self.value)
