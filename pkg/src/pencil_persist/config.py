"""Numerical tolerances and their environment overrides."""

import dataclasses
import os

from .errors import ValidationError

ENV_PREFIX = "PENCIL_PERSIST_TOL_"


@dataclasses.dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds used by every numerical decision in the package.

    All values are relative (scaled by a matrix norm at the point of use)
    and must lie strictly inside (0, 1).
    """

    tol_rank: float = 1e-10
    tol_eig: float = 1e-10
    tol_herm: float = 1e-12
    tol_zero_poly: float = 1e-8
    tol_real: float = 1e-8
    tol_cluster: float = 1e-8

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (0.0 < float(value) < 1.0):
                raise ValidationError(f"{field.name}={value!r} must lie in (0, 1)")

    @classmethod
    def from_env(cls, environ=None, **overrides):
        """Defaults, then ``PENCIL_PERSIST_TOL_<FIELD>`` variables, then
        explicit keyword overrides (``None`` values are ignored)."""
        environ = os.environ if environ is None else environ
        values = {}
        for field in dataclasses.fields(cls):
            key = ENV_PREFIX + field.name[len("tol_"):].upper()
            if key in environ:
                try:
                    values[field.name] = float(environ[key])
                except ValueError as exc:
                    raise ValidationError(f"{key}={environ[key]!r} is not a number") from exc
        values.update({k: float(v) for k, v in overrides.items() if v is not None})
        return cls(**values)

    def as_dict(self):
        return dataclasses.asdict(self)


DEFAULT = ToleranceConfig()
