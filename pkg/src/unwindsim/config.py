"""Run configuration shared by the simulator, controller, and CLI."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import UnwindSimError
from .jsonio import check_format

RUNCONFIG_FORMAT = "runconfig/1"


@dataclass(frozen=True)
class RunConfig:
    """Control timing, window sampling counts, critic weights, and run
    bookkeeping. 20 Hz control with a 1.5 s rollout horizon by default."""

    dt: float = 0.05
    horizon: float = 1.5
    n_v: int = 5
    n_w: int = 9
    w_path: float = 0.3
    w_prog: float = 1.0
    w_clear: float = 0.5
    w_head: float = 0.5
    head_lookahead: float = 0.6
    w_goal: float = 1.0
    goal_zone: float = 2.0
    clearance_cap: float = 1.0
    goal_tolerance: float = 0.15
    timeout: float = 300.0
    seed: int = 0
    mode: str = "UR"

    def __post_init__(self):
        if self.dt <= 0:
            raise UnwindSimError("dt must be positive")
        if self.timeout <= 0:
            raise UnwindSimError("timeout must be positive")
        if self.mode not in ("UR", "CR"):
            raise UnwindSimError(f"mode must be UR or CR, got {self.mode!r}")
        if self.n_v < 1 or self.n_w < 1:
            raise UnwindSimError("sampling counts must be >= 1")

    def with_mode(self, mode: str) -> "RunConfig":
        return replace(self, mode=mode)

    def to_doc(self) -> dict:
        return {
            "format": RUNCONFIG_FORMAT,
            "dt": self.dt,
            "horizon": self.horizon,
            "n_v": self.n_v,
            "n_w": self.n_w,
            "w_path": self.w_path,
            "w_prog": self.w_prog,
            "w_clear": self.w_clear,
            "w_head": self.w_head,
            "head_lookahead": self.head_lookahead,
            "w_goal": self.w_goal,
            "goal_zone": self.goal_zone,
            "clearance_cap": self.clearance_cap,
            "goal_tolerance": self.goal_tolerance,
            "timeout": self.timeout,
            "seed": self.seed,
            "mode": self.mode,
        }

    @staticmethod
    def from_doc(doc: dict) -> "RunConfig":
        check_format(doc, RUNCONFIG_FORMAT)
        fields = {k: v for k, v in doc.items() if k != "format"}
        return RunConfig(**fields)
