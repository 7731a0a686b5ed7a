"""Resource limits shared by all modules.

Caps bound input sizes (exponential algorithms); budgets bound the amount of
work or output. ``POSETPACK_BUDGET`` overrides every budget at once.
"""

from __future__ import annotations

import dataclasses
import os

ENV_BUDGET = "POSETPACK_BUDGET"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    poset_cap: int = 16
    enum_cap: int = 25
    ground_cap: int = 16
    chain_family_cap: int = 30
    oracle_ground_cap: int = 20
    search_budget: int = 1_000_000
    materialize_budget: int = 1_000_000
    catalog_budget: int = 100_000
    workers: int = 1
    output: str = "json"
    seed: int = 0

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if field.name in ("output", "seed"):
                continue
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"{field.name} must be a positive integer, got {value!r}")
        if self.output not in ("json", "tsv"):
            raise ValueError(f"output must be json or tsv, got {self.output!r}")

    def with_budget(self, budget: int) -> "RunConfig":
        return dataclasses.replace(
            self,
            search_budget=budget,
            materialize_budget=budget,
            catalog_budget=budget,
        )

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        cfg = cls(**overrides)
        raw = os.environ.get(ENV_BUDGET)
        if raw:
            cfg = cfg.with_budget(int(raw))
        return cfg


DEFAULT = RunConfig()
