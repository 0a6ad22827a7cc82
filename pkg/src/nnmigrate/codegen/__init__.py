"""Target-dialect code generation: planning and emission."""

from .emit import EmitTarget, emit
from .plan import GenPlan, PlanRecord, build_plan, plan_permutes

__all__ = ["EmitTarget", "GenPlan", "PlanRecord", "build_plan",
           "plan_permutes", "emit"]
