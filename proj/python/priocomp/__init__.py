"""Task-prioritized composition of maximum-entropy policies.

Thin Python surface over the C++ core: environment stepping, RBF
Q-functions with analytic action derivatives, the indifference weight,
compound Q evaluation, sampler networks and the MCMC oracle.
"""

from priocomp._core import (
    CompoundQ,
    EnvConfig,
    RbfQNet,
    SamplerNet,
    WeightParams,
    fermi_dirac,
    load_compound,
    load_qnet,
    load_sampler,
    make_env,
    mcmc_oracle,
    reward_goal,
    reward_obstacle,
    se_kernel,
    soft_value,
    step,
)

__all__ = [
    "CompoundQ",
    "EnvConfig",
    "RbfQNet",
    "SamplerNet",
    "WeightParams",
    "fermi_dirac",
    "load_compound",
    "load_qnet",
    "load_sampler",
    "make_env",
    "mcmc_oracle",
    "reward_goal",
    "reward_obstacle",
    "se_kernel",
    "soft_value",
    "step",
]
