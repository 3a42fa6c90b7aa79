from netkin.models.chemo import chemo_stable_dt, chemo_step, flux_limited_gradient
from netkin.models.half_moment import half_moments, hm_relax, hm_transport
from netkin.models.keller_segel import keller_segel_stable_dt, keller_segel_step
from netkin.models.kinetic import distribution_halves, even_odd, kinetic_relax, kinetic_transport, moments_kinetic
from netkin.models.operators import central_gradient, transport_matrix, transport_system
from netkin.models.p1 import p1_relax, p1_transport
from netkin.models.params import ModelKind, ModelParams, VelocityGrid
from netkin.models.states import (
    STATE_TYPES,
    ChemoEdgeState,
    EdgeState,
    HalfMomentEdgeState,
    KineticEdgeState,
    KSEdgeState,
    P1EdgeState,
    init_from_density,
)


__all__ = [
    "STATE_TYPES",
    "ChemoEdgeState",
    "EdgeState",
    "HalfMomentEdgeState",
    "KSEdgeState",
    "KineticEdgeState",
    "ModelKind",
    "ModelParams",
    "P1EdgeState",
    "VelocityGrid",
    "central_gradient",
    "chemo_stable_dt",
    "chemo_step",
    "distribution_halves",
    "even_odd",
    "flux_limited_gradient",
    "half_moments",
    "hm_relax",
    "hm_transport",
    "init_from_density",
    "keller_segel_stable_dt",
    "keller_segel_step",
    "kinetic_relax",
    "kinetic_transport",
    "moments_kinetic",
    "p1_relax",
    "p1_transport",
    "transport_matrix",
    "transport_system",
]
