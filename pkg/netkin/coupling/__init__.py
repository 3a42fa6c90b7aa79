from netkin.coupling.conditions import (
    AlphaTransmission,
    CattaneoCouplingVariant,
    CattaneoVariant,
    ConditionBlock,
    DensityContinuity,
    KineticDerived,
    NodeConditions,
    cattaneo_conditions,
    cattaneo_inflow_conditions,
    epsilon_limit_check,
    equivalent_transmission_alpha,
    half_moment_conditions,
    half_moment_inflow_conditions,
)
from netkin.coupling.matrices import CouplingMatrix, coupling_axioms, cyclic_coupling_matrix, kinetic_coupling_matrix
from netkin.coupling.solvers import (
    PRECONDITION_EPSILON,
    kinetic_inflow_state,
    solve_characteristic_node,
    solve_node_cattaneo,
    solve_node_chemo,
    solve_node_halfmoment,
    solve_node_keller_segel,
    solve_node_kinetic,
)


__all__ = [
    "PRECONDITION_EPSILON",
    "AlphaTransmission",
    "CattaneoCouplingVariant",
    "CattaneoVariant",
    "ConditionBlock",
    "CouplingMatrix",
    "DensityContinuity",
    "KineticDerived",
    "NodeConditions",
    "cattaneo_conditions",
    "cattaneo_inflow_conditions",
    "coupling_axioms",
    "cyclic_coupling_matrix",
    "epsilon_limit_check",
    "equivalent_transmission_alpha",
    "half_moment_conditions",
    "half_moment_inflow_conditions",
    "kinetic_coupling_matrix",
    "kinetic_inflow_state",
    "solve_characteristic_node",
    "solve_node_cattaneo",
    "solve_node_chemo",
    "solve_node_halfmoment",
    "solve_node_keller_segel",
    "solve_node_kinetic",
]
