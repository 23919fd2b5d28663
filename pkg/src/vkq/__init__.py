"""Quantum invariants of framed virtual links and 3-manifolds from thickened surfaces."""

from .laurent import LaurentFraction, LaurentPoly, RootContext, eval_at_root, make_context
from .diagram import (
    DiagramError,
    LinkingMatrix,
    MoveError,
    VirtualDiagram,
    apply_move,
    cable,
    disjoint_union,
    linking_matrix,
    linking_number,
    normalize_framing,
    parse_diagram,
    render_diagram,
    writhe,
)
from .bracket import bracket_at, count_loops
from .recoupling import (
    colored_bracket,
    jw_projector,
    tet,
    theta,
    twist_coefficient,
    twisted_theta,
    virtual_hopf_omega,
)
from .wrt import InvariantResult, omega_bracket, signature, z_invariant
from .surface import (
    PresentationReport,
    SurfaceError,
    TorusDiagram,
    augment_at_virtual_crossings,
    blow_down,
    blow_up,
    condition_s_check,
    handle_slide,
    o3_augment,
    parse_torus_diagram,
    render_torus_diagram,
    ring_hooked_presentation,
)
from .network import CapExceeded
from .kernel import KERNEL_NAME

__version__ = "0.1.0"

import types as _types

__all__ = sorted(
    name for name, obj in globals().items()
    if not name.startswith("_") and not isinstance(obj, _types.ModuleType)
)
