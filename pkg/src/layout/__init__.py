"""Layout manager: placement geometry, global algorithms and the concrete scene."""

from .geometry import (
    Point3,
    facing_rotation,
    object_anchor,
    polygon_moments,
    region_to_point,
    relation_endpoints,
    rotation_facing,
    solve_above,
    solve_inside,
    solve_near,
    surfaces_centroid,
)
from .isosurface import Mesh, compute_isosurface, extract_isosurface
from .streamlines import integrate_streamlines, trace_streamline
from .scene import (
    ConcreteScene,
    ConeShape,
    LineShape,
    LocationRef,
    Material,
    MeshShape,
    PanelShape,
    PolylineShape,
    Provenance,
    SampleRef,
    SceneNode,
    SphereShape,
    dump_scene,
    load_scene,
    read_scene,
    write_scene,
)
from .registry import LayoutContext, Placement, SolverRegistry, get_solver_registry, reset_solver_registry
from .manager import layout_scene

__all__ = [
    "Point3",
    "facing_rotation",
    "object_anchor",
    "polygon_moments",
    "region_to_point",
    "relation_endpoints",
    "rotation_facing",
    "solve_above",
    "solve_inside",
    "solve_near",
    "surfaces_centroid",
    "Mesh",
    "compute_isosurface",
    "extract_isosurface",
    "integrate_streamlines",
    "trace_streamline",
    "ConcreteScene",
    "ConeShape",
    "LineShape",
    "LocationRef",
    "Material",
    "MeshShape",
    "PanelShape",
    "PolylineShape",
    "Provenance",
    "SampleRef",
    "SceneNode",
    "SphereShape",
    "dump_scene",
    "load_scene",
    "read_scene",
    "write_scene",
    "LayoutContext",
    "Placement",
    "SolverRegistry",
    "get_solver_registry",
    "reset_solver_registry",
    "layout_scene",
]
