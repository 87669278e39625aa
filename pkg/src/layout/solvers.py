"""
Built-in concrete solvers for the abstract visual vocabulary.
"""

from typing import List, Tuple

import numpy as np

from src.citymodel.geometry_index import CityObjectEntry, parse_poslist
from src.errors import InputError, LayoutError, UnsupportedRelationError
from src.layout.fields import collect_samples, parse_seeds, scalar_field, vector_field
from src.layout.geometry import (
    Point3,
    facing_rotation,
    object_anchor,
    region_to_point,
    relation_endpoints,
    solve_above,
    solve_inside,
    solve_near,
)
from src.layout.isosurface import compute_isosurface
from src.layout.provenance import location_kind, summarize_node
from src.layout.registry import LayoutContext, Placement, SolverRegistry
from src.layout.scene import (
    ConeShape,
    LineShape,
    Material,
    MeshShape,
    PanelShape,
    PolylineShape,
    SceneNode,
    SphereShape,
)
from src.layout.streamlines import integrate_streamlines
from src.rdf.serialization import render_term
from src.rdf.terms import (
    ARG1,
    ARG2,
    BLUE,
    COLOR,
    CONTENT,
    ENDPOINT,
    GREEN,
    HEIGHT,
    IRI,
    LEVELS,
    LOCATION,
    Literal,
    Node,
    POSLIST_VIZ,
    RADIUS,
    RED,
    SEEDS,
    Term,
    XCOORD,
    YCOORD,
    ZCOORD,
    compact,
)
from src.techniques.vocabulary import (
    ABOVE,
    CONE,
    FLOWLINES,
    FRONT_OF,
    INSIDE,
    ISOSURFACE,
    LINE,
    NEAR,
    PANEL,
    SPHERE,
)


# ============================================================================
# Shared helpers
# ============================================================================


def _number(ctx: LayoutContext, node: Term, predicate: IRI) -> float:
    term = ctx.graph.value(node, predicate)
    if not isinstance(term, Literal) or not term.is_number:
        raise LayoutError(f"missing numeric {compact(predicate)}")
    return float(term.value)


def city_object(ctx: LayoutContext, term: Term) -> CityObjectEntry:
    entry = ctx.index.resolve(term) if isinstance(term, IRI) else None
    if entry is None:
        raise LayoutError(f"city object {term} is not in the geometry index")
    return entry


def relation_target(ctx: LayoutContext, loc: Term) -> CityObjectEntry:
    """The relation argument that is a city object."""
    for predicate in (ARG1, ARG2):
        arg = ctx.graph.value(loc, predicate)
        if isinstance(arg, IRI) and ctx.index.resolve(arg) is not None:
            return ctx.index.resolve(arg)
    raise LayoutError(f"relation {loc} has no argument in the geometry index")


def location_point(ctx: LayoutContext, loc: Term) -> Point3:
    """Point for a point, region or city-object location."""
    kind = location_kind(ctx.graph, loc, ctx.vocabulary)
    if kind == "point":
        return Point3.of(_number(ctx, loc, c) for c in (XCOORD, YCOORD, ZCOORD))
    if kind == "region":
        text = ctx.graph.value(loc, POSLIST_VIZ)
        try:
            ring = parse_poslist(text.value)
        except (InputError, AttributeError) as e:
            raise LayoutError(f"bad region {loc}: {e}") from None
        return region_to_point(ring, ctx.params.region_point)
    if kind == "object":
        return solve_inside(city_object(ctx, loc))
    raise LayoutError(f"relation {loc} cannot be used as a sample or endpoint location")


def place(ctx: LayoutContext, node: Node, footprint: Tuple[float, float]) -> Placement:
    """Resolve the :location of a located object."""
    loc = ctx.graph.value(node, LOCATION)
    if loc is None:
        raise LayoutError("no :location")
    kind = location_kind(ctx.graph, loc, ctx.vocabulary)
    if kind == "relation":
        relation = next(t for t in ctx.graph.types(loc) if t in ctx.vocabulary.relations)
        return ctx.registry.place_relation(relation, relation_target(ctx, loc), footprint, ctx)
    if kind == "object":
        return Placement(location_point(ctx, loc), anchor="center")
    return Placement(location_point(ctx, loc))


def material(ctx: LayoutContext, node: Node) -> Material:
    """Color from the node's :color, else the technique default."""
    color = ctx.graph.value(node, COLOR)
    rgb = ctx.emit.color
    if color is not None:
        rgb = tuple(_number(ctx, color, channel) for channel in (RED, GREEN, BLUE))
    return Material(color=rgb, transparency=ctx.emit.transparency)


def _lifted(point: Point3, dz: float) -> Point3:
    return Point3(point.x, point.y, point.z + dz)


def _visual_node(ctx: LayoutContext, node: Node, type_iri: IRI, part: int = 0, parts: int = 1, **fields) -> SceneNode:
    return SceneNode(
        material=material(ctx, node),
        provenance=summarize_node(ctx.graph, node, type_iri, ctx.vocabulary, part, parts),
        **fields,
    )


# ============================================================================
# Relation solvers
# ============================================================================


def above_relation(target: CityObjectEntry, footprint, ctx: LayoutContext) -> Placement:
    return Placement(solve_above(target, ctx.params.above_clearance), anchor="base")


def near_relation(target: CityObjectEntry, footprint, ctx: LayoutContext) -> Placement:
    point, facing = solve_near(target, footprint, ctx.params.near_distance)
    return Placement(point, facing=facing, anchor="center")


def inside_relation(target: CityObjectEntry, footprint, ctx: LayoutContext) -> Placement:
    return Placement(solve_inside(target), anchor="center")


def front_of_relation(target: CityObjectEntry, footprint, ctx: LayoutContext) -> Placement:
    raise UnsupportedRelationError(
        f"frontOfRelation has no placement rule yet (target {target.name}); use nearRelation"
    )


# ============================================================================
# Visual type solvers
# ============================================================================


def sphere_solver(node: Node, ctx: LayoutContext) -> List[SceneNode]:
    radius = _number(ctx, node, RADIUS)
    placement = place(ctx, node, (2 * radius, 2 * radius))
    center = _lifted(placement.point, radius) if placement.anchor == "base" else placement.point
    return [_visual_node(ctx, node, SPHERE, shape=SphereShape(radius=radius), position=center)]


def cone_solver(node: Node, ctx: LayoutContext) -> List[SceneNode]:
    height = _number(ctx, node, HEIGHT)
    base_radius = ctx.params.cone_base_radius
    placement = place(ctx, node, (2 * base_radius, height))
    base = _lifted(placement.point, -height / 2) if placement.anchor == "center" else placement.point
    shape = ConeShape(height=height, base_radius=base_radius)
    return [_visual_node(ctx, node, CONE, shape=shape, position=base)]


def panel_solver(node: Node, ctx: LayoutContext) -> List[SceneNode]:
    content = ctx.graph.value(node, CONTENT)
    if not isinstance(content, Literal):
        raise LayoutError("panel :content must be a literal")
    width, height = ctx.params.panel_width, ctx.params.panel_height
    placement = place(ctx, node, (width, height))
    center = _lifted(placement.point, height / 2) if placement.anchor == "base" else placement.point
    shape = PanelShape(width=width, height=height, content=content.value)
    return [_visual_node(
        ctx, node, PANEL, shape=shape, position=center, orientation=facing_rotation(placement.facing),
    )]


def _endpoint(ctx: LayoutContext, target: Term) -> Point3:
    if isinstance(target, IRI) and ctx.index.resolve(target) is not None:
        return object_anchor(ctx.index.resolve(target))
    return location_point(ctx, target)


def line_solver(node: Node, ctx: LayoutContext) -> List[SceneNode]:
    targets = sorted(ctx.graph.objects(node, ENDPOINT), key=render_term)
    if len(targets) != 2:
        raise LayoutError(f"a line needs two endpoints, got {len(targets)}")
    entries = [ctx.index.resolve(t) if isinstance(t, IRI) else None for t in targets]
    if all(entries):
        p1, p2 = relation_endpoints(*entries)
    else:
        p1, p2 = (_endpoint(ctx, t) for t in targets)
    shape = LineShape(p1=p1, p2=p2, width=ctx.params.line_width)
    return [_visual_node(ctx, node, LINE, shape=shape)]


def isosurface_solver(node: Node, ctx: LayoutContext) -> List[SceneNode]:
    levels = sorted({
        float(t.value) for t in ctx.graph.objects(node, LEVELS) if isinstance(t, Literal) and t.is_number
    })
    if not levels:
        raise LayoutError("no numeric :levels")
    samples = collect_samples(ctx.graph, node, lambda loc: location_point(ctx, loc).array())
    grid = scalar_field(samples, ctx.params, render_term(node))
    meshes = compute_isosurface(grid, levels)
    nodes = []
    for part, (level, mesh) in enumerate(meshes):
        shape = MeshShape(
            level=level,
            vertices=[tuple(v) for v in mesh.vertices.tolist()],
            triangles=[tuple(t) for t in mesh.triangles.tolist()],
        )
        nodes.append(_visual_node(ctx, node, ISOSURFACE, part, len(meshes), shape=shape))
    return nodes


def flowlines_solver(node: Node, ctx: LayoutContext) -> List[SceneNode]:
    name = render_term(node)
    seeds_term = ctx.graph.value(node, SEEDS)
    if isinstance(seeds_term, Literal) and not seeds_term.is_number:
        seeds = parse_seeds(seeds_term.value, name)
    elif ctx.params.seeds:
        seeds = [np.asarray(s, dtype=float) for s in ctx.params.seeds]
    else:
        raise LayoutError("no :seeds")
    samples = collect_samples(ctx.graph, node, lambda loc: location_point(ctx, loc).array())
    grid = vector_field(samples, name)
    lines = integrate_streamlines(grid, seeds, ctx.params.streamline_step, ctx.params.streamline_length)
    nodes = []
    for part, line in enumerate(lines):
        shape = PolylineShape(points=[tuple(p) for p in line.tolist()], width=ctx.params.line_width)
        nodes.append(_visual_node(ctx, node, FLOWLINES, part, len(lines), shape=shape))
    return nodes


def register_builtins(registry: SolverRegistry) -> None:
    """Register the solvers of the built-in vocabulary."""
    registry.register_solver(SPHERE, sphere_solver)
    registry.register_solver(CONE, cone_solver)
    registry.register_solver(PANEL, panel_solver)
    registry.register_solver(LINE, line_solver)
    registry.register_solver(ISOSURFACE, isosurface_solver)
    registry.register_solver(FLOWLINES, flowlines_solver)
    registry.register_relation(ABOVE, above_relation)
    registry.register_relation(NEAR, near_relation)
    registry.register_relation(INSIDE, inside_relation)
    registry.register_relation(FRONT_OF, front_of_relation)


__all__ = [
    "city_object",
    "relation_target",
    "location_point",
    "place",
    "material",
    "above_relation",
    "near_relation",
    "inside_relation",
    "front_of_relation",
    "sphere_solver",
    "cone_solver",
    "panel_solver",
    "line_solver",
    "isosurface_solver",
    "flowlines_solver",
    "register_builtins",
]
