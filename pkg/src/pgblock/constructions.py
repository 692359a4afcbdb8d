"""Generators and recognizers for the explicit small blocking-set families.

Three families live here:

* Bose-Burton sets: all points of an (n-k)-space, or dually all
  hyperplanes through an (n-k-2)-space.
* Pencil-partition sets in PG(2k+1, q): fix a (k+1)-space (the hull) and
  a (k-1)-space inside it (the axis), split the pencil of q+1 k-spaces
  between them into two nonempty parts, and take the off-axis points of
  one part together with the hyperplanes that cut the hull exactly in a
  member of the other part.  Size is always (q+1) q^k.
* The q = 2 even-dimension variant of the same idea, one level up, for
  k = n/2.

Recognition is generate-and-compare: recover candidate parameters, run
the generator, and demand exact set equality.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocking import BlockingSet
from .pgkernel import GeometryContext, Subspace


class BadPencil(ValueError):
    pass


class EmptyPart(ValueError):
    pass


class WrongAnchorDim(ValueError):
    pass


class WrongParameters(ValueError):
    pass


@dataclass(frozen=True)
class PencilPartitionParams:
    """(hull, axis, point_spaces, hyperplane_spaces): the pencil of k-spaces
    between axis and hull, split into the part contributing points and the
    part contributing hyperplanes."""

    hull: Subspace
    axis: Subspace
    point_spaces: frozenset[Subspace]
    hyperplane_spaces: frozenset[Subspace]


def pencil(ctx: GeometryContext, axis: Subspace, hull: Subspace) -> tuple[Subspace, ...]:
    """The q+1 spaces between axis (codim 2 in hull) and hull, canonically
    ordered by their smallest off-axis point."""
    if hull.dim - axis.dim != 2 or not ctx.contains(hull, axis):
        raise BadPencil(f"axis dim {axis.dim} / hull dim {hull.dim} do not form a pencil")
    axis_idx = {p.index for p in ctx.subspace_points(axis)}
    seen = {}
    for pt in ctx.subspace_points(hull):
        if pt.index in axis_idx:
            continue
        member = ctx.span(axis, pt)
        if member not in seen:
            seen[member] = pt.index
    return tuple(sorted(seen, key=seen.get))


def pencil_partition(ctx: GeometryContext, params: PencilPartitionParams) -> BlockingSet:
    """Build the blocking set from validated pencil-partition parameters."""
    hull, axis = params.hull, params.axis
    k = hull.dim - 1
    if ctx.n != 2 * k + 1 or axis.dim != k - 1:
        raise BadPencil(
            f"need hull dim k+1 and axis dim k-1 with n = 2k+1; "
            f"got hull {hull.dim}, axis {axis.dim}, n {ctx.n}")
    if not params.point_spaces or not params.hyperplane_spaces:
        raise EmptyPart("both parts of the pencil partition must be nonempty")
    if params.point_spaces & params.hyperplane_spaces:
        raise BadPencil("the two parts of the partition overlap")
    members = set(pencil(ctx, axis, hull))
    if set(params.point_spaces) | set(params.hyperplane_spaces) != members:
        raise BadPencil("the two parts do not partition the full pencil")
    axis_idx = {p.index for p in ctx.subspace_points(axis)}
    points = set()
    for kspace in params.point_spaces:
        points.update(p for p in ctx.subspace_points(kspace) if p.index not in axis_idx)
    hyperplanes = set()
    for kspace in params.hyperplane_spaces:
        hyperplanes.update(hp for hp in ctx.hyperplanes_through(kspace)
                           if not ctx.contains(hp, hull))
    return BlockingSet(ctx, k, frozenset(points), frozenset(hyperplanes))


def canonical_pencil_partition(ctx: GeometryContext, k: int, t: int = 1) -> PencilPartitionParams:
    """Standard-basis parameters: reproducible byte-for-byte outputs for the
    CLI when no explicit coordinates are supplied."""
    if ctx.n != 2 * k + 1 or k < 1:
        raise WrongParameters(f"need n = 2k + 1 and k >= 1, got n={ctx.n}, k={k}")
    if not 1 <= t <= ctx.q:
        raise WrongParameters(f"need 1 <= t <= q, got t={t}")
    rows = ctx.whole_space().basis
    hull = Subspace(k + 1, rows[:k + 2])
    axis = Subspace(k - 1, rows[:k])
    members = pencil(ctx, axis, hull)
    return PencilPartitionParams(hull, axis,
                                 frozenset(members[:t]), frozenset(members[t:]))


def enumerate_pencil_partitions(ctx: GeometryContext, k: int):
    """Every parameter tuple (hull, axis, nonempty split), canonically ordered."""
    if ctx.n != 2 * k + 1 or k < 1:
        raise WrongParameters(f"need n = 2k + 1 and k >= 1, got n={ctx.n}, k={k}")
    q = ctx.q
    for hull in ctx.subspaces(k + 1):
        if k == 1:
            axes = [Subspace(0, (p.coords,)) for p in ctx.subspace_points(hull)]
        else:
            axes = [a for a in ctx.subspaces(k - 1) if ctx.contains(hull, a)]
        for axis in axes:
            members = pencil(ctx, axis, hull)
            for split in range(1, 2 ** (q + 1) - 1):
                part1 = frozenset(members[i] for i in range(q + 1) if split >> i & 1)
                part2 = frozenset(members) - part1
                yield PencilPartitionParams(hull, axis, part1, part2)


def distinct_pencil_partition_sets(ctx: GeometryContext, k: int):
    """(sorted tuple of distinct element-index tuples, number of parameter tuples)."""
    seen = {}
    count = 0
    for params in enumerate_pencil_partitions(ctx, k):
        count += 1
        bset = pencil_partition(ctx, params)
        seen.setdefault(bset.element_indices(), params)
    return tuple(sorted(seen)), count


def recognize_pencil_partition(bset: BlockingSet) -> PencilPartitionParams | None:
    """Parameters whose generated set equals bset exactly, or None.

    Recovery: the hull is the span of the points (completed through every
    (k+1)-space over it in the degenerate one-part case), the hyperplane
    part's traces on the hull give one side of the pencil, and the axis is
    the common intersection of the traces (enumerated inside the single
    trace when only one is present).  Every candidate is confirmed by
    regeneration.
    """
    ctx, k = bset.ctx, bset.k
    q = ctx.q
    if ctx.n != 2 * k + 1 or k < 1:
        return None
    if not bset.points or not bset.hyperplanes:
        return None
    qk = q ** k
    t, rem = divmod(len(bset.points), qk)
    if rem or not 1 <= t <= q or len(bset.hyperplanes) != (q + 1 - t) * qk:
        return None
    span0 = ctx.span(*bset.points)
    if span0.dim == k + 1:
        hulls = [span0]
    elif span0.dim == k:
        hulls = []
        span_idx = {p.index for p in ctx.subspace_points(span0)}
        for pt in ctx.points():
            if pt.index in span_idx:
                continue
            hull = ctx.span(span0, pt)
            if hull not in hulls:
                hulls.append(hull)
    else:
        return None
    point_idx = {p.index for p in bset.points}
    for hull in hulls:
        hull_idx = {p.index for p in ctx.subspace_points(hull)}
        if not point_idx <= hull_idx:
            continue
        traces = set()
        ok = True
        for hp in bset.hyperplanes:
            if ctx.contains(hp, hull):
                ok = False
                break
            trace = ctx.meet(hp, hull)
            if trace.dim != k:
                ok = False
                break
            traces.add(trace)
        if not ok or not traces:
            continue
        if len(traces) > 1:
            it = iter(traces)
            axis = next(it)
            for trace in it:
                axis = ctx.meet(axis, trace)
            if axis.dim != k - 1:
                continue
            axis_candidates = [axis]
        else:
            only = next(iter(traces))
            if k == 1:
                axis_candidates = [Subspace(0, (p.coords,))
                                   for p in ctx.subspace_points(only)]
            else:
                axis_candidates = [a for a in ctx.subspaces(k - 1)
                                   if ctx.contains(only, a)]
        for axis in axis_candidates:
            if not ctx.contains(hull, axis):
                continue
            try:
                members = set(pencil(ctx, axis, hull))
            except BadPencil:
                continue
            if not traces <= members:
                continue
            point_part = frozenset(members - traces)
            if len(point_part) != t:
                continue
            params = PencilPartitionParams(hull, axis, point_part, frozenset(traces))
            try:
                regenerated = pencil_partition(ctx, params)
            except (BadPencil, EmptyPart):
                continue
            if regenerated == bset:
                return params
    return None


def bose_burton(ctx: GeometryContext, k: int, variant: str, anchor: Subspace) -> BlockingSet:
    """The point set of an (n-k)-space, or all hyperplanes through an
    (n-k-2)-space; the smallest one-type blocking sets."""
    if variant == "points":
        if anchor.dim != ctx.n - k:
            raise WrongAnchorDim(
                f"points variant needs anchor dim n-k = {ctx.n - k}, got {anchor.dim}")
        return BlockingSet(ctx, k, frozenset(ctx.subspace_points(anchor)), frozenset())
    if variant == "hyperplanes":
        if anchor.dim != ctx.n - k - 2:
            raise WrongAnchorDim(
                f"hyperplanes variant needs anchor dim n-k-2 = {ctx.n - k - 2}, "
                f"got {anchor.dim}")
        return BlockingSet(ctx, k, frozenset(),
                           frozenset(ctx.hyperplanes_through(anchor)))
    raise WrongParameters(f"variant must be 'points' or 'hyperplanes', got {variant!r}")


def canonical_anchor(ctx: GeometryContext, dim: int) -> Subspace:
    """The standard-basis subspace spanned by the first dim+1 unit vectors."""
    if not -1 <= dim <= ctx.n:
        raise WrongAnchorDim(f"no subspace of dimension {dim} in {ctx!r}")
    rows = ctx.whole_space().basis
    return Subspace(dim, rows[:dim + 1])


def q2_even_mixed_set(ctx: GeometryContext) -> BlockingSet:
    """For q = 2 and even n, k = n/2: the points of an (n/2)-space off one of
    its hyperplanes, plus the ambient hyperplanes through that sub-hyperplane
    not containing the (n/2)-space.  Size 2^(n/2 + 1), one more than the
    smallest point-only example."""
    if ctx.q != 2 or ctx.n % 2:
        raise WrongParameters(f"needs q = 2 and even n, got q={ctx.q}, n={ctx.n}")
    half = ctx.n // 2
    hull = canonical_anchor(ctx, half)
    inner = canonical_anchor(ctx, half - 1)
    inner_idx = {p.index for p in ctx.subspace_points(inner)}
    points = frozenset(p for p in ctx.subspace_points(hull) if p.index not in inner_idx)
    hyperplanes = frozenset(hp for hp in ctx.hyperplanes_through(inner)
                            if not ctx.contains(hp, hull))
    return BlockingSet(ctx, half, points, hyperplanes)
