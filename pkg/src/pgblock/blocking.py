"""Mixed point/hyperplane blocking sets: model, verification, diagnostics.

A blocking set with respect to k-spaces holds a set of points and a set
of hyperplanes; it blocks a k-space by containing one of its points or
by one of the hyperplanes containing it.  Verification runs on bitsets
over canonical k-space ordinals, precomputed once per (context, k) and
shared with the search module.

The universe of potential blockers is indexed 0..2*theta_n - 1: ordinals
below theta_n are point ordinals, the rest are hyperplanes keyed by the
ordinal of their dual point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .counting import theta
from .gf import Field, field_for_order
from .pgkernel import GeometryContext, Point, Subspace, DimensionMismatch


class NotBlocking(ValueError):
    pass


class NotALine(ValueError):
    pass


class FlatMeetsPoints(ValueError):
    """The reference flat was required to be skew to the point part."""


class WrongAmbient(ValueError):
    """The statement needs ambient dimension n = 2k + 1."""


class PointsNotInHull(ValueError):
    pass


class PinnedPointInSet(ValueError):
    pass


class PinnedPointNotInHull(ValueError):
    pass


SKEW = "skew"
TANGENT = "tangent"
SECANT = "secant"


@dataclass(frozen=True)
class IncidenceSystem:
    """Bitset incidence between blocker candidates and the s-spaces.

    covers[u] has bit j set iff universe element u blocks the j-th s-space
    (point on it, or hyperplane through it).  candidates[j] lists the
    universe elements that block space j, in increasing ordinal order.
    """

    ctx: GeometryContext
    s: int
    spaces: tuple[Subspace, ...]
    space_index: dict
    covers: tuple[int, ...]
    candidates: tuple[tuple[int, ...], ...]
    candidate_masks: tuple[int, ...]
    full_mask: int

    @property
    def num_points(self) -> int:
        return self.ctx.num_points

    @property
    def universe_size(self) -> int:
        return 2 * self.ctx.num_points


def incidence(ctx: GeometryContext, s: int) -> IncidenceSystem:
    cached = ctx._incidence.get(s)
    if cached is not None:
        return cached
    spaces = ctx.subspaces(s)
    num_points = ctx.num_points
    covers = [0] * (2 * num_points)
    candidates = []
    cand_masks = []
    for j, space in enumerate(spaces):
        bit = 1 << j
        cand = []
        for pt in ctx.subspace_points(space):
            covers[pt.index] |= bit
            cand.append(pt.index)
        for dual_pt in ctx.subspace_points(ctx.dual(space)):
            covers[num_points + dual_pt.index] |= bit
            cand.append(num_points + dual_pt.index)
        cand.sort()
        candidates.append(tuple(cand))
        mask = 0
        for u in cand:
            mask |= 1 << u
        cand_masks.append(mask)
    system = IncidenceSystem(
        ctx=ctx,
        s=s,
        spaces=spaces,
        space_index={space: j for j, space in enumerate(spaces)},
        covers=tuple(covers),
        candidates=tuple(candidates),
        candidate_masks=tuple(cand_masks),
        full_mask=(1 << len(spaces)) - 1,
    )
    ctx._incidence[s] = system
    return system


@dataclass(frozen=True)
class BlockingSet:
    """The pair (points, hyperplanes) with its ambient geometry and target k."""

    ctx: GeometryContext
    k: int
    points: frozenset[Point]
    hyperplanes: frozenset[Subspace]

    def __post_init__(self):
        if not 0 <= self.k < self.ctx.n:
            raise DimensionMismatch(f"need 0 <= k < n, got k={self.k}, n={self.ctx.n}")
        for pt in self.points:
            if len(pt.coords) != self.ctx.n + 1:
                raise DimensionMismatch(f"{pt!r} does not live in {self.ctx!r}")
        for hp in self.hyperplanes:
            if hp.dim != self.ctx.n - 1:
                raise DimensionMismatch(f"{hp!r} is not a hyperplane of {self.ctx!r}")

    @property
    def size(self) -> int:
        return len(self.points) + len(self.hyperplanes)

    def element_indices(self) -> tuple[int, ...]:
        """Sorted universe ordinals (points, then hyperplanes by dual ordinal)."""
        num_points = self.ctx.num_points
        ids = [pt.index for pt in self.points]
        ids.extend(num_points + self.ctx.hyperplane_dual_point(hp).index
                   for hp in self.hyperplanes)
        return tuple(sorted(ids))

    @classmethod
    def from_indices(cls, ctx: GeometryContext, k: int, ids) -> "BlockingSet":
        num_points = ctx.num_points
        pts = []
        hyps = []
        for u in ids:
            if u < num_points:
                pts.append(ctx.point(u))
            else:
                hyps.append(ctx.hyperplane(ctx.point(u - num_points).coords))
        return cls(ctx, k, frozenset(pts), frozenset(hyps))

    # -- JSON interchange -------------------------------------------------

    def to_dict(self) -> dict:
        pts = sorted(self.points, key=lambda p: p.index)
        hyps = sorted((self.ctx.hyperplane_dual_point(h) for h in self.hyperplanes),
                      key=lambda p: p.index)
        return {
            "q": self.ctx.q,
            "n": self.ctx.n,
            "k": self.k,
            "field": self.ctx.field.to_dict(),
            "points": [list(p.coords) for p in pts],
            "hyperplanes": [list(p.coords) for p in hyps],
        }

    @classmethod
    def from_dict(cls, data: dict, warn=None) -> "BlockingSet":
        field_data = data.get("field")
        if field_data is not None:
            fld = Field.from_dict(field_data)
            if "q" in data and int(data["q"]) != fld.q:
                raise ValueError(f"q = {data['q']} disagrees with field of order {fld.q}")
        else:
            fld = field_for_order(int(data["q"]))
        ctx = GeometryContext(fld, int(data["n"]))
        pts = []
        for raw in data.get("points", ()):
            coords = tuple(int(c) for c in raw)
            pt = ctx.point(coords)
            if warn is not None and pt.coords != coords:
                warn(f"point {list(coords)} normalized to {list(pt.coords)}")
            pts.append(pt)
        hyps = []
        for raw in data.get("hyperplanes", ()):
            coords = tuple(int(c) for c in raw)
            pt = ctx.point(coords)
            if warn is not None and pt.coords != coords:
                warn(f"hyperplane {list(coords)} normalized to {list(pt.coords)}")
            hyps.append(ctx.hyperplane(pt.coords))
        return cls(ctx, int(data["k"]), frozenset(pts), frozenset(hyps))


def blocked_mask(bset: BlockingSet, s: int | None = None) -> int:
    """Bitset of s-spaces incident with at least one element of the set."""
    inc = incidence(bset.ctx, bset.k if s is None else s)
    num_points = inc.num_points
    mask = 0
    for pt in bset.points:
        mask |= inc.covers[pt.index]
    for hp in bset.hyperplanes:
        mask |= inc.covers[num_points + bset.ctx.hyperplane_dual_point(hp).index]
    return mask


def is_blocking(bset: BlockingSet):
    """(True, None) if every k-space is blocked, else (False, witness k-space)."""
    inc = incidence(bset.ctx, bset.k)
    mask = blocked_mask(bset)
    if mask == inc.full_mask:
        return True, None
    missing = (~mask & inc.full_mask)
    j = (missing & -missing).bit_length() - 1
    return False, inc.spaces[j]


def unblocked_count(bset: BlockingSet, s: int) -> int:
    """Exact number of s-spaces incident with no element of the set."""
    inc = incidence(bset.ctx, s)
    mask = blocked_mask(bset, s)
    return (inc.full_mask & ~mask).bit_count()


def _element_cover_pairs(bset: BlockingSet):
    """(universe ordinal, element, cover mask) for every element, sorted."""
    inc = incidence(bset.ctx, bset.k)
    num_points = inc.num_points
    pairs = [(pt.index, pt, inc.covers[pt.index]) for pt in bset.points]
    for hp in bset.hyperplanes:
        u = num_points + bset.ctx.hyperplane_dual_point(hp).index
        pairs.append((u, hp, inc.covers[u]))
    pairs.sort(key=lambda t: t[0])
    return pairs


def is_minimal(bset: BlockingSet):
    """(True, None) if no single element can be removed, else (False, element).

    Removing one element suffices to decide: blocking is monotone, so a
    proper blocking subset exists iff some element is redundant.
    """
    ok, _ = is_blocking(bset)
    if not ok:
        raise NotBlocking("minimality is only defined for blocking sets")
    pairs = _element_cover_pairs(bset)
    seen_once = 0
    seen_twice = 0
    for _, _, mask in pairs:
        seen_twice |= seen_once & mask
        seen_once |= mask
    uniquely_covered = seen_once & ~seen_twice
    for _, element, mask in pairs:
        if mask & uniquely_covered == 0:
            return False, element
    return True, None


def dual_set(bset: BlockingSet) -> BlockingSet:
    """Swap points and hyperplanes through the standard duality; the result
    blocks (n-1-k)-spaces iff the input blocks k-spaces."""
    ctx = bset.ctx
    new_hyps = frozenset(ctx.hyperplane(pt.coords) for pt in bset.points)
    new_pts = frozenset(ctx.hyperplane_dual_point(hp) for hp in bset.hyperplanes)
    return BlockingSet(ctx, ctx.n - 1 - bset.k, new_pts, new_hyps)


def line_type(ctx: GeometryContext, line: Subspace, point_set) -> str:
    """skew / tangent / secant by meeting the set in 0 / 1 / >= 2 points."""
    if line.dim != 1:
        raise NotALine(f"dim {line.dim} is not a line")
    idx = {ctx.point(p).index for p in point_set}
    hits = sum(1 for pt in ctx.subspace_points(line) if pt.index in idx)
    if hits == 0:
        return SKEW
    if hits == 1:
        return TANGENT
    return SECANT


@dataclass(frozen=True)
class TangentClosureReport:
    closure: frozenset[Point]
    hypothesis_ok: bool
    violator: Point | None       # a point off S on both a tangent and a secant
    is_subspace: bool | None     # None when the hypothesis fails
    dim: int | None              # dimension of span(closure) when it applies
    expected_dim: int            # min m with |S| <= theta_m


def tangent_closure(ctx: GeometryContext, point_set) -> TangentClosureReport:
    """Close a nonempty point set by adding the points through which no
    tangent line passes.  Under the no-tangent-and-secant hypothesis the
    closure is a subspace of dimension min {m : |S| <= theta_m}; the
    hypothesis is checked, never assumed.
    """
    pts = {ctx.point(p) for p in point_set}
    if not pts:
        raise ValueError("tangent closure needs a nonempty point set")
    idx = {p.index for p in pts}
    num_points = ctx.num_points
    on_tangent = [False] * num_points
    on_secant = [False] * num_points
    for line in ctx.subspaces(1):
        line_pts = ctx.subspace_points(line)
        hits = sum(1 for p in line_pts if p.index in idx)
        if hits == 0:
            continue
        flags = on_tangent if hits == 1 else on_secant
        for p in line_pts:
            if p.index not in idx:
                flags[p.index] = True
    violator = None
    for u in range(num_points):
        if u not in idx and on_tangent[u] and on_secant[u]:
            violator = ctx.point(u)
            break
    closure = set(pts)
    for u in range(num_points):
        if u not in idx and not on_tangent[u]:
            closure.add(ctx.point(u))
    size = len(pts)
    expected_dim = 0
    while theta(expected_dim, ctx.q) < size:
        expected_dim += 1
    if violator is not None:
        return TangentClosureReport(frozenset(closure), False, violator,
                                    None, None, expected_dim)
    hull = ctx.span(*closure)
    is_subspace = len(ctx.subspace_points(hull)) == len(closure)
    return TangentClosureReport(frozenset(closure), True, None,
                                is_subspace, hull.dim, expected_dim)


@dataclass(frozen=True)
class SkewSpaceProfile:
    count: int                        # hyperplanes of the set through the flat
    bound: Fraction                   # q + 1 - |points| / q^k
    equality: bool
    single_point_per_kspace: bool | None  # checked only at equality
    point_count_multiple: bool | None     # |points| divisible by q^k


def skew_space_profile(bset: BlockingSet, flat: Subspace) -> SkewSpaceProfile:
    """Count the hyperplanes of the set through a (k-1)-space skew to the
    points, compare exactly against q + 1 - |points|/q^k, and at equality
    verify the two equality consequences."""
    ctx, k = bset.ctx, bset.k
    if ctx.n != 2 * k + 1:
        raise WrongAmbient(f"need n = 2k + 1, got n={ctx.n}, k={k}")
    if flat.dim != k - 1:
        raise DimensionMismatch(f"flat must have dimension k-1 = {k - 1}")
    point_idx = {p.index for p in bset.points}
    if any(p.index in point_idx for p in ctx.subspace_points(flat)):
        raise FlatMeetsPoints("the flat meets the point part")
    count = sum(1 for hp in bset.hyperplanes if ctx.contains(hp, flat))
    qk = ctx.q ** k
    bound = Fraction(ctx.q + 1) - Fraction(len(point_idx), qk)
    equality = Fraction(count) == bound
    single = multiple = None
    if equality:
        single = True
        for kspace in ctx.subspaces(k):
            if not ctx.contains(kspace, flat):
                continue
            hits = sum(1 for p in ctx.subspace_points(kspace) if p.index in point_idx)
            if hits > 1:
                single = False
                break
        multiple = len(point_idx) % qk == 0
    return SkewSpaceProfile(count, bound, equality, single, multiple)


FULL_TRACE = "full_trace"
COUNT_BOUND = "count"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class PinnedHyperplanesReport:
    hyperplanes: frozenset[Subspace]  # members through the pin, not through the hull
    case: str                         # FULL_TRACE / COUNT_BOUND / VACUOUS
    trace: Subspace | None            # witness k-space inside the hull (case 1)
    bound: int | None                 # q^k (case 1) or q^(k-1)(q+1) (case 2)
    bound_ok: bool | None


def pinned_hyperplanes(bset: BlockingSet, hull: Subspace, pin: Point) -> PinnedHyperplanesReport:
    """Hyperplanes of the set through a point of the hull, cutting the hull
    properly.  For a blocking set whose points lie in the (k+1)-dim hull,
    either some k-space of the hull has its whole fibre of hyperplanes in
    the collection (size >= q^k), or the collection has size
    >= q^(k-1) (q+1).  Vacuous when the set is not blocking."""
    ctx, k = bset.ctx, bset.k
    if ctx.n != 2 * k + 1:
        raise WrongAmbient(f"need n = 2k + 1, got n={ctx.n}, k={k}")
    if hull.dim != k + 1:
        raise DimensionMismatch(f"hull must have dimension k+1 = {k + 1}")
    hull_idx = {p.index for p in ctx.subspace_points(hull)}
    point_idx = {p.index for p in bset.points}
    if not point_idx <= hull_idx:
        raise PointsNotInHull("the point part is not contained in the hull")
    if pin.index not in hull_idx:
        raise PinnedPointNotInHull(f"{pin!r} is not on the hull")
    if pin.index in point_idx:
        raise PinnedPointInSet(f"{pin!r} belongs to the point part")
    members = frozenset(hp for hp in bset.hyperplanes
                        if ctx.contains(hp, pin) and not ctx.contains(hp, hull))
    if not is_blocking(bset)[0]:
        return PinnedHyperplanesReport(members, VACUOUS, None, None, None)
    q = ctx.q
    # Case 1: a k-space of the hull through the pin whose full hyperplane
    # fibre {H : H meet hull = that k-space} sits inside the collection.
    for kspace in ctx.subspaces(k):
        if not ctx.contains(hull, kspace) or not ctx.contains(kspace, pin):
            continue
        fibre = [hp for hp in ctx.hyperplanes_through(kspace)
                 if not ctx.contains(hp, hull)]
        if fibre and all(hp in members for hp in fibre):
            bound = q ** k
            return PinnedHyperplanesReport(members, FULL_TRACE, kspace,
                                           bound, len(members) >= bound)
    bound = q ** (k - 1) * (q + 1)
    return PinnedHyperplanesReport(members, COUNT_BOUND, None,
                                   bound, len(members) >= bound)
