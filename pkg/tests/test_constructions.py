import random

import pytest

from pgblock.blocking import dual_set, is_blocking, is_minimal
from pgblock.constructions import (BadPencil, EmptyPart, PencilPartitionParams,
                                   WrongAnchorDim, WrongParameters, bose_burton,
                                   canonical_anchor, canonical_pencil_partition,
                                   distinct_pencil_partition_sets, pencil,
                                   pencil_partition, q2_even_mixed_set,
                                   recognize_pencil_partition)
from pgblock.counting import theta
from pgblock.gf import Field
from pgblock.pgkernel import GeometryContext


def random_pencil_params(ctx, k, rng):
    hull = rng.choice(ctx.subspaces(k + 1))
    if k == 1:
        from pgblock.pgkernel import Subspace
        axes = [Subspace(0, (p.coords,)) for p in ctx.subspace_points(hull)]
    else:
        axes = [a for a in ctx.subspaces(k - 1) if ctx.contains(hull, a)]
    axis = rng.choice(axes)
    members = list(pencil(ctx, axis, hull))
    t = rng.randrange(1, ctx.q + 1)
    chosen = rng.sample(members, t)
    return PencilPartitionParams(hull, axis, frozenset(chosen),
                                 frozenset(members) - frozenset(chosen))


def test_pencil_members(pg32):
    params = canonical_pencil_partition(pg32, 1)
    members = pencil(pg32, params.axis, params.hull)
    assert len(members) == 3
    for m in members:
        assert m.dim == 1
        assert pg32.contains(m, params.axis)
        assert pg32.contains(params.hull, m)


def test_pencil_partition_pg32_sizes(pg32):
    bset = pencil_partition(pg32, canonical_pencil_partition(pg32, 1, t=1))
    assert len(bset.points) == 2 and len(bset.hyperplanes) == 4
    assert bset.size == 6
    assert is_blocking(bset)[0]


def test_pencil_partition_pg33_sizes(pg33):
    bset = pencil_partition(pg33, canonical_pencil_partition(pg33, 1, t=2))
    assert len(bset.points) == 6 and len(bset.hyperplanes) == 6
    assert bset.size == 12
    assert is_blocking(bset)[0]


def test_empty_part_rejected(pg32):
    params = canonical_pencil_partition(pg32, 1)
    members = frozenset(pencil(pg32, params.axis, params.hull))
    with pytest.raises(EmptyPart):
        pencil_partition(pg32, PencilPartitionParams(
            params.hull, params.axis, frozenset(), members))


def test_bad_pencil_rejected(pg32):
    params = canonical_pencil_partition(pg32, 1)
    members = list(pencil(pg32, params.axis, params.hull))
    with pytest.raises(BadPencil):
        pencil_partition(pg32, PencilPartitionParams(
            params.hull, params.axis,
            frozenset(members[:1]), frozenset(members[:2])))  # overlapping parts
    other_axis = next(p for p in pg32.subspace_points(params.hull)
                      if not pg32.contains(params.axis, p))
    from pgblock.pgkernel import Subspace
    foreign = pencil(pg32, Subspace(0, (other_axis.coords,)), params.hull)
    with pytest.raises(BadPencil):
        pencil_partition(pg32, PencilPartitionParams(
            params.hull, params.axis, frozenset(members[:1]),
            frozenset(foreign[1:])))  # not the full pencil of the axis


@pytest.mark.parametrize("k,q", [(1, 2), (1, 3), (1, 4), (2, 2)])
def test_random_instances_counting_and_properties(k, q):
    ctx = GeometryContext(Field(*{2: (2,), 3: (3,), 4: (2, 2)}[q]), 2 * k + 1)
    rng = random.Random(100 * k + q)
    qk = q ** k
    for _ in range(5):
        params = random_pencil_params(ctx, k, rng)
        bset = pencil_partition(ctx, params)
        t = len(params.point_spaces)
        assert len(bset.points) == t * qk
        assert len(bset.hyperplanes) == (q + 1 - t) * qk
        assert bset.size == (q + 1) * qk
        assert is_blocking(bset)[0]
        for pt in bset.points:
            for hp in bset.hyperplanes:
                assert not ctx.contains(hp, pt)


def test_recognition_round_trip(pg32, pg33):
    jobs = [(pg32, 1, 8), (pg33, 1, 8),
            (GeometryContext(Field(2, 2), 3), 1, 3),
            (GeometryContext(Field(2), 5), 2, 3)]
    for ctx, k, count in jobs:
        rng = random.Random(ctx.q + k)
        for _ in range(count):
            params = random_pencil_params(ctx, k, rng)
            bset = pencil_partition(ctx, params)
            recovered = recognize_pencil_partition(bset)
            assert recovered is not None
            assert pencil_partition(ctx, recovered) == bset


def test_recognition_of_dual(pg32):
    rng = random.Random(17)
    for _ in range(5):
        bset = pencil_partition(pg32, random_pencil_params(pg32, 1, rng))
        dual = dual_set(bset)
        recovered = recognize_pencil_partition(dual)
        assert recovered is not None
        assert pencil_partition(pg32, recovered) == dual


def test_recognition_rejects_bose_burton(pg32):
    plane = canonical_anchor(pg32, 2)
    bset = bose_burton(pg32, 1, "points", plane)
    assert recognize_pencil_partition(bset) is None  # size 7, not 6


def test_recognition_rejects_perturbed_instance(pg32):
    bset = pencil_partition(pg32, canonical_pencil_partition(pg32, 1))
    outside = next(p for p in pg32.points() if p not in bset.points)
    from pgblock.blocking import BlockingSet
    swapped = BlockingSet(pg32, 1,
                          frozenset(list(bset.points)[:1] + [outside]),
                          bset.hyperplanes)
    assert recognize_pencil_partition(swapped) is None


def test_instances_are_minimal(pg32, pg33):
    rng = random.Random(23)
    for ctx in (pg32, pg33):
        for _ in range(3):
            bset = pencil_partition(ctx, random_pencil_params(ctx, 1, rng))
            assert is_minimal(bset) == (True, None)


def test_distinct_sets_pg32(pg32):
    sets, tuples = distinct_pencil_partition_sets(pg32, 1)
    assert tuples == 630          # 15 hulls x 7 axes x 6 nonempty splits
    assert len(sets) == 210       # the tuple -> set map is 3-to-1 here
    assert all(len(ids) == 6 for ids in sets)


def test_bose_burton_points(pg32):
    plane = canonical_anchor(pg32, 2)
    bset = bose_burton(pg32, 1, "points", plane)
    assert len(bset.points) == 7 and not bset.hyperplanes
    assert is_blocking(bset)[0]


def test_bose_burton_hyperplanes_pg52():
    ctx = GeometryContext(Field(2), 5)
    anchor = canonical_anchor(ctx, 2)  # n - k - 2 = 2 for k = 1
    bset = bose_burton(ctx, 1, "hyperplanes", anchor)
    assert len(bset.hyperplanes) == theta(2, 2) == 7
    assert not bset.points
    assert is_blocking(bset)[0]


def test_bose_burton_wrong_anchor(pg32):
    with pytest.raises(WrongAnchorDim):
        bose_burton(pg32, 1, "points", canonical_anchor(pg32, 1))
    with pytest.raises(WrongParameters):
        bose_burton(pg32, 1, "lines", canonical_anchor(pg32, 2))


def test_q2_even_mixed_set_pg22(pg22):
    bset = q2_even_mixed_set(pg22)
    assert bset.size == 4 == 2 ** (pg22.n // 2 + 1)
    assert bset.k == 1
    assert is_blocking(bset)[0]


def test_q2_even_mixed_set_pg42(pg42):
    bset = q2_even_mixed_set(pg42)
    assert bset.size == 8 == 2 ** (pg42.n // 2 + 1)
    assert bset.k == 2
    assert is_blocking(bset)[0]


def test_q2_even_wrong_parameters(pg32, pg23):
    with pytest.raises(WrongParameters):
        q2_even_mixed_set(pg23)  # q = 3
    with pytest.raises(WrongParameters):
        q2_even_mixed_set(pg32)  # odd n


def test_dual_of_instance_parameter_shape(pg32):
    # the dual instance swaps the roles: hull <-> dual of axis, parts swap
    params = canonical_pencil_partition(pg32, 1, t=1)
    bset = pencil_partition(pg32, params)
    dual = dual_set(bset)
    recovered = recognize_pencil_partition(dual)
    assert recovered is not None
    assert len(recovered.point_spaces) == len(params.hyperplane_spaces)
    assert len(recovered.hyperplane_spaces) == len(params.point_spaces)
