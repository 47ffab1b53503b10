from fourcolor.embed import appears, distinct_images, find_maps
from fourcolor.generate import icosahedron
from fourcolor.graph import RotationGraph, from_faces


def triangle():
    return from_faces([(1, 2, 3)], outer=(1, 3))


def test_triangle_images_in_icosahedron():
    t = icosahedron()
    maps = list(find_maps(triangle(), t))
    assert sum(1 for _, s in maps if s == 1) == 60
    assert sum(1 for _, s in maps if s == -1) == 60
    assert len(distinct_images(iter(maps))) == 20


def test_pins_and_vertex_filter():
    t = icosahedron()
    u, w = t.edges[0]
    pinned = list(find_maps(triangle(), t, pins={1: u, 2: w}))
    assert len(pinned) == 2
    assert not list(find_maps(triangle(), t, ok=lambda p, h: h != u, pins={1: u}))


def test_induced_rejects_extra_edges():
    t = icosahedron()
    path = RotationGraph({1: [2], 2: [1, 3], 3: [2]}).with_outer((1, 2))
    induced = distinct_images(find_maps(path, t))
    loose = distinct_images(find_maps(path, t, induced=False))
    assert len(loose) > len(induced) > 0


def test_appears():
    t = icosahedron()
    assert appears(triangle(), t)
    assert not appears(triangle(), t, ok=lambda p, h: False)
