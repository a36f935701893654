"""Geodesic networks: vertices, orders, and the graph bounds.

A network is a finite union of closed geodesics with distinct images.
Vertex detection clusters the near-intersections of the sampled curves and
groups the passes through each cluster into strands; the order of a vertex
is its strand count and the weighted count sums binomial(order, 2).
"""

import numpy as np

from geolab import (
    GeodesicNetwork,
    check_appendix_bounds,
    is_g_plus,
    make_flat_chart,
    make_sphere,
    network_index,
    sample_great_circle,
    weighted_vertex_count,
)
from geolab.geodesics import curve_from_samples

sphere = make_sphere()
print("== two orthogonal great circles ==")
net = GeodesicNetwork.build(
    sphere,
    [
        sample_great_circle(sphere, [1, 0, 0], [0, 1, 0]),
        sample_great_circle(sphere, [1, 0, 0], [0, 0, 1]),
    ],
    clustering_radius=0.01,
)
for v in net.vertices:
    print(f"  vertex at {np.round(v.position, 6)}: order {v.order}, transverse {v.transverse}")
print(f"  weighted vertex count: {weighted_vertex_count(net.vertices)}")
print(f"  all order-2 transverse crossings: {is_g_plus(net)}")
idx, _ = network_index(net)
print(f"  network index (sum over curves): {idx}")

print("\n== edge and length bounds at level p = 2 ==")
rep = check_appendix_bounds(net, p=2, K0=1.0, omega1=2 * np.pi)
print(f"  edges e_G = {rep['edge_count']}  <=  p omega_1 / pi = {rep['edge_bound']:.3f}: "
      f"{rep['edge_bound_ok']}")
print(f"  curve lengths {np.round(rep['curve_lengths'], 4)} <= pi p / sqrt(K0) = "
      f"{rep['length_bound']:.4f}: {rep['length_bound_ok']}")

print("\n== a synthetic order-3 vertex in a flat chart ==")
chart = make_flat_chart(2.6, 2.6)
lines = []
for a in (0.0, np.pi / 2, np.pi / 4):
    t = np.linspace(-1, 1, 4000)
    lines.append(curve_from_samples(chart, np.outer(t, [np.cos(a), np.sin(a)]), closed=False))
net3 = GeodesicNetwork.build(chart, lines, clustering_radius=0.01)
v = net3.vertices[0]
print(f"  one vertex of order {v.order}; strand angles {np.round(v.strand_angles, 4)}")
print(f"  weighted count binomial(3,2) = {weighted_vertex_count(net3.vertices)}")
print(f"  in G_plus: {is_g_plus(net3)} (an order-3 vertex disqualifies it;")
print("  demo 05 splits it into three order-2 crossings)")
