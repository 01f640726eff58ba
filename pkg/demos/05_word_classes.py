"""Counting words up to commutation of non-adjacent letters."""
from graphcount import path_graph, star_graph
from graphcount.oracle import exact_C, trace_class_count, trace_classes

g = path_graph("abc")
# a and c commute; b commutes with neither
for cls in sorted(trace_classes(g, [1, 1, 1]), key=lambda c: c.normal_form):
    print("".join(cls.normal_form))

for n in ([1, 1, 1], [2, 1, 1], [2, 2, 2]):
    print(n, trace_class_count(g, n), exact_C(g, n, 1))

s = star_graph("hxyz")
print("star:", trace_class_count(s, [2, 1, 1, 1]), exact_C(s, [2, 1, 1, 1], 1))
