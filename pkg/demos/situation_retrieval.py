"""
Mining first and second order situations from a scene
=====================================================

A three-agent scene: an ego car headed for a crossing car, and a
pedestrian further down the crossing car's lane. Ego-car is a direct
(first order) interaction; ego-car-pedestrian chains into a second
order one even though ego and the pedestrian never get close.
"""

from risk_sieve import (
    FilterConfig,
    build_graph,
    chain_scenario,
    retrieve_first_order,
    retrieve_second_order,
    valuable_users,
)

config = FilterConfig()
scenario = chain_scenario()
graph = build_graph(scenario, config)

print("agents and their prediction status")
for status in graph.statuses.values():
    note = status.reason if status.reason else "predicted"
    print(f"  {status.track_id:8s} speed {status.anchor_speed_mps:4.1f} m/s  "
          f"path {status.path_length_m:5.1f} m  {note}")

print()
print("pairwise risks (directed)")
for edge in graph.edges():
    print(f"  {edge.ego_id:8s} -> {edge.other_id:8s}  {edge.risk:.3e}")

# first order: any directed pair at or above the threshold
print()
print(f"first order situations at {config.r_valuable:.0e}")
for hit in retrieve_first_order(graph, config.r_valuable):
    print(f"  {hit.ego_id} with {hit.other_id}  (risk {hit.risk:.3e})")

# second order: ego risky with first, first risky with second,
# but ego and second on their own are below threshold
print()
print("second order situations")
for hit in retrieve_second_order(graph, config.r_valuable):
    print(f"  {hit.ego_id} -> {hit.first_id} -> {hit.second_id}  "
          f"(links {hit.risk_first:.2e}, {hit.risk_second:.2e})")

direct = graph.risk("ego", "second")
print()
print(f"ego to pedestrian directly: {direct:.2e}, below threshold, "
      "so only the chained view surfaces it")

print()
print("agents worth keeping:", ", ".join(valuable_users(graph, config.r_valuable)))
