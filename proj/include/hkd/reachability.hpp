#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hkd/instance.hpp"

namespace hkd {

/// True iff seq (>= 2 vertices) is a walk in D whose consecutive arc-color
/// pairs are all arcs of H. A single arc always qualifies. Throws when some
/// consecutive pair is not an arc of D.
bool is_h_walk(const Instance& inst, const std::vector<Vertex>& seq);

/// is_h_walk plus pairwise-distinct vertices. A repeated vertex makes it
/// false, not an error.
bool is_h_path(const Instance& inst, const std::vector<Vertex>& seq);

/// Positions carrying an H-obstruction. Open walk (v0..vn): positions 1..n-1.
/// Closed walk (front == back): positions 0..n-1, the junction pair at
/// position 0 evaluated cyclically.
std::vector<int> obstructions(const Instance& inst, const std::vector<Vertex>& seq);

/// Simple H-path u -> v inside the filtered subdigraph. Returns the witness
/// path (lexicographically first) or nullopt. Depth-first search over simple
/// paths carrying (vertex, last color, visited); exact but exponential, so the
/// instance must fit caps.max_vertices and extension steps are budgeted by
/// caps.max_paths.
std::optional<std::vector<Vertex>> h_path_exists(const Instance& inst, Vertex u, Vertex v,
                                                 ArcFilter f = {}, const Caps& caps = {});

/// H-walk u -> v (length >= 1, repeats allowed) inside the filtered
/// subdigraph, decided on the arc-pair automaton: states are arcs, transition
/// (x,y) -> (y,z) iff (c(x,y), c(y,z)) is an arc of H. Polynomial. Returns a
/// shortest witness walk.
std::optional<std::vector<Vertex>> h_walk_exists(const Instance& inst, Vertex u, Vertex v,
                                                 ArcFilter f = {}, const Caps& caps = {});

/// Every simple H-path starting at u within the filter, lexicographic order,
/// at most max_arcs arcs each (0 = unbounded). fn returning false stops the
/// enumeration. Emitted-path count is budgeted by caps.max_paths.
void for_each_h_path(const Instance& inst, Vertex u, ArcFilter f, const Caps& caps,
                     std::size_t max_arcs,
                     const std::function<bool(const std::vector<Vertex>&)>& fn);

std::vector<std::vector<Vertex>> enumerate_h_paths(const Instance& inst, Vertex u,
                                                   ArcFilter f = {}, const Caps& caps = {},
                                                   std::size_t max_arcs = 0);

/// Every H-walk within the filter of 1..max_arcs arcs, any endpoints,
/// deterministic order. Used by the lemma campaigns; budgeted by caps.max_paths.
void for_each_h_walk(const Instance& inst, ArcFilter f, const Caps& caps,
                     std::size_t max_arcs,
                     const std::function<bool(const std::vector<Vertex>&)>& fn);

/// Pairwise H-path reachability within a filter. reach.at[u][v] == 1 iff a
/// simple H-path u -> v exists in the filtered subdigraph. Diagonal is 0.
struct ReachMatrix {
    int n = 0;
    std::vector<std::vector<char>> at;
    bool get(Vertex u, Vertex v) const { return at[u][v] != 0; }
};

/// OpenMP-parallel over the pair space (deterministic: cells independent).
ReachMatrix reach_matrix(const Instance& inst, ArcFilter f = {}, const Caps& caps = {});
/// Serial reference implementation, kept for testing and benchmarks.
ReachMatrix reach_matrix_serial(const Instance& inst, ArcFilter f = {}, const Caps& caps = {});

} // namespace hkd
