#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "hkd/instance.hpp"

namespace hkd {

/// The color-class digraph C_C(D): vertices are the colors used on arcs of D,
/// with an arc (i, j) iff some vertex of D has an in-arc colored i followed by
/// an out-arc colored j. Loops possible. `realize` keeps one witness triple
/// (u, v, w) of D-vertices per arc, first in scan order.
struct Ccd {
    PatternDigraph graph;                        // over used-color names
    std::vector<Color> color_of;                 // ccd vertex -> instance color
    std::vector<std::array<Vertex, 3>> realize;  // per ccd arc
};

Ccd color_class_digraph(const Instance& inst);

/// Enumerates every simple directed cycle of the filtered subdigraph exactly
/// once, in canonical form (rotated so the smallest vertex is first) and
/// deterministic order (by smallest vertex, then lexicographic on the
/// rotation). fn returning false stops. Exploration is budgeted by
/// caps.max_cycles and the vertex count by caps.max_vertices.
void for_each_cycle(const Instance& inst, ArcFilter f, const Caps& caps,
                    const std::function<bool(const std::vector<Vertex>&)>& fn);

std::vector<std::vector<Vertex>> enumerate_cycles(const Instance& inst, ArcFilter f = {},
                                                  const Caps& caps = {});

/// First simple cycle along a closed walk (first-repeat rule): scanning
/// forward, the cycle that closes earliest. Returned in walk order, open form.
std::vector<Vertex> extract_cycle(const Instance& inst, const std::vector<Vertex>& walk);

/// Bipartiteness of a digraph-over-colors in the partition-into-independent-
/// sets sense: proper 2-coloring of the arc-adjacency ignoring direction, any
/// loop fails. On failure, `odd` holds a loop ([c]) or a closed walk of odd
/// undirected length.
struct Bipartition {
    bool bipartite = false;
    std::vector<int> side_x, side_y; // vertex indices of the pattern digraph
    std::vector<int> odd;
};

Bipartition bipartition(const PatternDigraph& g);

} // namespace hkd
