#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hkd/errors.hpp"

namespace hkd {

using Vertex = int; // index into ColoredDigraph::vertices (name-sorted)
using Color = int;  // index into PatternDigraph::colors (name-sorted)

/// The pattern digraph H. Vertices are the colors; loops allowed. Also reused
/// for the color-class digraph C_C(D), which is a digraph over colors too.
struct PatternDigraph {
    std::vector<std::string> colors;           // sorted, unique
    std::vector<std::pair<Color, Color>> arcs; // sorted, unique
    std::vector<std::vector<char>> adj;        // adjacency matrix over colors

    int order() const { return static_cast<int>(colors.size()); }
    bool has_arc(Color a, Color b) const { return adj[a][b] != 0; }
    int color_index(const std::string& name) const;
    void rebuild_adj();

    bool operator==(const PatternDigraph& o) const {
        return colors == o.colors && arcs == o.arcs;
    }
};

struct DArc {
    Vertex tail;
    Vertex head;
    Color color;
    bool operator==(const DArc&) const = default;
};

/// The loopless host digraph D with its total arc coloring.
struct ColoredDigraph {
    std::vector<std::string> vertices;  // sorted, unique
    std::vector<DArc> arcs;             // sorted by (tail, head); no loops, no parallels
    std::vector<std::vector<int>> out;  // per vertex: arc ids, heads ascending
    std::vector<std::vector<int>> in;   // per vertex: arc ids, tails ascending
    std::vector<std::vector<int>> arc_at; // (tail, head) -> arc id, -1 if absent

    int order() const { return static_cast<int>(vertices.size()); }
    int size() const { return static_cast<int>(arcs.size()); }
    int vertex_index(const std::string& name) const;
    int arc_index(Vertex t, Vertex h) const { return arc_at[t][h]; }
    void rebuild_index();

    bool operator==(const ColoredDigraph& o) const {
        return vertices == o.vertices && arcs == o.arcs;
    }
};

/// Chromatic partition xi = {C_1..C_k} of V(H) plus the split {xi_1, xi_2}.
/// Canonical form: each class sorted, classes ordered lexicographically.
struct ChromaticPartition {
    std::vector<std::vector<Color>> classes;
    std::vector<int> side;     // per class: 1 or 2
    std::vector<int> class_of; // per color: owning class

    int k() const { return static_cast<int>(classes.size()); }

    bool operator==(const ChromaticPartition& o) const {
        return classes == o.classes && side == o.side;
    }
};

/// A validated, canonical instance. Immutable after build(); every view is
/// precomputed here, so const Instance& is safe to share across threads.
struct Instance {
    PatternDigraph pattern;
    ColoredDigraph digraph;
    std::optional<ChromaticPartition> partition;

    std::vector<int> arc_class; // per arc of D (empty without partition)
    std::vector<int> arc_side;  // per arc of D: 1 or 2 (empty without partition)
    std::vector<std::string> warnings;

    const ChromaticPartition& part() const;
    bool partitioned() const { return partition.has_value(); }
    int n() const { return digraph.order(); }

    const std::string& vname(Vertex v) const { return digraph.vertices[v]; }
    const std::string& cname(Color c) const { return pattern.colors[c]; }
    std::vector<std::string> names(const std::vector<Vertex>& vs) const;

    bool operator==(const Instance& o) const {
        return pattern == o.pattern && digraph == o.digraph && partition == o.partition;
    }
};

/// Name-based assembly + validation. Tests and the parser both go through this;
/// build() canonicalizes (sorting, index remapping) and fails loudly on any
/// structural violation.
struct InstanceBuilder {
    std::vector<std::string> colors;
    std::vector<std::pair<std::string, std::string>> pattern_arcs;
    std::vector<std::string> vertices;
    struct RawArc {
        std::string tail, head, color;
    };
    std::vector<RawArc> arcs;
    bool has_pattern = true; // false: infer colors from arcs, no pattern arcs
    bool has_partition = false;
    std::vector<std::vector<std::string>> classes;
    std::vector<int> side1, side2; // 1-based class indices, as in the file format

    Instance build() const;
};

/// Arc filters select the working subdigraph: all of D, a side D_1/D_2, or a
/// single class subdigraph G_m (arc-induced).
struct ArcFilter {
    enum class Kind { All, Side1, Side2, OneClass };
    Kind kind = Kind::All;
    int cls = -1;

    static ArcFilter all() { return {}; }
    static ArcFilter side(int s) {
        return {s == 1 ? Kind::Side1 : Kind::Side2, -1};
    }
    static ArcFilter one_class(int m) { return {Kind::OneClass, m}; }

    bool admits(const Instance& inst, int arc) const;
    std::string label(const Instance& inst) const;
};

std::vector<char> arc_mask(const Instance& inst, ArcFilter f);

/// Vertex universe of the filtered subdigraph: V(D) for All/Side (sides are
/// spanning), endpoints of class arcs for OneClass.
std::vector<Vertex> filter_vertex_set(const Instance& inst, ArcFilter f);

/// Vertices with neither in- nor out-arcs.
std::vector<Vertex> isolated_vertices(const Instance& inst);

} // namespace hkd
