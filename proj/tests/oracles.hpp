// Independent reference implementations for cross-checking the library.
// Deliberately naive: plain enumeration, no pruning, no shared helpers beyond
// the instance data itself. Definitions are re-derived from the raw arc and
// pattern lists, not from the library's precomputed adjacency.
#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hkd/instance.hpp"

namespace oracle {

using hkd::Color;
using hkd::Instance;
using hkd::Vertex;

inline bool pattern_has(const Instance& in, Color a, Color b) {
    const auto& arcs = in.pattern.arcs;
    return std::find(arcs.begin(), arcs.end(), std::make_pair(a, b)) != arcs.end();
}

inline int arc_id(const Instance& in, Vertex t, Vertex h) {
    for (int i = 0; i < in.digraph.size(); ++i)
        if (in.digraph.arcs[i].tail == t && in.digraph.arcs[i].head == h) return i;
    return -1;
}

inline bool arc_in_filter(const Instance& in, int arc, hkd::ArcFilter f) {
    using K = hkd::ArcFilter::Kind;
    switch (f.kind) {
    case K::All: return true;
    case K::Side1: return in.arc_side[arc] == 1;
    case K::Side2: return in.arc_side[arc] == 2;
    case K::OneClass: return in.arc_class[arc] == f.cls;
    }
    return false;
}

/// Every simple path from u inside the filter (1..max_arcs arcs), no H-logic.
inline void all_simple_paths(const Instance& in, Vertex u, hkd::ArcFilter f,
                             std::size_t max_arcs,
                             const std::function<void(const std::vector<Vertex>&)>& fn) {
    std::vector<Vertex> path{u};
    std::vector<char> used(in.n(), 0);
    used[u] = 1;
    std::function<void()> go = [&] {
        if (path.size() - 1 >= max_arcs) return;
        for (Vertex v = 0; v < in.n(); ++v) {
            if (used[v]) continue;
            int a = arc_id(in, path.back(), v);
            if (a < 0 || !arc_in_filter(in, a, f)) continue;
            path.push_back(v);
            used[v] = 1;
            fn(path);
            go();
            used[v] = 0;
            path.pop_back();
        }
    };
    go();
}

/// H-walk check straight off the definition (at least one arc, consecutive
/// color pairs scanned against the raw pattern arc list).
inline bool is_h_walk_def(const Instance& in, const std::vector<Vertex>& seq) {
    if (seq.size() < 2) return false;
    std::vector<Color> cols;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        int a = arc_id(in, seq[i], seq[i + 1]);
        if (a < 0) return false;
        cols.push_back(in.digraph.arcs[a].color);
    }
    for (std::size_t i = 0; i + 1 < cols.size(); ++i)
        if (!pattern_has(in, cols[i], cols[i + 1])) return false;
    return true;
}

inline bool is_h_path_def(const Instance& in, const std::vector<Vertex>& seq) {
    std::set<Vertex> distinct(seq.begin(), seq.end());
    return distinct.size() == seq.size() && is_h_walk_def(in, seq);
}

/// H-path existence by exhaustive simple-path enumeration.
inline bool h_path_exists_enum(const Instance& in, Vertex u, Vertex v, hkd::ArcFilter f = {}) {
    if (u == v) return false;
    bool found = false;
    all_simple_paths(in, u, f, static_cast<std::size_t>(in.n()), [&](const auto& p) {
        if (p.back() == v && is_h_path_def(in, p)) found = true;
    });
    return found;
}

/// H-walk existence by breadth-first search over (vertex, last color) states;
/// a different state space than the library's arc-pair automaton.
inline bool h_walk_exists_bfs(const Instance& in, Vertex u, Vertex v, hkd::ArcFilter f = {}) {
    const int m = in.pattern.order();
    std::vector<char> seen(static_cast<std::size_t>(in.n()) * m, 0);
    std::deque<std::pair<Vertex, Color>> q;
    for (int a = 0; a < in.digraph.size(); ++a) {
        const auto& arc = in.digraph.arcs[a];
        if (arc.tail != u || !arc_in_filter(in, a, f)) continue;
        if (arc.head == v) return true;
        if (!seen[arc.head * m + arc.color]) {
            seen[arc.head * m + arc.color] = 1;
            q.emplace_back(arc.head, arc.color);
        }
    }
    while (!q.empty()) {
        auto [x, c] = q.front();
        q.pop_front();
        for (int a = 0; a < in.digraph.size(); ++a) {
            const auto& arc = in.digraph.arcs[a];
            if (arc.tail != x || !arc_in_filter(in, a, f)) continue;
            if (!pattern_has(in, c, arc.color)) continue;
            if (arc.head == v) return true;
            if (!seen[arc.head * m + arc.color]) {
                seen[arc.head * m + arc.color] = 1;
                q.emplace_back(arc.head, arc.color);
            }
        }
    }
    return false;
}

/// Every H-walk inside the filter with 1..max_arcs arcs, by breadth-first
/// expansion of walk prefixes.
inline void all_h_walks(const Instance& in, hkd::ArcFilter f, std::size_t max_arcs,
                        const std::function<void(const std::vector<Vertex>&)>& fn) {
    std::deque<std::vector<Vertex>> q;
    for (int a = 0; a < in.digraph.size(); ++a)
        if (arc_in_filter(in, a, f))
            q.push_back({in.digraph.arcs[a].tail, in.digraph.arcs[a].head});
    while (!q.empty()) {
        std::vector<Vertex> w = std::move(q.front());
        q.pop_front();
        fn(w);
        if (w.size() - 1 >= max_arcs) continue;
        int last = arc_id(in, w[w.size() - 2], w.back());
        for (int a = 0; a < in.digraph.size(); ++a) {
            const auto& arc = in.digraph.arcs[a];
            if (arc.tail != w.back() || !arc_in_filter(in, a, f)) continue;
            if (!pattern_has(in, in.digraph.arcs[last].color, arc.color)) continue;
            std::vector<Vertex> w2 = w;
            w2.push_back(arc.head);
            q.push_back(std::move(w2));
        }
    }
}

/// Bipartiteness by trying all 2^k colorings: loops always fail, and an arc in
/// either direction forbids equal sides.
inline bool bipartite_exhaustive(const hkd::PatternDigraph& g) {
    const int k = g.order();
    for (const auto& [a, b] : g.arcs)
        if (a == b) return false;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << k); ++m) {
        bool ok = true;
        for (const auto& [a, b] : g.arcs)
            if (((m >> a) & 1) == ((m >> b) & 1)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return k == 0;
}

/// Every simple directed cycle, canonical open form (smallest vertex first):
/// depth-first from each start using only larger-or-equal vertices.
inline std::vector<std::vector<Vertex>> all_cycles(const Instance& in, hkd::ArcFilter f = {}) {
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> path;
    std::vector<char> used(in.n(), 0);
    std::function<void(Vertex, Vertex)> go = [&](Vertex s, Vertex cur) {
        for (Vertex v = s; v < in.n(); ++v) {
            int a = arc_id(in, cur, v);
            if (a < 0 || !arc_in_filter(in, a, f)) continue;
            if (v == s) out.push_back(path);
            if (used[v]) continue;
            path.push_back(v);
            used[v] = 1;
            go(s, v);
            used[v] = 0;
            path.pop_back();
        }
    };
    for (Vertex s = 0; s < in.n(); ++s) {
        path.assign(1, s);
        std::fill(used.begin(), used.end(), 0);
        used[s] = 1;
        go(s, s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Obstruction positions of an open walk, by definition.
inline std::vector<int> obstructions_open(const Instance& in, const std::vector<Vertex>& seq) {
    std::vector<int> out;
    for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
        Color c1 = in.digraph.arcs[arc_id(in, seq[i - 1], seq[i])].color;
        Color c2 = in.digraph.arcs[arc_id(in, seq[i], seq[i + 1])].color;
        if (!pattern_has(in, c1, c2)) out.push_back(static_cast<int>(i));
    }
    return out;
}

inline bool segment_in_side(const Instance& in, const std::vector<Vertex>& seq, int from,
                            int to, int side) {
    for (int i = from; i < to; ++i)
        if (in.arc_side[arc_id(in, seq[i], seq[i + 1])] != side) return false;
    return true;
}

/// P3-subdivision existence from u to x by full path enumeration and a direct
/// check of the definition: obstructions exactly at two junctions, first
/// segment in D1, last in D2.
inline bool p3_subdivision_enum(const Instance& in, Vertex u, Vertex x) {
    if (u == x) return false;
    bool found = false;
    all_simple_paths(in, u, hkd::ArcFilter::all(), static_cast<std::size_t>(in.n()),
                     [&](const std::vector<Vertex>& p) {
                         if (found || p.back() != x || p.size() < 4) return;
                         auto obs = obstructions_open(in, p);
                         if (obs.size() != 2) return;
                         const int last = static_cast<int>(p.size()) - 1;
                         if (segment_in_side(in, p, 0, obs[0], 1) &&
                             segment_in_side(in, p, obs[1], last, 2))
                             found = true;
                     });
    return found;
}

inline bool p3_subdivision_anywhere_enum(const Instance& in) {
    for (Vertex u = 0; u < in.n(); ++u)
        for (Vertex x = 0; x < in.n(); ++x)
            if (u != x && p3_subdivision_enum(in, u, x)) return true;
    return false;
}

/// C3-subdivision existence: every cycle, every rotation of its obstruction
/// triple, checked directly against the definition.
inline bool c3_subdivision_enum(const Instance& in) {
    for (const auto& cyc : all_cycles(in)) {
        const int L = static_cast<int>(cyc.size());
        std::vector<int> obs;
        for (int i = 0; i < L; ++i) {
            Color c1 = in.digraph.arcs[arc_id(in, cyc[(i + L - 1) % L], cyc[i])].color;
            Color c2 = in.digraph.arcs[arc_id(in, cyc[i], cyc[(i + 1) % L])].color;
            if (!pattern_has(in, c1, c2)) obs.push_back(i);
        }
        if (obs.size() != 3) continue;
        auto side_ok = [&](int from, int to, int side) {
            for (int i = from; i % L != to % L; ++i)
                if (in.arc_side[arc_id(in, cyc[i % L], cyc[(i + 1) % L])] != side)
                    return false;
            return true;
        };
        for (int r = 0; r < 3; ++r) {
            int j0 = obs[r], j1 = obs[(r + 1) % 3], j2 = obs[(r + 2) % 3];
            if (side_ok(j0, j1 < j0 ? j1 + L : j1, 1) && side_ok(j2, j0 < j2 ? j0 + L : j0, 2))
                return true;
        }
    }
    return false;
}

/// Hypothesis-2 verdict by brute-force H-walk enumeration per side:
/// a violation is an H-walk inside one side whose arcs cross classes.
inline bool hyp2_by_walk_enumeration(const Instance& in) {
    for (int side = 1; side <= 2; ++side) {
        bool bad = false;
        all_h_walks(in, hkd::ArcFilter::side(side), static_cast<std::size_t>(in.n()),
                    [&](const std::vector<Vertex>& w) {
                        std::set<int> classes;
                        for (std::size_t i = 0; i + 1 < w.size(); ++i)
                            classes.insert(in.arc_class[arc_id(in, w[i], w[i + 1])]);
                        if (classes.size() > 1) bad = true;
                    });
        if (bad) return false;
    }
    return true;
}

// ------------------------------------------------------------------ kernels

inline bool member(const std::vector<Vertex>& S, Vertex v) {
    return std::find(S.begin(), S.end(), v) != S.end();
}

/// H-kernel by definition, existence decided with the enumeration primitives.
inline bool h_kernel_def(const Instance& in, const std::vector<Vertex>& S) {
    for (Vertex a : S)
        for (Vertex b : S)
            if (a != b && h_path_exists_enum(in, a, b)) return false;
    for (Vertex v = 0; v < in.n(); ++v) {
        if (member(S, v)) continue;
        bool absorbed = false;
        for (Vertex s : S)
            if (h_path_exists_enum(in, v, s)) {
                absorbed = true;
                break;
            }
        if (!absorbed) return false;
    }
    return true;
}

/// Path-flavored kernel predicates, each by full simple-path enumeration with
/// the flavor's color condition checked on the arc color sequence.
enum class Flavor { Plain, Mono, Proper, Rainbow };

inline bool flavored_path(const Instance& in, const std::vector<Vertex>& p, Flavor fl) {
    std::vector<Color> cols;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        cols.push_back(in.digraph.arcs[arc_id(in, p[i], p[i + 1])].color);
    switch (fl) {
    case Flavor::Plain: return cols.size() == 1;
    case Flavor::Mono:
        for (Color c : cols)
            if (c != cols[0]) return false;
        return true;
    case Flavor::Proper:
        for (std::size_t i = 0; i + 1 < cols.size(); ++i)
            if (cols[i] == cols[i + 1]) return false;
        return true;
    case Flavor::Rainbow: {
        std::set<Color> distinct(cols.begin(), cols.end());
        return distinct.size() == cols.size();
    }
    }
    return false;
}

inline bool flavored_reach(const Instance& in, Vertex u, Vertex v, Flavor fl) {
    bool found = false;
    all_simple_paths(in, u, hkd::ArcFilter::all(), static_cast<std::size_t>(in.n()),
                     [&](const std::vector<Vertex>& p) {
                         if (p.back() == v && flavored_path(in, p, fl)) found = true;
                     });
    return found;
}

inline bool flavored_kernel_def(const Instance& in, const std::vector<Vertex>& S, Flavor fl) {
    for (Vertex a : S)
        for (Vertex b : S)
            if (a != b && flavored_reach(in, a, b, fl)) return false;
    for (Vertex v = 0; v < in.n(); ++v) {
        if (member(S, v)) continue;
        bool absorbed = false;
        for (Vertex s : S)
            if (flavored_reach(in, v, s, fl)) {
                absorbed = true;
                break;
            }
        if (!absorbed) return false;
    }
    return true;
}

/// H-semikernel of the filtered subdigraph, by definition.
inline bool h_semikernel_def(const Instance& in, const std::vector<Vertex>& S,
                             hkd::ArcFilter f) {
    for (Vertex a : S)
        for (Vertex b : S)
            if (a != b && h_path_exists_enum(in, a, b, f)) return false;
    auto universe = hkd::filter_vertex_set(in, f);
    for (Vertex z : universe) {
        if (member(S, z)) continue;
        bool reached = false;
        for (Vertex s : S)
            if (h_path_exists_enum(in, s, z, f)) {
                reached = true;
                break;
            }
        if (!reached) continue;
        bool back = false;
        for (Vertex s : S)
            if (h_path_exists_enum(in, z, s, f)) {
                back = true;
                break;
            }
        if (!back) return false;
    }
    return true;
}

/// H-semikernel modulo D2, by definition: independence in D; z reached from S
/// inside D1 must send an H-path back in D.
inline bool h_semikernel_mod_d2_def(const Instance& in, const std::vector<Vertex>& S) {
    for (Vertex a : S)
        for (Vertex b : S)
            if (a != b && h_path_exists_enum(in, a, b)) return false;
    for (Vertex z = 0; z < in.n(); ++z) {
        if (member(S, z)) continue;
        bool reached = false;
        for (Vertex s : S)
            if (h_path_exists_enum(in, s, z, hkd::ArcFilter::side(1))) {
                reached = true;
                break;
            }
        if (!reached) continue;
        bool back = false;
        for (Vertex s : S)
            if (h_path_exists_enum(in, z, s)) {
                back = true;
                break;
            }
        if (!back) return false;
    }
    return true;
}

} // namespace oracle
