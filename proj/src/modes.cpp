#include "hkd/modes.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <string>

using nlohmann::json;

namespace hkd {

PatternShape classify_pattern(const PatternDigraph& h) {
    const int m = h.order();
    if (h.arcs.empty()) return PatternShape::Empty;

    bool only_loops = true;
    for (auto& [a, b] : h.arcs)
        if (a != b) only_loops = false;
    bool every_loop = true;
    for (Color c = 0; c < m; ++c)
        if (!h.has_arc(c, c)) every_loop = false;
    if (only_loops && every_loop) return PatternShape::LoopsOnly;

    bool complete_loopless = true;
    for (Color a = 0; a < m && complete_loopless; ++a)
        for (Color b = 0; b < m && complete_loopless; ++b)
            if (h.has_arc(a, b) != (a != b)) complete_loopless = false;
    if (complete_loopless) return PatternShape::CompleteLoopless;

    // Acyclic: loops count as cycles.
    bool has_loop = false;
    for (auto& [a, b] : h.arcs)
        if (a == b) has_loop = true;
    if (!has_loop) {
        std::vector<int> state(m, 0);
        bool cyclic = false;
        std::function<void(Color)> dfs = [&](Color u) {
            state[u] = 1;
            for (Color v = 0; v < m && !cyclic; ++v) {
                if (!h.has_arc(u, v)) continue;
                if (state[v] == 1) cyclic = true;
                else if (state[v] == 0) dfs(v);
            }
            state[u] = 2;
        };
        for (Color s = 0; s < m && !cyclic; ++s)
            if (state[s] == 0) dfs(s);
        if (!cyclic) return PatternShape::Acyclic;
    }
    return PatternShape::General;
}

std::string shape_name(PatternShape s) {
    switch (s) {
    case PatternShape::Empty: return "empty";
    case PatternShape::LoopsOnly: return "loops-only";
    case PatternShape::CompleteLoopless: return "complete-loopless";
    case PatternShape::Acyclic: return "acyclic";
    case PatternShape::General: return "general";
    }
    return "general";
}

namespace {

std::vector<Vertex> canon_members(const Instance& in, std::vector<Vertex> S) {
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    for (Vertex v : S)
        if (v < 0 || v >= in.n())
            throw precondition_error("vertex index out of range: " + std::to_string(v));
    return S;
}

/// BFS inside the single-color subdigraphs; a shortest monochromatic walk is a
/// monochromatic path.
std::optional<std::vector<Vertex>> mono_path(const Instance& in, Vertex u, Vertex v) {
    const auto& d = in.digraph;
    for (Color c = 0; c < in.pattern.order(); ++c) {
        std::vector<int> parent(in.n(), -2);
        std::deque<Vertex> q{u};
        parent[u] = -1;
        while (!q.empty()) {
            Vertex x = q.front();
            q.pop_front();
            for (int a : d.out[x]) {
                if (d.arcs[a].color != c) continue;
                Vertex y = d.arcs[a].head;
                if (parent[y] != -2) continue;
                parent[y] = x;
                if (y == v) {
                    std::vector<Vertex> p{v};
                    for (Vertex t = x; t != -1; t = parent[t]) p.push_back(t);
                    std::reverse(p.begin(), p.end());
                    return p;
                }
                q.push_back(y);
            }
        }
    }
    return std::nullopt;
}

/// Pruned simple-path DFS for properly colored (rainbow=false) or rainbow
/// paths from u into `target`. Both properties are prefix-monotone, so the
/// pruning is exact. `steps` is shared across one checker invocation.
std::optional<std::vector<Vertex>> special_path_to_set(const Instance& in, Vertex u,
                                                       const std::vector<char>& target,
                                                       bool rainbow, const Caps& caps,
                                                       std::uint64_t& steps) {
    const auto& d = in.digraph;
    std::vector<char> visited(in.n(), 0), used_color(in.pattern.order(), 0);
    std::vector<Vertex> path{u};
    visited[u] = 1;
    std::optional<std::vector<Vertex>> found;

    std::function<void(Vertex, Color)> dfs = [&](Vertex at, Color last) {
        for (int a : d.out[at]) {
            if (found) return;
            const DArc& arc = d.arcs[a];
            if (rainbow ? used_color[arc.color] != 0 : arc.color == last) continue;
            Vertex nx = arc.head;
            if (visited[nx]) continue;
            if (++steps > caps.max_paths)
                throw cap_exceeded("colored-path search exceeded the budget of " +
                                   std::to_string(caps.max_paths) +
                                   " (raise --max-paths to override)");
            path.push_back(nx);
            visited[nx] = 1;
            used_color[arc.color] = 1;
            if (target[nx]) {
                found = path;
            } else {
                dfs(nx, arc.color);
            }
            used_color[arc.color] = 0;
            visited[nx] = 0;
            path.pop_back();
        }
    };
    dfs(u, -1);
    return found;
}

CheckResult special_kernel_check(const Instance& in, const std::vector<Vertex>& S_in,
                                 bool rainbow, const Caps& caps) {
    auto S = canon_members(in, S_in);
    std::vector<char> in_s(in.n(), 0);
    for (Vertex v : S) in_s[v] = 1;
    std::uint64_t steps = 0;
    for (Vertex u : S) {
        std::vector<char> target = in_s;
        target[u] = 0;
        if (auto p = special_path_to_set(in, u, target, rainbow, caps, steps))
            return {false,
                    {{"kind", "independence-violation"},
                     {"from", in.vname(u)},
                     {"to", in.vname(p->back())},
                     {"path", in.names(*p)}}};
    }
    for (Vertex u = 0; u < in.n(); ++u) {
        if (in_s[u]) continue;
        if (!special_path_to_set(in, u, in_s, rainbow, caps, steps))
            return {false, {{"kind", "unabsorbed-vertex"}, {"vertex", in.vname(u)}}};
    }
    return {};
}

std::optional<std::vector<Vertex>> find_digraph_cycle(
    const ColoredDigraph& d, const std::function<bool(const DArc&)>& admit) {
    const int n = d.order();
    std::vector<int> state(n, 0), parent(n, -1);
    std::optional<std::vector<Vertex>> out;
    std::function<bool(Vertex)> dfs = [&](Vertex u) -> bool {
        state[u] = 1;
        for (int a : d.out[u]) {
            if (!admit(d.arcs[a])) continue;
            Vertex v = d.arcs[a].head;
            if (state[v] == 1) {
                std::vector<Vertex> cyc{v};
                for (Vertex x = u; x != v; x = parent[x]) cyc.push_back(x);
                std::reverse(cyc.begin() + 1, cyc.end());
                out = cyc;
                return true;
            }
            if (state[v] == 0) {
                parent[v] = u;
                if (dfs(v)) return true;
            }
        }
        state[u] = 2;
        return false;
    };
    for (Vertex s = 0; s < n; ++s)
        if (state[s] == 0 && dfs(s)) return out;
    return std::nullopt;
}

/// Directed cycle of length >= 2 in a digraph over colors, loops ignored.
std::optional<std::vector<int>> pattern_cycle_min2(const PatternDigraph& g) {
    const int n = g.order();
    std::vector<int> state(n, 0), parent(n, -1);
    std::optional<std::vector<int>> out;
    std::function<bool(int)> dfs = [&](int u) -> bool {
        state[u] = 1;
        for (int v = 0; v < n; ++v) {
            if (v == u || !g.has_arc(u, v)) continue;
            if (state[v] == 1) {
                std::vector<int> cyc{v};
                for (int x = u; x != v; x = parent[x]) cyc.push_back(x);
                std::reverse(cyc.begin() + 1, cyc.end());
                out = cyc;
                return true;
            }
            if (state[v] == 0) {
                parent[v] = u;
                if (dfs(v)) return true;
            }
        }
        state[u] = 2;
        return false;
    };
    for (int s = 0; s < n; ++s)
        if (state[s] == 0 && dfs(s)) return out;
    return std::nullopt;
}

/// Unique kernel of an acyclic digraph: reverse topological greedy.
std::vector<Vertex> dag_kernel(const ColoredDigraph& d) {
    const int n = d.order();
    std::vector<int> indeg(n, 0);
    for (auto& a : d.arcs) ++indeg[a.head];
    std::vector<Vertex> topo;
    std::deque<Vertex> q;
    for (Vertex v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    while (!q.empty()) {
        Vertex v = q.front();
        q.pop_front();
        topo.push_back(v);
        for (int a : d.out[v])
            if (--indeg[d.arcs[a].head] == 0) q.push_back(d.arcs[a].head);
    }
    if (static_cast<int>(topo.size()) != n)
        throw internal_error("reverse-topological route invoked on a cyclic digraph");
    std::vector<char> in_k(n, 0);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        bool dominated = false;
        for (int a : d.out[*it])
            if (in_k[d.arcs[a].head]) {
                dominated = true;
                break;
            }
        if (!dominated) in_k[*it] = 1;
    }
    std::vector<Vertex> k;
    for (Vertex v = 0; v < n; ++v)
        if (in_k[v]) k.push_back(v);
    return k;
}

/// Wraps a pipeline failure that the route's construction makes impossible.
PipelineResult run_guaranteed_pipeline(const Instance& pi, const Caps& caps,
                                       const char* route) {
    try {
        return theorem_pipeline(pi, caps);
    } catch (const precondition_error& e) {
        throw internal_error(std::string(route) + " construction failed the hypothesis gate: " +
                             e.what() + " " + e.witness().dump());
    }
}

} // namespace

CheckResult is_classical_kernel(const Instance& in, const std::vector<Vertex>& S_in) {
    auto S = canon_members(in, S_in);
    const auto& d = in.digraph;
    std::vector<char> in_s(in.n(), 0);
    for (Vertex v : S) in_s[v] = 1;
    for (auto& a : d.arcs)
        if (in_s[a.tail] && in_s[a.head])
            return {false,
                    {{"kind", "independence-violation"},
                     {"from", in.vname(a.tail)},
                     {"to", in.vname(a.head)}}};
    for (Vertex u = 0; u < in.n(); ++u) {
        if (in_s[u]) continue;
        bool absorbed = false;
        for (int a : d.out[u])
            if (in_s[d.arcs[a].head]) {
                absorbed = true;
                break;
            }
        if (!absorbed)
            return {false, {{"kind", "unabsorbed-vertex"}, {"vertex", in.vname(u)}}};
    }
    return {};
}

CheckResult is_mp_kernel(const Instance& in, const std::vector<Vertex>& S_in) {
    auto S = canon_members(in, S_in);
    std::vector<char> in_s(in.n(), 0);
    for (Vertex v : S) in_s[v] = 1;
    for (Vertex u : S)
        for (Vertex v : S) {
            if (u == v) continue;
            if (auto p = mono_path(in, u, v)) {
                Color c = in.digraph.arcs[in.digraph.arc_index((*p)[0], (*p)[1])].color;
                return {false,
                        {{"kind", "independence-violation"},
                         {"from", in.vname(u)},
                         {"to", in.vname(v)},
                         {"color", in.cname(c)},
                         {"path", in.names(*p)}}};
            }
        }
    for (Vertex u = 0; u < in.n(); ++u) {
        if (in_s[u]) continue;
        bool absorbed = false;
        for (Vertex v : S)
            if (mono_path(in, u, v)) {
                absorbed = true;
                break;
            }
        if (!absorbed)
            return {false, {{"kind", "unabsorbed-vertex"}, {"vertex", in.vname(u)}}};
    }
    return {};
}

CheckResult is_pcp_kernel(const Instance& in, const std::vector<Vertex>& S,
                          const Caps& caps) {
    return special_kernel_check(in, S, false, caps);
}

CheckResult is_rainbow_kernel(const Instance& in, const std::vector<Vertex>& S,
                              const Caps& caps) {
    return special_kernel_check(in, S, true, caps);
}

std::optional<json> transitive_class_violation(const Instance& in) {
    const auto& d = in.digraph;
    for (Vertex v = 0; v < in.n(); ++v)
        for (int ia : d.in[v])
            for (int oa : d.out[v]) {
                if (d.arcs[ia].color != d.arcs[oa].color) continue;
                Vertex u = d.arcs[ia].tail, w = d.arcs[oa].head;
                Color c = d.arcs[ia].color;
                if (u == w)
                    return json{{"kind", "two-cycle-in-class"},
                                {"class", in.cname(c)},
                                {"cycle", {in.vname(u), in.vname(v)}},
                                {"note", "the required shortcut would be a loop"}};
                int s = d.arc_index(u, w);
                if (s < 0 || d.arcs[s].color != c)
                    return json{{"kind", s < 0 ? "missing-shortcut" : "shortcut-differently-colored"},
                                {"class", in.cname(c)},
                                {"path", {in.vname(u), in.vname(v), in.vname(w)}}};
            }
    return std::nullopt;
}

ModeResult mp_kernel_via_bipartite_ccd(const Instance& in, const Caps& caps) {
    const auto& d = in.digraph;
    json detail;
    auto iso = isolated_vertices(in);
    detail["isolated"] = in.names(iso);

    auto finish = [&](std::vector<Vertex> k, const char* route) {
        std::sort(k.begin(), k.end());
        auto chk = is_mp_kernel(in, k);
        if (!chk.ok)
            throw internal_error("mp route output failed re-verification: " +
                                 chk.witness.dump());
        detail["route"] = route;
        return ModeResult{std::move(k), std::move(detail)};
    };

    if (d.size() == 0) {
        std::vector<Vertex> all(in.n());
        for (Vertex v = 0; v < in.n(); ++v) all[v] = v;
        return finish(std::move(all), "no-arcs");
    }

    Ccd ccd = color_class_digraph(in);
    Bipartition bp = bipartition(ccd.graph);
    if (!bp.bipartite) {
        std::vector<std::string> odd;
        for (int c : bp.odd) odd.push_back(in.cname(ccd.color_of[c]));
        throw precondition_error("the color-class digraph is not bipartite",
                                 {{"odd_closed_walk", odd}});
    }
    auto side_names = [&](const std::vector<int>& side) {
        std::vector<std::string> out;
        for (int c : side) out.push_back(in.cname(ccd.color_of[c]));
        return out;
    };
    detail["side_x"] = side_names(bp.side_x);
    detail["side_y"] = side_names(bp.side_y);

    if (ccd.graph.arcs.empty()) {
        // No two consecutive arcs anywhere, so monochromatic reachability is
        // the arc relation and the sink set is the unique mp-kernel.
        std::vector<Vertex> k;
        for (Vertex v = 0; v < in.n(); ++v)
            if (d.out[v].empty()) k.push_back(v);
        return finish(std::move(k), "no-consecutive-arcs");
    }

    // Some arc of the color-class digraph crosses the sides, so both are
    // nonempty and the full pipeline applies.
    std::vector<char> is_iso(in.n(), 0);
    for (Vertex v : iso) is_iso[v] = 1;
    InstanceBuilder b;
    b.has_partition = true;
    for (int i = 0; i < ccd.graph.order(); ++i) {
        b.colors.push_back(ccd.graph.colors[i]);
        b.pattern_arcs.emplace_back(ccd.graph.colors[i], ccd.graph.colors[i]);
        b.classes.push_back({ccd.graph.colors[i]});
    }
    for (Vertex v = 0; v < in.n(); ++v)
        if (!is_iso[v]) b.vertices.push_back(in.vname(v));
    for (auto& a : d.arcs)
        b.arcs.push_back({in.vname(a.tail), in.vname(a.head), in.cname(a.color)});
    for (int c : bp.side_x) b.side1.push_back(c + 1);
    for (int c : bp.side_y) b.side2.push_back(c + 1);
    Instance pi = b.build();

    PipelineResult pr = run_guaranteed_pipeline(pi, caps, "mp");
    detail["family_size"] = pr.ds.nodes.size();
    std::vector<Vertex> k;
    for (Vertex v : pr.kernel) k.push_back(d.vertex_index(pi.vname(v)));
    k.insert(k.end(), iso.begin(), iso.end());
    return finish(std::move(k), "pipeline");
}

Instance double_instance(const Instance& in) {
    const auto& d = in.digraph;
    if (d.size() == 0)
        throw precondition_error("the doubling construction needs at least one arc");
    if (auto w = transitive_class_violation(in))
        throw precondition_error("a chromatic class is not transitive", *w);

    std::vector<char> used(in.pattern.order(), 0);
    for (auto& a : d.arcs) used[a.color] = 1;
    std::vector<std::string> ucolors;
    for (Color c = 0; c < in.pattern.order(); ++c)
        if (used[c]) ucolors.push_back(in.cname(c));

    std::set<std::string> vnames(d.vertices.begin(), d.vertices.end());
    std::set<std::string> cnames(ucolors.begin(), ucolors.end());
    std::string suf = "*";
    auto collides = [&] {
        for (auto& v : d.vertices)
            if (vnames.count(v + suf)) return true;
        for (auto& c : ucolors)
            if (cnames.count(c + suf)) return true;
        return false;
    };
    while (collides()) suf += "*";

    InstanceBuilder b;
    b.has_partition = true;
    b.colors = ucolors;
    for (auto& c : ucolors) b.colors.push_back(c + suf);
    for (auto& p : ucolors)
        for (auto& q : ucolors) {
            if (p == q) continue;
            b.pattern_arcs.emplace_back(p, q);
            b.pattern_arcs.emplace_back(p + suf, q + suf);
        }
    b.vertices = d.vertices;
    for (auto& v : d.vertices) b.vertices.push_back(v + suf);
    for (auto& a : d.arcs) {
        b.arcs.push_back({in.vname(a.tail), in.vname(a.head), in.cname(a.color)});
        b.arcs.push_back(
            {in.vname(a.tail) + suf, in.vname(a.head) + suf, in.cname(a.color) + suf});
    }
    std::vector<std::string> starred;
    for (auto& c : ucolors) starred.push_back(c + suf);
    b.classes = {ucolors, starred};
    b.side1 = {1};
    b.side2 = {2};
    return b.build();
}

ModeResult pcp_kernel_via_transitive_classes(const Instance& in, const Caps& caps) {
    auto iso = isolated_vertices(in);
    if (!iso.empty())
        throw precondition_error("D has isolated vertices", {{"isolated", in.names(iso)}});
    Instance dd = double_instance(in);

    // The copies are component-disjoint, so per-path search effort matches the
    // original size; only the vertex-count gate widens.
    Caps c2 = caps;
    c2.max_vertices = caps.max_vertices * 2;
    PipelineResult pr = run_guaranteed_pipeline(dd, c2, "pcp");

    json detail;
    detail["route"] = "doubling";
    detail["doubled_kernel"] = dd.names(pr.kernel);
    detail["family_size"] = pr.ds.nodes.size();
    std::vector<Vertex> k;
    for (Vertex v : pr.kernel) {
        int idx = in.digraph.vertex_index(dd.vname(v));
        if (idx >= 0) k.push_back(idx);
    }
    std::sort(k.begin(), k.end());
    auto chk = is_pcp_kernel(in, k, caps);
    if (!chk.ok)
        throw internal_error("pcp route output failed re-verification: " +
                             chk.witness.dump());
    return {std::move(k), std::move(detail)};
}

ModeResult rainbow_kernel(const Instance& in, const Caps& caps) {
    Ccd ccd = color_class_digraph(in);
    if (auto cyc = pattern_cycle_min2(ccd.graph)) {
        std::vector<std::string> names;
        for (int c : *cyc) names.push_back(in.cname(ccd.color_of[c]));
        throw precondition_error(
            "the color-class digraph has a cycle of length at least two",
            {{"cycle", names}});
    }
    ModeResult r = pcp_kernel_via_transitive_classes(in, caps);
    auto chk = is_rainbow_kernel(in, r.kernel, caps);
    if (!chk.ok)
        throw internal_error("pcp kernel failed rainbow re-verification: " +
                             chk.witness.dump());
    r.detail["rainbow_verified"] = true;
    return r;
}

namespace {

std::optional<std::string> pcp_seq_error(const Instance& in, const std::vector<Vertex>& p) {
    if (p.size() < 2) return "a path needs at least two vertices";
    for (Vertex v : p)
        if (v < 0 || v >= in.n()) return "vertex index out of range";
    std::set<Vertex> seen(p.begin(), p.end());
    if (seen.size() != p.size()) return "vertices repeat";
    Color last = -1;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        int a = in.digraph.arc_index(p[i], p[i + 1]);
        if (a < 0)
            return "(" + in.vname(p[i]) + ", " + in.vname(p[i + 1]) + ") is not an arc of D";
        Color c = in.digraph.arcs[a].color;
        if (c == last) return "consecutive arcs share a color";
        last = c;
    }
    return std::nullopt;
}

} // namespace

std::vector<Vertex> concat_pcp(const Instance& in, const std::vector<Vertex>& p1,
                               const std::vector<Vertex>& p2) {
    if (auto e = pcp_seq_error(in, p1))
        throw precondition_error("p1 is not a properly colored path: " + *e);
    if (auto e = pcp_seq_error(in, p2))
        throw precondition_error("p2 is not a properly colored path: " + *e);
    if (p1.back() != p2.front())
        throw precondition_error("p1 must end where p2 starts");
    Vertex u = p1.front(), w = p2.back();
    if (u == w)
        throw precondition_error("the endpoints u, v, w must be three distinct vertices");
    if (auto t = transitive_class_violation(in))
        throw precondition_error("a chromatic class is not transitive", *t);

    std::vector<int> pos(in.n(), -1);
    for (int j = 0; j < static_cast<int>(p2.size()); ++j) pos[p2[j]] = j;
    int i0 = 0;
    while (pos[p1[i0]] < 0) ++i0; // p1.back() is on p2

    const auto& d = in.digraph;
    std::vector<Vertex> out;
    if (p1[i0] == u) {
        out.assign(p2.begin() + pos[u], p2.end());
    } else if (p1[i0] == w) {
        out.assign(p1.begin(), p1.begin() + i0 + 1);
    } else {
        int j = pos[p1[i0]];
        Color c1 = d.arcs[d.arc_index(p1[i0 - 1], p1[i0])].color;
        Color c2 = d.arcs[d.arc_index(p2[j], p2[j + 1])].color;
        if (c1 != c2) {
            out.assign(p1.begin(), p1.begin() + i0 + 1);
            out.insert(out.end(), p2.begin() + j + 1, p2.end());
        } else {
            // Same junction color: the transitive class supplies the shortcut.
            int s = d.arc_index(p1[i0 - 1], p2[j + 1]);
            if (s < 0 || d.arcs[s].color != c1)
                throw internal_error("transitive class is missing the splice shortcut arc");
            out.assign(p1.begin(), p1.begin() + i0);
            out.insert(out.end(), p2.begin() + j + 1, p2.end());
        }
    }

    if (auto e = pcp_seq_error(in, out))
        throw internal_error("spliced sequence failed the properly-colored check: " + *e);
    if (out.front() != u || out.back() != w)
        throw internal_error("splice produced wrong endpoints");
    if (out.size() > p1.size() + p2.size() - 1)
        throw internal_error("splice output exceeds the combined input length");
    return out;
}

ModeResult three_transitive_kernel(const Instance& in, const Caps& caps) {
    const auto& d = in.digraph;
    for (auto& a : d.arcs) {
        const std::string& cn = in.cname(a.color);
        if (cn != "1" && cn != "2")
            throw precondition_error(
                "arc tags must be \"1\" or \"2\" naming the two spanning subdigraphs",
                {{"arc", {in.vname(a.tail), in.vname(a.head)}}, {"tag", cn}});
    }
    for (auto& a : d.arcs)
        for (int oa : d.out[a.head]) {
            Vertex y = d.arcs[oa].head;
            if (y == a.tail) continue;
            if (d.arc_index(y, a.tail) >= 0)
                throw precondition_error(
                    "D contains a directed triangle",
                    {{"triangle", {in.vname(a.tail), in.vname(a.head), in.vname(y)}}});
        }
    for (auto& a1 : d.arcs)
        for (int a2 : d.out[a1.head]) {
            Vertex y = d.arcs[a2].head;
            if (y == a1.tail) continue;
            for (int a3 : d.out[y]) {
                Vertex v = d.arcs[a3].head;
                if (v == a1.tail || v == a1.head) continue;
                if (d.arc_index(a1.tail, v) < 0)
                    throw precondition_error(
                        "D is not 3-transitive",
                        {{"path",
                          {in.vname(a1.tail), in.vname(a1.head), in.vname(y), in.vname(v)}},
                         {"missing_arc", {in.vname(a1.tail), in.vname(v)}}});
            }
        }
    int q1 = 0, q2 = 0;
    for (auto& a : d.arcs) (in.cname(a.color) == "1" ? q1 : q2)++;
    for (int tag = 1; tag <= 2; ++tag) {
        auto admit = [&](const DArc& a) { return in.cname(a.color) == std::to_string(tag); };
        if (auto cyc = find_digraph_cycle(d, admit))
            throw precondition_error("the arcs tagged \"" + std::to_string(tag) +
                                         "\" contain a cycle",
                                     {{"cycle", in.names(*cyc)}});
    }

    json detail;
    auto iso = isolated_vertices(in);
    detail["isolated"] = in.names(iso);
    detail["arcs_tagged_1"] = q1;
    detail["arcs_tagged_2"] = q2;

    auto finish = [&](std::vector<Vertex> k, const char* route) {
        std::sort(k.begin(), k.end());
        auto chk = is_classical_kernel(in, k);
        if (!chk.ok)
            throw internal_error("three-transitive route output failed re-verification: " +
                                 chk.witness.dump());
        detail["route"] = route;
        return ModeResult{std::move(k), std::move(detail)};
    };

    if (q1 == 0 || q2 == 0) {
        // D equals one of its acyclic sides (or has no arcs at all), so the
        // reverse-topological kernel applies directly.
        return finish(dag_kernel(d), q1 + q2 == 0 ? "no-arcs" : "acyclic-whole");
    }

    // Fresh color per arc, empty pattern, singleton classes sided by tag.
    std::vector<char> is_iso(in.n(), 0);
    for (Vertex v : iso) is_iso[v] = 1;
    const int q = d.size();
    const int width = static_cast<int>(std::to_string(q).size());
    auto fresh = [&](int i) {
        std::string s = std::to_string(i + 1);
        return "c" + std::string(width - s.size(), '0') + s;
    };
    InstanceBuilder b;
    b.has_partition = true;
    for (int i = 0; i < q; ++i) {
        b.colors.push_back(fresh(i));
        b.classes.push_back({fresh(i)});
        (in.cname(d.arcs[i].color) == "1" ? b.side1 : b.side2).push_back(i + 1);
    }
    for (Vertex v = 0; v < in.n(); ++v)
        if (!is_iso[v]) b.vertices.push_back(in.vname(v));
    for (int i = 0; i < q; ++i)
        b.arcs.push_back({in.vname(d.arcs[i].tail), in.vname(d.arcs[i].head), fresh(i)});
    Instance pi = b.build();

    PipelineResult pr = run_guaranteed_pipeline(pi, caps, "three-transitive");
    detail["family_size"] = pr.ds.nodes.size();
    std::vector<Vertex> k;
    for (Vertex v : pr.kernel) k.push_back(d.vertex_index(pi.vname(v)));
    k.insert(k.end(), iso.begin(), iso.end());
    return finish(std::move(k), "fresh-colors");
}

ClassicalResult classical_kernel(const Instance& in, const Caps& caps) {
    const auto& d = in.digraph;
    ClassicalResult r;
    if (!find_digraph_cycle(d, [](const DArc&) { return true; })) {
        r.detail["route"] = "acyclic-reverse-topological";
        r.kernel = dag_kernel(d);
    } else {
        r.detail["route"] = "brute-force";
        const int n = in.n();
        if (n > caps.max_subsets)
            throw cap_exceeded("instance has " + std::to_string(n) +
                               " vertices, above the subset-enumeration cap of " +
                               std::to_string(caps.max_subsets) +
                               " (raise --max-subsets to override)");
        if (n > 63) throw cap_exceeded("subset enumeration is limited to 63 vertices");
        std::vector<std::uint64_t> step(n, 0);
        for (auto& a : d.arcs) step[a.tail] |= std::uint64_t(1) << a.head;
        auto is_kernel = [&](std::uint64_t S) {
            for (std::uint64_t m = S; m;) {
                int u = std::countr_zero(m);
                m &= m - 1;
                if (step[u] & S) return false;
            }
            for (int u = 0; u < n; ++u)
                if (!((S >> u) & 1) && !(step[u] & S)) return false;
            return true;
        };
        for (int s = 1; s <= n && !r.kernel; ++s) {
            std::vector<int> comb(s);
            for (int i = 0; i < s; ++i) comb[i] = i;
            while (true) {
                std::uint64_t mask = 0;
                for (int i : comb) mask |= std::uint64_t(1) << i;
                if (is_kernel(mask)) {
                    r.kernel = set_of(mask);
                    break;
                }
                int i = s - 1;
                while (i >= 0 && comb[i] == n - s + i) --i;
                if (i < 0) break;
                ++comb[i];
                for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
            }
        }
    }
    if (r.kernel) {
        auto chk = is_classical_kernel(in, *r.kernel);
        if (!chk.ok)
            throw internal_error("plain kernel route failed re-verification: " +
                                 chk.witness.dump());
    }
    return r;
}

} // namespace hkd
