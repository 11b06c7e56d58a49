#include "hkd/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

namespace hkd {

Ccd color_class_digraph(const Instance& inst) {
    const auto& d = inst.digraph;
    std::vector<char> used(inst.pattern.order(), 0);
    for (auto& a : d.arcs) used[a.color] = 1;

    Ccd ccd;
    std::vector<int> local_of(inst.pattern.order(), -1);
    for (Color c = 0; c < inst.pattern.order(); ++c)
        if (used[c]) {
            local_of[c] = static_cast<int>(ccd.color_of.size());
            ccd.color_of.push_back(c);
            ccd.graph.colors.push_back(inst.cname(c)); // instance colors are sorted
        }

    std::map<std::pair<int, int>, std::array<Vertex, 3>> arcs;
    for (Vertex v = 0; v < inst.n(); ++v)
        for (int ia : d.in[v])
            for (int oa : d.out[v]) {
                int a = local_of[d.arcs[ia].color];
                int b = local_of[d.arcs[oa].color];
                arcs.try_emplace({a, b},
                                 std::array<Vertex, 3>{d.arcs[ia].tail, v, d.arcs[oa].head});
            }
    for (auto& [key, wit] : arcs) {
        ccd.graph.arcs.push_back(key);
        ccd.realize.push_back(wit);
    }
    ccd.graph.rebuild_adj();
    return ccd;
}

void for_each_cycle(const Instance& inst, ArcFilter f, const Caps& caps,
                    const std::function<bool(const std::vector<Vertex>&)>& fn) {
    if (inst.n() > caps.max_vertices)
        throw cap_exceeded("instance has " + std::to_string(inst.n()) +
                           " vertices, above the exhaustive-search cap of " +
                           std::to_string(caps.max_vertices) +
                           " (raise --max-vertices to override)");
    auto admit = arc_mask(inst, f);
    const auto& d = inst.digraph;
    std::uint64_t steps = 0;
    std::vector<char> visited(inst.n(), 0);
    std::vector<Vertex> path;
    bool stop = false;

    // Cycles whose minimum vertex is `start` are found by a DFS from `start`
    // restricted to vertices > start, closing back on start. Each simple cycle
    // appears exactly once, already in canonical rotation.
    std::function<void(Vertex, Vertex)> dfs = [&](Vertex start, Vertex at) {
        if (stop) return;
        for (int a : d.out[at]) {
            if (stop) return;
            if (!admit[a]) continue;
            Vertex next = d.arcs[a].head;
            if (next == start) {
                if (++steps > caps.max_cycles)
                    throw cap_exceeded("cycle enumeration exceeded the budget of " +
                                       std::to_string(caps.max_cycles) +
                                       " (raise --max-cycles to override)");
                if (!fn(path)) stop = true;
                continue;
            }
            if (next < start || visited[next]) continue;
            if (++steps > caps.max_cycles)
                throw cap_exceeded("cycle enumeration exceeded the budget of " +
                                   std::to_string(caps.max_cycles) +
                                   " (raise --max-cycles to override)");
            visited[next] = 1;
            path.push_back(next);
            dfs(start, next);
            path.pop_back();
            visited[next] = 0;
        }
    };

    for (Vertex s = 0; s < inst.n() && !stop; ++s) {
        visited.assign(inst.n(), 0);
        visited[s] = 1;
        path.assign(1, s);
        dfs(s, s);
    }
}

std::vector<std::vector<Vertex>> enumerate_cycles(const Instance& inst, ArcFilter f,
                                                  const Caps& caps) {
    std::vector<std::vector<Vertex>> out;
    for_each_cycle(inst, f, caps, [&](const std::vector<Vertex>& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

std::vector<Vertex> extract_cycle(const Instance& inst, const std::vector<Vertex>& walk) {
    if (walk.size() < 2 || walk.front() != walk.back())
        throw precondition_error("extract_cycle needs a closed walk");
    for (size_t i = 0; i + 1 < walk.size(); ++i)
        if (inst.digraph.arc_index(walk[i], walk[i + 1]) < 0)
            throw precondition_error("not a walk: (" + inst.vname(walk[i]) + ", " +
                                     inst.vname(walk[i + 1]) + ") is not an arc of D");
    std::vector<int> pos_on_stack(inst.n(), -1);
    std::vector<Vertex> stack;
    pos_on_stack[walk[0]] = 0;
    stack.push_back(walk[0]);
    for (size_t i = 1; i < walk.size(); ++i) {
        Vertex v = walk[i];
        if (pos_on_stack[v] >= 0)
            return {stack.begin() + pos_on_stack[v], stack.end()};
        pos_on_stack[v] = static_cast<int>(stack.size());
        stack.push_back(v);
    }
    throw internal_error("closed walk without a repeat"); // unreachable
}

Bipartition bipartition(const PatternDigraph& g) {
    Bipartition r;
    const int n = g.order();
    // Bipartite in the partition-into-independent-sets sense: a loop is an arc
    // inside whichever side holds its vertex, so any loop already fails.
    for (auto& [a, b] : g.arcs)
        if (a == b) {
            r.bipartite = false;
            r.odd = {a};
            return r;
        }
    // Undirected adjacency over the arc relation.
    std::vector<std::vector<int>> nbr(n);
    for (auto& [a, b] : g.arcs) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    for (auto& lst : nbr) {
        std::sort(lst.begin(), lst.end());
        lst.erase(std::unique(lst.begin(), lst.end()), lst.end());
    }
    std::vector<int> color(n, -1), parent(n, -1);
    for (int root = 0; root < n; ++root) {
        if (color[root] >= 0) continue;
        color[root] = 0;
        std::deque<int> q{root};
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int w : nbr[u]) {
                if (color[w] < 0) {
                    color[w] = 1 - color[u];
                    parent[w] = u;
                    q.push_back(w);
                } else if (color[w] == color[u]) {
                    // Odd closed walk: root-path to u, edge to w, path back.
                    std::vector<int> up, wp;
                    for (int x = u; x >= 0; x = parent[x]) up.push_back(x);
                    for (int x = w; x >= 0; x = parent[x]) wp.push_back(x);
                    std::reverse(up.begin(), up.end());
                    r.odd = up;
                    r.odd.insert(r.odd.end(), wp.begin(), wp.end());
                    r.bipartite = false;
                    return r;
                }
            }
        }
    }
    r.bipartite = true;
    for (int v = 0; v < n; ++v) (color[v] == 0 ? r.side_x : r.side_y).push_back(v);
    return r;
}

} // namespace hkd
