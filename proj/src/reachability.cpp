#include "hkd/reachability.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hkd {

namespace {

// Validates walk-ness and returns the arc ids along seq.
std::vector<int> walk_arcs(const Instance& inst, const std::vector<Vertex>& seq) {
    if (seq.size() < 2)
        throw precondition_error("a walk needs at least one arc");
    std::vector<int> ids;
    ids.reserve(seq.size() - 1);
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        int a = inst.digraph.arc_index(seq[i], seq[i + 1]);
        if (a < 0)
            throw precondition_error("not a walk: (" + inst.vname(seq[i]) + ", " +
                                     inst.vname(seq[i + 1]) + ") is not an arc of D");
        ids.push_back(a);
    }
    return ids;
}

void check_path_caps(const Instance& inst, const Caps& caps) {
    if (inst.n() > caps.max_vertices)
        throw cap_exceeded("instance has " + std::to_string(inst.n()) +
                           " vertices, above the exhaustive-search cap of " +
                           std::to_string(caps.max_vertices) +
                           " (raise --max-vertices to override)");
}

} // namespace

bool is_h_walk(const Instance& inst, const std::vector<Vertex>& seq) {
    auto ids = walk_arcs(inst, seq);
    for (size_t i = 0; i + 1 < ids.size(); ++i) {
        Color a = inst.digraph.arcs[ids[i]].color;
        Color b = inst.digraph.arcs[ids[i + 1]].color;
        if (!inst.pattern.has_arc(a, b)) return false;
    }
    return true;
}

bool is_h_path(const Instance& inst, const std::vector<Vertex>& seq) {
    std::vector<Vertex> sorted(seq);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        walk_arcs(inst, seq); // still reject non-walks loudly
        return false;
    }
    return is_h_walk(inst, seq);
}

std::vector<int> obstructions(const Instance& inst, const std::vector<Vertex>& seq) {
    auto ids = walk_arcs(inst, seq);
    const bool closed = seq.front() == seq.back();
    const int n = static_cast<int>(ids.size());
    std::vector<int> out;
    auto blocked = [&](int prev_arc, int next_arc) {
        return !inst.pattern.has_arc(inst.digraph.arcs[prev_arc].color,
                                     inst.digraph.arcs[next_arc].color);
    };
    if (closed && blocked(ids[n - 1], ids[0])) out.push_back(0);
    for (int i = 1; i < n; ++i)
        if (blocked(ids[i - 1], ids[i])) out.push_back(i);
    return out;
}

namespace {

struct PathDfs {
    const Instance& inst;
    std::vector<char> admit;   // per arc
    const Caps& caps;
    std::uint64_t steps = 0;
    std::vector<char> visited;
    std::vector<Vertex> path;

    PathDfs(const Instance& i, ArcFilter f, const Caps& c)
        : inst(i), admit(arc_mask(i, f)), caps(c), visited(i.n(), 0) {}

    void bump() {
        if (++steps > caps.max_paths)
            throw cap_exceeded("path search exceeded the budget of " +
                               std::to_string(caps.max_paths) +
                               " steps (raise --max-paths to override)");
    }

    // Visits every simple H-path extension in lexicographic order. fn gets the
    // current path (>= 1 arc); returning false aborts the whole search.
    bool run(Vertex u, const std::function<bool(const std::vector<Vertex>&)>& fn,
             std::size_t max_arcs) {
        visited[u] = 1;
        path.push_back(u);
        bool go = extend(u, -1, fn, max_arcs);
        path.pop_back();
        visited[u] = 0;
        return go;
    }

    bool extend(Vertex at, Color last,
                const std::function<bool(const std::vector<Vertex>&)>& fn,
                std::size_t max_arcs) {
        if (max_arcs != 0 && path.size() - 1 >= max_arcs) return true;
        for (int a : inst.digraph.out[at]) {
            if (!admit[a]) continue;
            const DArc& arc = inst.digraph.arcs[a];
            if (visited[arc.head]) continue;
            if (last >= 0 && !inst.pattern.has_arc(last, arc.color)) continue;
            bump();
            visited[arc.head] = 1;
            path.push_back(arc.head);
            bool go = fn(path) && extend(arc.head, arc.color, fn, max_arcs);
            path.pop_back();
            visited[arc.head] = 0;
            if (!go) return false;
        }
        return true;
    }
};

} // namespace

std::optional<std::vector<Vertex>> h_path_exists(const Instance& inst, Vertex u, Vertex v,
                                                 ArcFilter f, const Caps& caps) {
    if (u == v) throw precondition_error("h_path_exists needs distinct endpoints");
    check_path_caps(inst, caps);
    PathDfs dfs(inst, f, caps);
    std::optional<std::vector<Vertex>> found;
    dfs.run(u,
            [&](const std::vector<Vertex>& p) {
                if (p.back() == v) {
                    found = p;
                    return false;
                }
                return true;
            },
            0);
    return found;
}

void for_each_h_path(const Instance& inst, Vertex u, ArcFilter f, const Caps& caps,
                     std::size_t max_arcs,
                     const std::function<bool(const std::vector<Vertex>&)>& fn) {
    check_path_caps(inst, caps);
    PathDfs dfs(inst, f, caps);
    dfs.run(u, fn, max_arcs);
}

std::vector<std::vector<Vertex>> enumerate_h_paths(const Instance& inst, Vertex u,
                                                   ArcFilter f, const Caps& caps,
                                                   std::size_t max_arcs) {
    std::vector<std::vector<Vertex>> out;
    for_each_h_path(inst, u, f, caps, max_arcs, [&](const std::vector<Vertex>& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

std::optional<std::vector<Vertex>> h_walk_exists(const Instance& inst, Vertex u, Vertex v,
                                                 ArcFilter f, const Caps& caps) {
    (void)caps; // polynomial; no budget needed
    if (u == v) throw precondition_error("h_walk_exists needs distinct endpoints");
    auto admit = arc_mask(inst, f);
    const auto& d = inst.digraph;
    std::vector<int> parent(d.size(), -2); // -2 unseen, -1 start state
    std::deque<int> queue;
    int accept = -1;
    for (int a : d.out[u]) {
        if (!admit[a]) continue;
        parent[a] = -1;
        if (d.arcs[a].head == v) {
            accept = a;
            break;
        }
        queue.push_back(a);
    }
    while (accept < 0 && !queue.empty()) {
        int a = queue.front();
        queue.pop_front();
        for (int b : d.out[d.arcs[a].head]) {
            if (!admit[b] || parent[b] != -2) continue;
            if (!inst.pattern.has_arc(d.arcs[a].color, d.arcs[b].color)) continue;
            parent[b] = a;
            if (d.arcs[b].head == v) {
                accept = b;
                break;
            }
            queue.push_back(b);
        }
    }
    if (accept < 0) return std::nullopt;
    std::vector<Vertex> walk;
    for (int a = accept; a >= 0; a = parent[a]) walk.push_back(d.arcs[a].head);
    walk.push_back(u);
    std::reverse(walk.begin(), walk.end());
    return walk;
}

void for_each_h_walk(const Instance& inst, ArcFilter f, const Caps& caps,
                     std::size_t max_arcs,
                     const std::function<bool(const std::vector<Vertex>&)>& fn) {
    auto admit = arc_mask(inst, f);
    const auto& d = inst.digraph;
    std::uint64_t emitted = 0;
    std::vector<Vertex> walk;
    std::function<bool(int)> extend = [&](int last_arc) -> bool {
        if (walk.size() - 1 >= max_arcs) return true;
        for (int b : d.out[walk.back()]) {
            if (!admit[b]) continue;
            if (last_arc >= 0 &&
                !inst.pattern.has_arc(d.arcs[last_arc].color, d.arcs[b].color))
                continue;
            if (++emitted > caps.max_paths)
                throw cap_exceeded("walk enumeration exceeded the budget of " +
                                   std::to_string(caps.max_paths) +
                                   " walks (raise --max-paths to override)");
            walk.push_back(d.arcs[b].head);
            bool go = fn(walk) && extend(b);
            walk.pop_back();
            if (!go) return false;
        }
        return true;
    };
    if (max_arcs == 0) return;
    for (Vertex s = 0; s < inst.n(); ++s) {
        walk.assign(1, s);
        if (!extend(-1)) return;
    }
}

namespace {

ReachMatrix reach_impl(const Instance& inst, ArcFilter f, const Caps& caps, bool parallel) {
    check_path_caps(inst, caps);
    ReachMatrix r;
    r.n = inst.n();
    r.at.assign(r.n, std::vector<char>(r.n, 0));
    std::atomic<bool> cap_hit{false};
    std::string cap_msg;

    auto cell = [&](int u, int v) {
        if (u == v || cap_hit.load(std::memory_order_relaxed)) return;
        try {
            if (h_path_exists(inst, u, v, f, caps)) r.at[u][v] = 1;
        } catch (const cap_exceeded& e) {
            bool expected = false;
            if (cap_hit.compare_exchange_strong(expected, true)) cap_msg = e.what();
        }
    };

    const int n = r.n;
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int idx = 0; idx < n * n; ++idx) cell(idx / n, idx % n);
#else
        for (int idx = 0; idx < n * n; ++idx) cell(idx / n, idx % n);
#endif
    } else {
        for (int idx = 0; idx < n * n; ++idx) cell(idx / n, idx % n);
    }
    if (cap_hit.load()) throw cap_exceeded(cap_msg);
    return r;
}

} // namespace

ReachMatrix reach_matrix(const Instance& inst, ArcFilter f, const Caps& caps) {
    return reach_impl(inst, f, caps, true);
}

ReachMatrix reach_matrix_serial(const Instance& inst, ArcFilter f, const Caps& caps) {
    return reach_impl(inst, f, caps, false);
}

} // namespace hkd
