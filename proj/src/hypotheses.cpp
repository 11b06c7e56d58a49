#include "hkd/hypotheses.hpp"

#include <algorithm>
#include <set>

#include "hkd/structure.hpp"

using nlohmann::json;

namespace hkd {

std::optional<CycleCrossing> find_class_crossing_cycle(const Instance& inst, ArcFilter f,
                                                       const Caps& caps) {
    inst.part();
    std::optional<CycleCrossing> found;
    for_each_cycle(inst, f, caps, [&](const std::vector<Vertex>& cyc) {
        int first = -1;
        for (size_t i = 0; i < cyc.size(); ++i) {
            int a = inst.digraph.arc_index(cyc[i], cyc[(i + 1) % cyc.size()]);
            int cls = inst.arc_class[a];
            if (first < 0) first = cls;
            if (cls != first) {
                found = CycleCrossing{cyc, first, cls};
                return false;
            }
        }
        return true;
    });
    return found;
}

std::optional<PairCrossing> find_class_crossing_pair(const Instance& inst, ArcFilter f) {
    inst.part();
    const auto& d = inst.digraph;
    for (Vertex v = 0; v < inst.n(); ++v)
        for (int ia : d.in[v]) {
            if (!f.admits(inst, ia)) continue;
            for (int oa : d.out[v]) {
                if (!f.admits(inst, oa)) continue;
                if (!inst.pattern.has_arc(d.arcs[ia].color, d.arcs[oa].color)) continue;
                if (inst.arc_class[ia] == inst.arc_class[oa]) continue;
                return PairCrossing{d.arcs[ia].tail, v, d.arcs[oa].head,
                                    inst.arc_class[ia], inst.arc_class[oa]};
            }
        }
    return std::nullopt;
}

json SubdivisionWitness::to_json(const Instance& inst) const {
    json j;
    j["closed"] = closed;
    j["carrier"] = inst.names(carrier);
    j["junctions"] = junctions;
    return j;
}

std::optional<SubdivisionWitness> find_c3_subdivision(const Instance& inst,
                                                      const Caps& caps) {
    inst.part();
    std::optional<SubdivisionWitness> found;
    for_each_cycle(inst, ArcFilter::all(), caps, [&](const std::vector<Vertex>& cyc) {
        const int len = static_cast<int>(cyc.size());
        std::vector<Vertex> closed(cyc);
        closed.push_back(cyc[0]);
        auto obs = obstructions(inst, closed);
        if (obs.size() != 3) return true;
        auto segment_in_side = [&](int from, int to, int side) {
            for (int i = from; i % len != to % len; ++i) {
                int a = inst.digraph.arc_index(cyc[i % len], cyc[(i + 1) % len]);
                if (inst.arc_side[a] != side) return false;
            }
            return true;
        };
        for (int r = 0; r < 3; ++r) {
            int u0 = obs[r], v0 = obs[(r + 1) % 3], w0 = obs[(r + 2) % 3];
            if (!segment_in_side(u0, v0 + (v0 < u0 ? len : 0), 1)) continue;
            if (!segment_in_side(w0, u0 + (u0 < w0 ? len : 0), 2)) continue;
            SubdivisionWitness w;
            w.closed = true;
            for (int i = 0; i < len; ++i) w.carrier.push_back(cyc[(u0 + i) % len]);
            w.junctions = {0, (v0 - u0 + len) % len, (w0 - u0 + len) % len};
            found = w;
            return false;
        }
        return true;
    });
    return found;
}

Verdict check_transitivity(const Instance& inst, const Caps& caps, TransMode mode) {
    Verdict v{"T", true, nullptr};
    const auto& p = inst.part();
    std::optional<ReachMatrix> reach_d;
    if (mode == TransMode::ConclusionInD) reach_d = reach_matrix(inst, {}, caps);
    for (int i = 0; i < p.k(); ++i) {
        auto verts = filter_vertex_set(inst, ArcFilter::one_class(i));
        auto reach = reach_matrix(inst, ArcFilter::one_class(i), caps);
        const auto& concl = mode == TransMode::WithinClass ? reach : *reach_d;
        for (Vertex x : verts)
            for (Vertex y : verts) {
                if (y == x || !reach.get(x, y)) continue;
                for (Vertex z : verts) {
                    if (z == x || z == y || !reach.get(y, z)) continue;
                    if (!concl.get(x, z)) {
                        v.pass = false;
                        v.witness = {{"kind", "transitivity-violation"},
                                     {"class", i + 1},
                                     {"x", inst.vname(x)},
                                     {"y", inst.vname(y)},
                                     {"z", inst.vname(z)}};
                        return v;
                    }
                }
            }
    }
    return v;
}

Verdict check_standing(const Instance& inst, const Caps& caps, TransMode mode) {
    Verdict v{"T", true, nullptr};
    auto iso = isolated_vertices(inst);
    if (!iso.empty()) {
        v.pass = false;
        v.witness = {{"kind", "isolated-vertex"}, {"vertex", inst.vname(iso.front())}};
        return v;
    }
    const auto& p = inst.part();
    std::vector<char> class_used(p.k(), 0);
    for (int cls : inst.arc_class) class_used[cls] = 1;
    for (int i = 0; i < p.k(); ++i)
        if (!class_used[i]) {
            json colors = json::array();
            for (Color c : p.classes[i]) colors.push_back(inst.cname(c));
            v.pass = false;
            v.witness = {{"kind", "class-without-arcs"}, {"class", i + 1}, {"colors", colors}};
            return v;
        }
    return check_transitivity(inst, caps, mode);
}

Verdict check_hyp1(const Instance& inst, const Caps& caps) {
    Verdict v{"1", true, nullptr};
    for (int s : {1, 2}) {
        auto cross = find_class_crossing_cycle(inst, ArcFilter::side(s), caps);
        if (cross) {
            v.pass = false;
            v.witness = {{"kind", "class-crossing-cycle"},
                         {"side", s},
                         {"cycle", inst.names(cross->cycle)},
                         {"classes", {cross->class_a + 1, cross->class_b + 1}}};
            return v;
        }
    }
    return v;
}

Verdict check_hyp2(const Instance& inst) {
    Verdict v{"2", true, nullptr};
    for (int s : {1, 2}) {
        auto cross = find_class_crossing_pair(inst, ArcFilter::side(s));
        if (cross) {
            v.pass = false;
            v.witness = {{"kind", "class-crossing-pair"},
                         {"side", s},
                         {"walk", {inst.vname(cross->u), inst.vname(cross->v), inst.vname(cross->w)}},
                         {"classes", {cross->class_a + 1, cross->class_b + 1}}};
            return v;
        }
    }
    return v;
}

Verdict check_hyp3(const Instance& inst) {
    Verdict v{"3", true, nullptr};
    const auto& p = inst.part();
    Ccd ccd = color_class_digraph(inst);
    for (size_t e = 0; e < ccd.graph.arcs.size(); ++e) {
        Color a = ccd.color_of[ccd.graph.arcs[e].first];
        Color b = ccd.color_of[ccd.graph.arcs[e].second];
        int sa = p.side[p.class_of[a]], sb = p.side[p.class_of[b]];
        if (sa == sb) continue;
        if (inst.pattern.has_arc(a, b)) {
            const auto& w = ccd.realize[e];
            v.pass = false;
            v.witness = {{"kind", "cross-side-pattern-arc"},
                         {"colors", {inst.cname(a), inst.cname(b)}},
                         {"realized_at", {inst.vname(w[0]), inst.vname(w[1]), inst.vname(w[2])}}};
            return v;
        }
    }
    return v;
}

Verdict check_hyp4(const Instance& inst, const Caps& caps) {
    Verdict v{"4", true, nullptr};
    if (auto w = find_c3_subdivision(inst, caps)) {
        v.pass = false;
        v.witness = {{"kind", "c3-subdivision"}, {"subdivision", w->to_json(inst)}};
    }
    return v;
}

namespace {

/// DFS over simple paths from `start` tracking obstruction positions. Segment
/// rules prune: before the first obstruction only side-1 arcs can appear (they
/// will be part of T1), after the second only side-2 arcs (T3), and a third
/// obstruction kills the branch. Every surviving state with two obstructions
/// is a P3-subdivision from start to path.back(); fn is called on each such
/// state and returns false to stop the scan. `steps` counts extensions across
/// calls against caps.max_paths.
void p3_scan(const Instance& inst, const Caps& caps, Vertex start, std::uint64_t& steps,
             const std::function<bool(const std::vector<Vertex>&, const std::vector<int>&)>& fn) {
    const auto& d = inst.digraph;
    std::vector<char> visited(inst.n(), 0);
    std::vector<Vertex> path{start};
    std::vector<int> obs;
    visited[start] = 1;
    bool stop = false;

    std::function<void(Vertex, int)> dfs = [&](Vertex at, int last_arc) {
        if (stop) return;
        for (int a : d.out[at]) {
            if (stop) return;
            Vertex next = d.arcs[a].head;
            if (visited[next]) continue;
            bool blocks = last_arc >= 0 && !inst.pattern.has_arc(d.arcs[last_arc].color,
                                                                 d.arcs[a].color);
            int count = static_cast<int>(obs.size());
            if (blocks && count == 2) continue;   // third obstruction
            if (!blocks && count == 0 && inst.arc_side[a] != 1) continue; // T1 arc
            if (count == 2 && inst.arc_side[a] != 2) continue;            // T3 arc
            if (blocks && count == 1 && inst.arc_side[a] != 2) continue;  // first T3 arc
            if (++steps > caps.max_paths)
                throw cap_exceeded("subdivision search exceeded the budget of " +
                                   std::to_string(caps.max_paths) +
                                   " steps (raise --max-paths to override)");
            visited[next] = 1;
            path.push_back(next);
            if (blocks) obs.push_back(static_cast<int>(path.size()) - 2);
            if (obs.size() == 2 && !fn(path, obs)) stop = true;
            if (!stop) dfs(next, a);
            if (blocks) obs.pop_back();
            path.pop_back();
            visited[next] = 0;
            if (stop) return;
        }
    };
    dfs(start, -1);
}

} // namespace

Verdict check_hyp5(const Instance& inst, const Caps& caps) {
    Verdict v{"5", true, nullptr};
    inst.part();
    if (inst.n() > caps.max_vertices)
        throw cap_exceeded("instance has " + std::to_string(inst.n()) +
                           " vertices, above the exhaustive-search cap of " +
                           std::to_string(caps.max_vertices) +
                           " (raise --max-vertices to override)");
    auto reach = reach_matrix(inst, {}, caps);
    std::uint64_t steps = 0;
    std::set<std::pair<Vertex, Vertex>> checked;
    for (Vertex u = 0; u < inst.n() && v.pass; ++u)
        p3_scan(inst, caps, u, steps,
                [&](const std::vector<Vertex>& path, const std::vector<int>& obs) {
                    Vertex from = path.front(), to = path.back();
                    if (checked.insert({from, to}).second && !reach.get(from, to)) {
                        v.pass = false;
                        v.witness = {{"kind", "p3-subdivision-without-return"},
                                     {"carrier", inst.names(path)},
                                     {"junctions", obs},
                                     {"from", inst.vname(from)},
                                     {"to", inst.vname(to)}};
                        return false;
                    }
                    return true;
                });
    return v;
}

std::optional<SubdivisionWitness> find_p3_subdivision(const Instance& inst, Vertex u,
                                                      Vertex x, const Caps& caps) {
    inst.part();
    std::optional<SubdivisionWitness> found;
    std::uint64_t steps = 0;
    p3_scan(inst, caps, u, steps,
            [&](const std::vector<Vertex>& path, const std::vector<int>& obs) {
                if (path.back() != x) return true;
                found = SubdivisionWitness{false, path, obs};
                return false;
            });
    return found;
}

std::vector<Verdict> check_all(const Instance& inst, const Caps& caps, TransMode mode) {
    return {check_standing(inst, caps, mode), check_hyp1(inst, caps), check_hyp2(inst),
            check_hyp3(inst), check_hyp4(inst, caps), check_hyp5(inst, caps)};
}

bool all_pass(const std::vector<Verdict>& vs) {
    for (auto& v : vs)
        if (!v.pass) return false;
    return true;
}

json verdicts_json(const std::vector<Verdict>& vs) {
    json arr = json::array();
    for (auto& v : vs) {
        json e;
        e["id"] = v.id;
        e["pass"] = v.pass;
        e["witness"] = v.witness;
        arr.push_back(e);
    }
    return arr;
}

} // namespace hkd
