#include "hkd/instance.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace hkd {

int PatternDigraph::color_index(const std::string& name) const {
    auto it = std::lower_bound(colors.begin(), colors.end(), name);
    if (it == colors.end() || *it != name) return -1;
    return static_cast<int>(it - colors.begin());
}

void PatternDigraph::rebuild_adj() {
    adj.assign(colors.size(), std::vector<char>(colors.size(), 0));
    for (auto& [a, b] : arcs) adj[a][b] = 1;
}

int ColoredDigraph::vertex_index(const std::string& name) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), name);
    if (it == vertices.end() || *it != name) return -1;
    return static_cast<int>(it - vertices.begin());
}

void ColoredDigraph::rebuild_index() {
    int n = order();
    out.assign(n, {});
    in.assign(n, {});
    arc_at.assign(n, std::vector<int>(n, -1));
    for (int a = 0; a < size(); ++a) {
        out[arcs[a].tail].push_back(a);
        in[arcs[a].head].push_back(a);
        arc_at[arcs[a].tail][arcs[a].head] = a;
    }
    // arcs are (tail, head)-sorted, so out lists are already head-ascending;
    // in lists need their own sort by tail.
    for (auto& lst : in)
        std::sort(lst.begin(), lst.end(),
                  [&](int x, int y) { return arcs[x].tail < arcs[y].tail; });
}

const ChromaticPartition& Instance::part() const {
    if (!partition)
        throw precondition_error("operation requires a chromatic partition, "
                                 "but the instance has none");
    return *partition;
}

std::vector<std::string> Instance::names(const std::vector<Vertex>& vs) const {
    std::vector<std::string> r;
    r.reserve(vs.size());
    for (Vertex v : vs) r.push_back(vname(v));
    return r;
}

namespace {

void require(bool cond, const std::string& msg, nlohmann::json detail = nullptr) {
    if (!cond) throw validation_error(msg, std::move(detail));
}

std::vector<std::string> sorted_unique_names(std::vector<std::string> names,
                                             const char* what) {
    for (auto& s : names)
        require(!s.empty(), std::string("empty ") + what + " name");
    std::sort(names.begin(), names.end());
    auto dup = std::adjacent_find(names.begin(), names.end());
    require(dup == names.end(),
            std::string("duplicate ") + what + " name: " +
                (dup == names.end() ? "" : *dup));
    return names;
}

} // namespace

Instance InstanceBuilder::build() const {
    Instance inst;

    // Colors: either declared, or (pattern-less mode inputs) collected from arcs.
    std::vector<std::string> color_names;
    if (has_pattern) {
        color_names = colors;
    } else {
        std::set<std::string> used;
        for (auto& a : arcs) used.insert(a.color);
        color_names.assign(used.begin(), used.end());
        require(!color_names.empty(), "digraph has no arcs, so no colors can be inferred");
    }
    inst.pattern.colors = sorted_unique_names(std::move(color_names), "color");
    require(!inst.pattern.colors.empty(), "pattern has no colors");

    for (auto& [a, b] : pattern_arcs) {
        int ia = inst.pattern.color_index(a);
        int ib = inst.pattern.color_index(b);
        require(ia >= 0, "pattern arc references unknown color: " + a);
        require(ib >= 0, "pattern arc references unknown color: " + b);
        inst.pattern.arcs.emplace_back(ia, ib);
    }
    std::sort(inst.pattern.arcs.begin(), inst.pattern.arcs.end());
    auto pdup = std::adjacent_find(inst.pattern.arcs.begin(), inst.pattern.arcs.end());
    require(pdup == inst.pattern.arcs.end(), "duplicate pattern arc");
    inst.pattern.rebuild_adj();

    inst.digraph.vertices = sorted_unique_names(vertices, "vertex");
    require(!inst.digraph.vertices.empty(), "digraph has no vertices");

    std::set<std::pair<int, int>> seen;
    for (auto& ra : arcs) {
        DArc a;
        a.tail = inst.digraph.vertex_index(ra.tail);
        a.head = inst.digraph.vertex_index(ra.head);
        require(a.tail >= 0, "arc references unknown vertex: " + ra.tail);
        require(a.head >= 0, "arc references unknown vertex: " + ra.head);
        require(a.tail != a.head, "loop at vertex " + ra.tail + " (D must be loopless)");
        a.color = inst.pattern.color_index(ra.color);
        require(a.color >= 0, "arc (" + ra.tail + ", " + ra.head + ") has unknown color: " + ra.color);
        require(seen.insert({a.tail, a.head}).second,
                "parallel arc (" + ra.tail + ", " + ra.head + ")");
        inst.digraph.arcs.push_back(a);
    }
    std::sort(inst.digraph.arcs.begin(), inst.digraph.arcs.end(),
              [](const DArc& x, const DArc& y) {
                  return std::pair(x.tail, x.head) < std::pair(y.tail, y.head);
              });
    inst.digraph.rebuild_index();

    if (has_partition) {
        ChromaticPartition p;
        int m = inst.pattern.order();
        std::vector<int> owner(m, -1);
        require(!classes.empty(), "partition has no classes");
        for (size_t ci = 0; ci < classes.size(); ++ci) {
            require(!classes[ci].empty(),
                    "partition class " + std::to_string(ci + 1) + " is empty");
            std::vector<Color> cls;
            for (auto& name : classes[ci]) {
                int c = inst.pattern.color_index(name);
                require(c >= 0, "partition references unknown color: " + name);
                require(owner[c] < 0, "color " + name + " appears in two classes");
                owner[c] = static_cast<int>(ci);
                cls.push_back(c);
            }
            std::sort(cls.begin(), cls.end());
            p.classes.push_back(std::move(cls));
        }
        for (int c = 0; c < m; ++c)
            require(owner[c] >= 0,
                    "color " + inst.pattern.colors[c] + " missing from the partition");

        int k = p.k();
        require(k >= 2, "partition needs at least two classes");
        std::vector<int> side_of(k, 0);
        auto apply_side = [&](const std::vector<int>& idx, int s) {
            for (int i : idx) {
                require(i >= 1 && i <= k,
                        "side" + std::to_string(s) + " index out of range: " + std::to_string(i));
                require(side_of[i - 1] == 0,
                        "class " + std::to_string(i) + " assigned to both sides or twice");
                side_of[i - 1] = s;
            }
        };
        apply_side(side1, 1);
        apply_side(side2, 2);
        require(!side1.empty() && !side2.empty(), "both sides of the partition must be nonempty");
        for (int i = 0; i < k; ++i)
            require(side_of[i] != 0,
                    "class " + std::to_string(i + 1) + " assigned to neither side");
        p.side = side_of;

        // Canonical class order: lexicographic on the (sorted) color lists.
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(),
                  [&](int x, int y) { return p.classes[x] < p.classes[y]; });
        ChromaticPartition canon;
        canon.classes.resize(k);
        canon.side.resize(k);
        for (int i = 0; i < k; ++i) {
            canon.classes[i] = p.classes[perm[i]];
            canon.side[i] = p.side[perm[i]];
        }
        canon.class_of.assign(m, -1);
        for (int i = 0; i < k; ++i)
            for (Color c : canon.classes[i]) canon.class_of[c] = i;
        inst.partition = std::move(canon);

        inst.arc_class.resize(inst.digraph.size());
        inst.arc_side.resize(inst.digraph.size());
        for (int a = 0; a < inst.digraph.size(); ++a) {
            int cls = inst.partition->class_of[inst.digraph.arcs[a].color];
            inst.arc_class[a] = cls;
            inst.arc_side[a] = inst.partition->side[cls];
        }
    }

    for (Vertex v : isolated_vertices(inst))
        inst.warnings.push_back("isolated vertex: " + inst.vname(v));
    {
        std::vector<char> used(inst.pattern.order(), 0);
        for (auto& a : inst.digraph.arcs) used[a.color] = 1;
        for (int c = 0; c < inst.pattern.order(); ++c)
            if (!used[c]) inst.warnings.push_back("color never used on an arc: " + inst.cname(c));
        if (inst.partition) {
            for (int i = 0; i < inst.partition->k(); ++i) {
                bool any = false;
                for (Color c : inst.partition->classes[i]) any = any || used[c];
                if (!any)
                    inst.warnings.push_back("chromatic class " + std::to_string(i + 1) +
                                            " has no arc in D");
            }
        }
    }

    return inst;
}

bool ArcFilter::admits(const Instance& inst, int arc) const {
    switch (kind) {
    case Kind::All: return true;
    case Kind::Side1: return inst.arc_side.at(arc) == 1;
    case Kind::Side2: return inst.arc_side.at(arc) == 2;
    case Kind::OneClass: return inst.arc_class.at(arc) == cls;
    }
    return false;
}

std::string ArcFilter::label(const Instance& inst) const {
    switch (kind) {
    case Kind::All: return "all";
    case Kind::Side1: return "d1";
    case Kind::Side2: return "d2";
    case Kind::OneClass: return "class:" + std::to_string(cls + 1);
    }
    return "?";
}

std::vector<char> arc_mask(const Instance& inst, ArcFilter f) {
    if (f.kind != ArcFilter::Kind::All) inst.part(); // sides/classes need the partition
    std::vector<char> mask(inst.digraph.size());
    for (int a = 0; a < inst.digraph.size(); ++a) mask[a] = f.admits(inst, a) ? 1 : 0;
    return mask;
}

std::vector<Vertex> filter_vertex_set(const Instance& inst, ArcFilter f) {
    if (f.kind != ArcFilter::Kind::OneClass) {
        std::vector<Vertex> all(inst.n());
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<char> hit(inst.n(), 0);
    for (int a = 0; a < inst.digraph.size(); ++a)
        if (f.admits(inst, a)) {
            hit[inst.digraph.arcs[a].tail] = 1;
            hit[inst.digraph.arcs[a].head] = 1;
        }
    std::vector<Vertex> vs;
    for (Vertex v = 0; v < inst.n(); ++v)
        if (hit[v]) vs.push_back(v);
    return vs;
}

std::vector<Vertex> isolated_vertices(const Instance& inst) {
    std::vector<Vertex> r;
    for (Vertex v = 0; v < inst.n(); ++v)
        if (inst.digraph.out[v].empty() && inst.digraph.in[v].empty()) r.push_back(v);
    return r;
}

} // namespace hkd
