#include "hkd/kernel.hpp"

#include <algorithm>
#include <bit>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

using nlohmann::json;

namespace hkd {

std::uint64_t mask_of(const std::vector<Vertex>& S) {
    std::uint64_t m = 0;
    for (Vertex v : S) m |= std::uint64_t(1) << v;
    return m;
}

std::vector<Vertex> set_of(std::uint64_t mask) {
    std::vector<Vertex> s;
    while (mask) {
        s.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return s;
}

bool mask_canonical_less(std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    while (a && b) {
        int la = std::countr_zero(a), lb = std::countr_zero(b);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return false; // equal
}

namespace {

void check_subset_caps(const Instance& inst, const Caps& caps) {
    if (inst.n() > caps.max_subsets)
        throw cap_exceeded("instance has " + std::to_string(inst.n()) +
                           " vertices, above the subset-enumeration cap of " +
                           std::to_string(caps.max_subsets) +
                           " (raise --max-subsets to override)");
    if (inst.n() > 63)
        throw cap_exceeded("subset enumeration is limited to 63 vertices");
}

// Reachability rows as bitmasks for the subset machinery.
std::vector<std::uint64_t> reach_rows(const ReachMatrix& r) {
    std::vector<std::uint64_t> rows(r.n, 0);
    for (int u = 0; u < r.n; ++u)
        for (int v = 0; v < r.n; ++v)
            if (r.at[u][v]) rows[u] |= std::uint64_t(1) << v;
    return rows;
}

std::vector<std::uint64_t> reach_cols(const ReachMatrix& r) {
    std::vector<std::uint64_t> cols(r.n, 0);
    for (int u = 0; u < r.n; ++u)
        for (int v = 0; v < r.n; ++v)
            if (r.at[u][v]) cols[v] |= std::uint64_t(1) << u;
    return cols;
}

bool mask_independent(const std::vector<std::uint64_t>& fwd, std::uint64_t S) {
    for (std::uint64_t m = S; m;) {
        int u = std::countr_zero(m);
        m &= m - 1;
        if (fwd[u] & S) return false;
    }
    return true;
}

bool mask_absorbent(const std::vector<std::uint64_t>& fwd, std::uint64_t S, int n) {
    for (int u = 0; u < n; ++u) {
        if ((S >> u) & 1) continue;
        if (!(fwd[u] & S)) return false;
    }
    return true;
}

bool mask_kernel(const std::vector<std::uint64_t>& fwd, std::uint64_t S, int n) {
    return mask_independent(fwd, S) && mask_absorbent(fwd, S, n);
}

std::vector<Vertex> canon_set(const Instance& inst, std::vector<Vertex> S) {
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    for (Vertex v : S)
        if (v < 0 || v >= inst.n())
            throw precondition_error("vertex index out of range: " + std::to_string(v));
    return S;
}

} // namespace

CheckResult is_h_independent(const Instance& inst, const std::vector<Vertex>& S_in,
                             const Caps& caps) {
    auto S = canon_set(inst, S_in);
    for (Vertex u : S)
        for (Vertex v : S) {
            if (u == v) continue;
            if (auto p = h_path_exists(inst, u, v, {}, caps))
                return {false,
                        {{"kind", "independence-violation"},
                         {"from", inst.vname(u)},
                         {"to", inst.vname(v)},
                         {"path", inst.names(*p)}}};
        }
    return {};
}

CheckResult is_h_absorbent(const Instance& inst, const std::vector<Vertex>& S_in,
                           const Caps& caps) {
    auto S = canon_set(inst, S_in);
    std::vector<char> in_s(inst.n(), 0);
    for (Vertex v : S) in_s[v] = 1;
    for (Vertex u = 0; u < inst.n(); ++u) {
        if (in_s[u]) continue;
        bool absorbed = false;
        for (Vertex v : S)
            if (h_path_exists(inst, u, v, {}, caps)) {
                absorbed = true;
                break;
            }
        if (!absorbed)
            return {false, {{"kind", "unabsorbed-vertex"}, {"vertex", inst.vname(u)}}};
    }
    return {};
}

CheckResult is_h_kernel(const Instance& inst, const std::vector<Vertex>& S,
                        const Caps& caps) {
    auto ind = is_h_independent(inst, S, caps);
    if (!ind.ok) return ind;
    return is_h_absorbent(inst, S, caps);
}

std::optional<std::vector<Vertex>> find_h_kernel_serial(const Instance& inst,
                                                        const Caps& caps) {
    check_subset_caps(inst, caps);
    const int n = inst.n();
    auto fwd = reach_rows(reach_matrix_serial(inst, {}, caps));
    // Canonical order: sizes ascending, members lexicographic.
    for (int s = 1; s <= n; ++s) {
        std::vector<int> comb(s);
        for (int i = 0; i < s; ++i) comb[i] = i;
        while (true) {
            std::uint64_t mask = 0;
            for (int i : comb) mask |= std::uint64_t(1) << i;
            if (mask_kernel(fwd, mask, n)) return set_of(mask);
            int i = s - 1;
            while (i >= 0 && comb[i] == n - s + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return std::nullopt;
}

std::optional<std::vector<Vertex>> find_h_kernel(const Instance& inst, const Caps& caps) {
    check_subset_caps(inst, caps);
    const int n = inst.n();
    auto fwd = reach_rows(reach_matrix(inst, {}, caps));
    const std::int64_t total = std::int64_t(1) << n;
    std::uint64_t best = 0;
    bool found = false;
#ifdef _OPENMP
#pragma omp parallel
    {
        std::uint64_t local = 0;
        bool local_found = false;
#pragma omp for schedule(static)
        for (std::int64_t m = 1; m < total; ++m) {
            std::uint64_t mask = static_cast<std::uint64_t>(m);
            if (mask_kernel(fwd, mask, n) &&
                (!local_found || mask_canonical_less(mask, local))) {
                local = mask;
                local_found = true;
            }
        }
#pragma omp critical
        if (local_found && (!found || mask_canonical_less(local, best))) {
            best = local;
            found = true;
        }
    }
#else
    for (std::int64_t m = 1; m < total; ++m) {
        std::uint64_t mask = static_cast<std::uint64_t>(m);
        if (mask_kernel(fwd, mask, n) && (!found || mask_canonical_less(mask, best))) {
            best = mask;
            found = true;
        }
    }
#endif
    if (!found) return std::nullopt;
    return set_of(best);
}

std::vector<std::vector<Vertex>> all_h_kernels(const Instance& inst, const Caps& caps) {
    check_subset_caps(inst, caps);
    const int n = inst.n();
    auto fwd = reach_rows(reach_matrix(inst, {}, caps));
    const std::int64_t total = std::int64_t(1) << n;
    std::vector<std::uint64_t> masks;
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(static)
        for (std::int64_t m = 1; m < total; ++m)
            if (mask_kernel(fwd, static_cast<std::uint64_t>(m), n))
                local.push_back(static_cast<std::uint64_t>(m));
#pragma omp critical
        masks.insert(masks.end(), local.begin(), local.end());
    }
#else
    for (std::int64_t m = 1; m < total; ++m)
        if (mask_kernel(fwd, static_cast<std::uint64_t>(m), n))
            masks.push_back(static_cast<std::uint64_t>(m));
#endif
    std::sort(masks.begin(), masks.end(), mask_canonical_less);
    std::vector<std::vector<Vertex>> out;
    out.reserve(masks.size());
    for (auto m : masks) out.push_back(set_of(m));
    return out;
}

CheckResult is_h_semikernel(const Instance& inst, const std::vector<Vertex>& S_in,
                            ArcFilter scope, const Caps& caps) {
    auto S = canon_set(inst, S_in);
    auto universe = filter_vertex_set(inst, scope);
    std::vector<char> in_u(inst.n(), 0), in_s(inst.n(), 0);
    for (Vertex v : universe) in_u[v] = 1;
    for (Vertex v : S) {
        if (!in_u[v])
            throw precondition_error("set member " + inst.vname(v) +
                                     " lies outside the scope's vertex set");
        in_s[v] = 1;
    }
    auto reach = reach_matrix(inst, scope, caps);
    for (Vertex u : S)
        for (Vertex v : S)
            if (u != v && reach.get(u, v))
                return {false,
                        {{"kind", "independence-violation"},
                         {"from", inst.vname(u)},
                         {"to", inst.vname(v)},
                         {"path", inst.names(*h_path_exists(inst, u, v, scope, caps))}}};
    for (Vertex z : universe) {
        if (in_s[z]) continue;
        bool reached = false;
        for (Vertex s : S) reached = reached || reach.get(s, z);
        if (!reached) continue;
        bool back = false;
        for (Vertex t : S) back = back || reach.get(z, t);
        if (!back)
            return {false, {{"kind", "unreturned-vertex"}, {"vertex", inst.vname(z)}}};
    }
    return {};
}

CheckResult is_h_semikernel_mod_d2(const Instance& inst, const std::vector<Vertex>& S_in,
                                   const Caps& caps) {
    inst.part();
    auto S = canon_set(inst, S_in);
    auto reach_d = reach_matrix(inst, {}, caps);
    auto reach_d1 = reach_matrix(inst, ArcFilter::side(1), caps);
    std::vector<char> in_s(inst.n(), 0);
    for (Vertex v : S) in_s[v] = 1;
    for (Vertex u : S)
        for (Vertex v : S)
            if (u != v && reach_d.get(u, v))
                return {false,
                        {{"kind", "independence-violation"},
                         {"from", inst.vname(u)},
                         {"to", inst.vname(v)},
                         {"path", inst.names(*h_path_exists(inst, u, v, {}, caps))}}};
    for (Vertex z = 0; z < inst.n(); ++z) {
        if (in_s[z]) continue;
        bool reached = false;
        for (Vertex s : S) reached = reached || reach_d1.get(s, z);
        if (!reached) continue;
        bool back = false;
        for (Vertex t : S) back = back || reach_d.get(z, t);
        if (!back)
            return {false, {{"kind", "unreturned-vertex"}, {"vertex", inst.vname(z)}}};
    }
    return {};
}

namespace {

void require_scope_hypotheses(const Instance& inst, SemikernelScope scope,
                              const Caps& caps) {
    auto fail = [](const char* what, json witness) {
        throw precondition_error(what, std::move(witness));
    };
    switch (scope.kind) {
    case SemikernelScope::Kind::Whole:
        if (auto c = find_class_crossing_cycle(inst, {}, caps))
            fail("a cycle of D leaves its chromatic class",
                 {{"cycle", inst.names(c->cycle)}});
        if (auto p = find_class_crossing_pair(inst, {}))
            fail("an H-walk of D leaves its chromatic class",
                 {{"walk", {inst.vname(p->u), inst.vname(p->v), inst.vname(p->w)}}});
        break;
    case SemikernelScope::Kind::InClass: {
        auto verts = filter_vertex_set(inst, ArcFilter::one_class(scope.cls));
        if (verts.empty())
            fail("class subdigraph has no arcs", {{"class", scope.cls + 1}});
        auto reach = reach_matrix(inst, ArcFilter::one_class(scope.cls), caps);
        for (Vertex x : verts)
            for (Vertex y : verts)
                for (Vertex z : verts) {
                    if (x == y || y == z || x == z) continue;
                    if (reach.get(x, y) && reach.get(y, z) && !reach.get(x, z))
                        fail("class subdigraph is not transitive by H-paths",
                             {{"class", scope.cls + 1},
                              {"x", inst.vname(x)},
                              {"y", inst.vname(y)},
                              {"z", inst.vname(z)}});
                }
        break;
    }
    case SemikernelScope::Kind::ModD2:
        for (int s : {1, 2}) {
            if (auto c = find_class_crossing_cycle(inst, ArcFilter::side(s), caps))
                fail("a cycle of a side subdigraph leaves its chromatic class",
                     {{"side", s}, {"cycle", inst.names(c->cycle)}});
            if (auto p = find_class_crossing_pair(inst, ArcFilter::side(s)))
                fail("an H-walk of a side subdigraph leaves its chromatic class",
                     {{"side", s},
                      {"walk", {inst.vname(p->u), inst.vname(p->v), inst.vname(p->w)}}});
        }
        break;
    }
}

} // namespace

Vertex find_singleton_semikernel(const Instance& inst, SemikernelScope scope,
                                 const Caps& caps) {
    require_scope_hypotheses(inst, scope, caps);

    std::vector<Vertex> universe;
    ReachMatrix fwd, ret;
    switch (scope.kind) {
    case SemikernelScope::Kind::Whole:
        universe = filter_vertex_set(inst, {});
        fwd = reach_matrix(inst, {}, caps);
        ret = fwd;
        break;
    case SemikernelScope::Kind::InClass:
        universe = filter_vertex_set(inst, ArcFilter::one_class(scope.cls));
        fwd = reach_matrix(inst, ArcFilter::one_class(scope.cls), caps);
        ret = fwd;
        break;
    case SemikernelScope::Kind::ModD2:
        universe = filter_vertex_set(inst, {});
        fwd = reach_matrix(inst, ArcFilter::side(1), caps);
        ret = reach_matrix(inst, {}, caps);
        break;
    }

    Vertex x = universe.front();
    std::vector<char> seen(inst.n(), 0);
    seen[x] = 1;
    for (int hops = 0; hops <= inst.n(); ++hops) {
        Vertex next = -1;
        for (Vertex y : universe)
            if (y != x && fwd.get(x, y) && !ret.get(y, x)) {
                next = y;
                break;
            }
        if (next < 0) {
            // Chain bottomed out; re-verify before returning.
            std::vector<Vertex> singleton{x};
            CheckResult check =
                scope.kind == SemikernelScope::Kind::ModD2
                    ? is_h_semikernel_mod_d2(inst, singleton, caps)
                    : is_h_semikernel(inst, singleton,
                                      scope.kind == SemikernelScope::Kind::Whole
                                          ? ArcFilter::all()
                                          : ArcFilter::one_class(scope.cls),
                                      caps);
            if (!check.ok)
                throw internal_error("singleton semikernel failed re-verification: " +
                                     check.witness.dump());
            return x;
        }
        if (seen[next])
            throw internal_error("successor chain revisited " + inst.vname(next) +
                                 "; the scope's lemma hypotheses cannot hold");
        seen[next] = 1;
        x = next;
    }
    throw internal_error("successor chain exceeded |V(D)| hops");
}

std::vector<std::uint64_t> semikernel_family_serial(const Instance& inst, const Caps& caps) {
    inst.part();
    check_subset_caps(inst, caps);
    const int n = inst.n();
    auto fwd_d = reach_rows(reach_matrix_serial(inst, {}, caps));
    auto fwd_d1 = reach_rows(reach_matrix_serial(inst, ArcFilter::side(1), caps));
    std::vector<std::uint64_t> fam;
    const std::int64_t total = std::int64_t(1) << n;
    for (std::int64_t m = 1; m < total; ++m) {
        std::uint64_t S = static_cast<std::uint64_t>(m);
        if (!mask_independent(fwd_d, S)) continue;
        std::uint64_t reached = 0;
        for (std::uint64_t t = S; t;) {
            int s = std::countr_zero(t);
            t &= t - 1;
            reached |= fwd_d1[s];
        }
        bool ok = true;
        for (std::uint64_t t = reached & ~S; t && ok;) {
            int z = std::countr_zero(t);
            t &= t - 1;
            ok = (fwd_d[z] & S) != 0;
        }
        if (ok) fam.push_back(S);
    }
    std::sort(fam.begin(), fam.end(), mask_canonical_less);
    return fam;
}

std::vector<std::uint64_t> semikernel_family(const Instance& inst, const Caps& caps) {
    inst.part();
    check_subset_caps(inst, caps);
    const int n = inst.n();
    auto fwd_d = reach_rows(reach_matrix(inst, {}, caps));
    auto fwd_d1 = reach_rows(reach_matrix(inst, ArcFilter::side(1), caps));
    const std::int64_t total = std::int64_t(1) << n;
    std::vector<std::uint64_t> fam;
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(static)
        for (std::int64_t m = 1; m < total; ++m) {
            std::uint64_t S = static_cast<std::uint64_t>(m);
            if (!mask_independent(fwd_d, S)) continue;
            std::uint64_t reached = 0;
            for (std::uint64_t t = S; t;) {
                int s = std::countr_zero(t);
                t &= t - 1;
                reached |= fwd_d1[s];
            }
            bool ok = true;
            for (std::uint64_t t = reached & ~S; t && ok;) {
                int z = std::countr_zero(t);
                t &= t - 1;
                ok = (fwd_d[z] & S) != 0;
            }
            if (ok) local.push_back(S);
        }
#pragma omp critical
        fam.insert(fam.end(), local.begin(), local.end());
    }
#else
    fam = semikernel_family_serial(inst, caps);
#endif
    std::sort(fam.begin(), fam.end(), mask_canonical_less);
    return fam;
}

SemikernelDigraph build_semikernel_digraph(const Instance& inst, const Caps& caps) {
    SemikernelDigraph ds;
    ds.nodes = semikernel_family(inst, caps);
    const int f = static_cast<int>(ds.nodes.size());
    if (f > 5000)
        throw cap_exceeded("semikernel family has " + std::to_string(f) +
                           " sets; the quadratic D_S construction is limited to 5000");
    auto to = reach_cols(reach_matrix(inst, {}, caps));       // who reaches s1 in D
    auto d2 = reach_rows(reach_matrix(inst, ArcFilter::side(2), caps));

    auto has_arc = [&](int i, int j) {
        std::uint64_t s1m = ds.nodes[i], s2m = ds.nodes[j];
        for (std::uint64_t t = s1m; t;) {
            int s1 = std::countr_zero(t);
            t &= t - 1;
            if ((s2m >> s1) & 1) continue;
            if (!(d2[s1] & s2m & ~to[s1])) return false;
        }
        return true;
    };

#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::pair<int, int>> local;
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < std::int64_t(f) * f; ++idx) {
            int i = static_cast<int>(idx / f), j = static_cast<int>(idx % f);
            if (i != j && has_arc(i, j)) local.emplace_back(i, j);
        }
#pragma omp critical
        ds.arcs.insert(ds.arcs.end(), local.begin(), local.end());
    }
#else
    for (int i = 0; i < f; ++i)
        for (int j = 0; j < f; ++j)
            if (i != j && has_arc(i, j)) ds.arcs.emplace_back(i, j);
#endif
    std::sort(ds.arcs.begin(), ds.arcs.end());
    ds.out.assign(f, {});
    for (auto& [i, j] : ds.arcs) ds.out[i].push_back(j);
    return ds;
}

bool ds_is_acyclic(const SemikernelDigraph& ds) {
    const int f = static_cast<int>(ds.nodes.size());
    std::vector<int> state(f, 0); // 0 unseen, 1 on stack, 2 done
    std::vector<int> stack, iter(f, 0);
    for (int s = 0; s < f; ++s) {
        if (state[s]) continue;
        stack.push_back(s);
        state[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            if (iter[u] < static_cast<int>(ds.out[u].size())) {
                int w = ds.out[u][iter[u]++];
                if (state[w] == 1) return false;
                if (state[w] == 0) {
                    state[w] = 1;
                    stack.push_back(w);
                }
            } else {
                state[u] = 2;
                stack.pop_back();
            }
        }
    }
    return true;
}

std::vector<int> ds_sinks(const SemikernelDigraph& ds) {
    std::vector<int> sinks;
    for (int i = 0; i < static_cast<int>(ds.nodes.size()); ++i)
        if (ds.out[i].empty()) sinks.push_back(i);
    return sinks;
}

PipelineResult theorem_pipeline(const Instance& inst, const Caps& caps, TransMode mode,
                                bool bypass_checks) {
    PipelineResult r;
    if (!bypass_checks) {
        r.verdicts = check_all(inst, caps, mode);
        if (!all_pass(r.verdicts))
            throw precondition_error("hypotheses do not hold; the pipeline requires all of them",
                                     verdicts_json(r.verdicts));
    }
    auto structural = [&](const std::string& msg) {
        if (bypass_checks) throw precondition_error(msg + " (checks were bypassed)");
        throw internal_error(msg + "; this contradicts the verified hypotheses");
    };
    r.ds = build_semikernel_digraph(inst, caps);
    if (r.ds.nodes.empty()) structural("the semikernel family is empty");
    if (!ds_is_acyclic(r.ds)) structural("D_S contains a cycle");
    auto sinks = ds_sinks(r.ds);
    if (sinks.empty()) throw internal_error("acyclic nonempty D_S has no sink");
    r.kernel = set_of(r.ds.nodes[sinks.front()]);
    auto check = is_h_kernel(inst, r.kernel, caps);
    if (!check.ok)
        structural("the chosen sink failed H-kernel re-verification: " + check.witness.dump());
    return r;
}

} // namespace hkd
