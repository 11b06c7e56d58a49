#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "hkd/hypotheses.hpp"
#include "hkd/instance.hpp"
#include "hkd/reachability.hpp"

namespace hkd {

struct CheckResult {
    bool ok = true;
    nlohmann::json witness; // null when ok
};

/// H-independence: no H-path in D between distinct members of S.
CheckResult is_h_independent(const Instance& inst, const std::vector<Vertex>& S,
                             const Caps& caps = {});
/// H-absorbency: every vertex outside S has an H-path into S.
CheckResult is_h_absorbent(const Instance& inst, const std::vector<Vertex>& S,
                           const Caps& caps = {});
CheckResult is_h_kernel(const Instance& inst, const std::vector<Vertex>& S,
                        const Caps& caps = {});

/// First H-kernel in canonical order (size ascending, then lexicographic), or
/// nullopt. The parallel version scans the whole subset space with a
/// min-reduction; the serial reference walks subsets in canonical order and
/// stops early. Both need |V(D)| within caps.max_subsets.
std::optional<std::vector<Vertex>> find_h_kernel(const Instance& inst, const Caps& caps = {});
std::optional<std::vector<Vertex>> find_h_kernel_serial(const Instance& inst,
                                                        const Caps& caps = {});
/// Every H-kernel, canonical order.
std::vector<std::vector<Vertex>> all_h_kernels(const Instance& inst, const Caps& caps = {});

/// H-semikernel of the filtered subdigraph: S is H-independent there, and any
/// vertex of the filter's universe reached from S by an H-path inside the
/// filter sends an H-path back into S inside the filter.
CheckResult is_h_semikernel(const Instance& inst, const std::vector<Vertex>& S,
                            ArcFilter scope = {}, const Caps& caps = {});

/// H-semikernel modulo D2: S is H-independent in D, and any vertex reached
/// from S by an H-path contained in D1 sends an H-path back into S in D.
CheckResult is_h_semikernel_mod_d2(const Instance& inst, const std::vector<Vertex>& S,
                                   const Caps& caps = {});

/// Scope for the singleton-semikernel construction: the whole digraph, one
/// class subdigraph G_r, or the modulo-D2 relaxation.
struct SemikernelScope {
    enum class Kind { Whole, InClass, ModD2 };
    Kind kind = Kind::Whole;
    int cls = -1;

    static SemikernelScope whole() { return {}; }
    static SemikernelScope in_class(int r) { return {Kind::InClass, r}; }
    static SemikernelScope mod_d2() { return {Kind::ModD2, -1}; }
};

/// Constructive singleton semikernel via the successor-chain argument: hop to
/// a reachable-but-not-returning vertex until none exists. Checks the scope's
/// lemma hypotheses first (precondition_error on failure with witness) and
/// re-verifies the result. Deterministic: starts at the smallest vertex,
/// always hops to the smallest successor.
Vertex find_singleton_semikernel(const Instance& inst, SemikernelScope scope,
                                 const Caps& caps = {});

/// All nonempty H-semikernels modulo D2 as bitmasks, canonical order
/// (popcount, then lexicographic on the member list).
std::vector<std::uint64_t> semikernel_family(const Instance& inst, const Caps& caps = {});
std::vector<std::uint64_t> semikernel_family_serial(const Instance& inst,
                                                    const Caps& caps = {});

/// D_S over the family: arc (S1, S2) iff S1 != S2 and every s1 of S1 either
/// belongs to S2 or has an H-path inside D2 to some s2 of S2 that has no
/// H-path back to s1 in D.
struct SemikernelDigraph {
    std::vector<std::uint64_t> nodes;       // canonical order
    std::vector<std::pair<int, int>> arcs;  // node indices, sorted
    std::vector<std::vector<int>> out;
};

SemikernelDigraph build_semikernel_digraph(const Instance& inst, const Caps& caps = {});

bool ds_is_acyclic(const SemikernelDigraph& ds);
std::vector<int> ds_sinks(const SemikernelDigraph& ds);

struct PipelineResult {
    std::vector<Vertex> kernel;
    SemikernelDigraph ds;
    std::vector<Verdict> verdicts; // empty when checks bypassed
};

/// The existence proof, run as an algorithm: verify the standing assumption
/// and the five hypotheses, enumerate the semikernel family, build D_S, take
/// its canonical sink, re-verify it as an H-kernel. bypass_checks skips the
/// hypothesis gate for experimentation; downstream failures then surface as
/// precondition_error instead of internal_error.
PipelineResult theorem_pipeline(const Instance& inst, const Caps& caps = {},
                                TransMode mode = TransMode::WithinClass,
                                bool bypass_checks = false);

std::uint64_t mask_of(const std::vector<Vertex>& S);
std::vector<Vertex> set_of(std::uint64_t mask);
/// Canonical subset order: smaller first by (popcount, lexicographic members).
bool mask_canonical_less(std::uint64_t a, std::uint64_t b);

} // namespace hkd
