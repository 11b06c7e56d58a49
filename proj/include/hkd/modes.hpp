#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkd/kernel.hpp"
#include "hkd/structure.hpp"

namespace hkd {

/// Exact classification of A(H). Precedence: Empty beats LoopsOnly beats
/// CompleteLoopless beats Acyclic (loops count as cycles) beats General.
enum class PatternShape { Empty, LoopsOnly, CompleteLoopless, Acyclic, General };

PatternShape classify_pattern(const PatternDigraph& h);
std::string shape_name(PatternShape s);

/// Definitional checkers for the specialized kernel notions. They work on the
/// digraph and its arc colors directly and never touch the H-path machinery,
/// so they can cross-check it. classical/mp are polynomial; pcp/rainbow run a
/// pruned simple-path DFS budgeted by caps.max_paths.
CheckResult is_classical_kernel(const Instance& in, const std::vector<Vertex>& S);
CheckResult is_mp_kernel(const Instance& in, const std::vector<Vertex>& S);
CheckResult is_pcp_kernel(const Instance& in, const std::vector<Vertex>& S,
                          const Caps& caps = {});
CheckResult is_rainbow_kernel(const Instance& in, const std::vector<Vertex>& S,
                              const Caps& caps = {});

/// First violation of "every chromatic class is transitive" (two same-colored
/// consecutive arcs whose shortcut arc is missing, differently colored, or
/// would have to be a loop), or nullopt.
std::optional<nlohmann::json> transitive_class_violation(const Instance& in);

/// Kernel routes for plain colored digraphs (pattern arcs and partition of the
/// input are ignored; the routes construct their own). The guaranteed routes
/// throw precondition_error when the route's preconditions fail and
/// internal_error if a construction step the math guarantees ever misbehaves;
/// every returned kernel has been re-verified by the definitional checker.
struct ModeResult {
    std::vector<Vertex> kernel;
    nlohmann::json detail;
};

/// Monochromatic-path kernel when the color-class digraph is bipartite:
/// singleton classes, sides from the 2-coloring, loop-only pattern, pipeline.
ModeResult mp_kernel_via_bipartite_ccd(const Instance& in, const Caps& caps = {});

/// Disjoint doubling: D plus a renamed copy, complete loopless pattern per
/// copy, two classes (originals / copies) split across the sides. Requires
/// every chromatic class transitive and at least one arc.
Instance double_instance(const Instance& in);

/// Properly-colored-path kernel for digraphs with transitive chromatic classes
/// and no isolated vertices: pipeline on the doubled instance, intersected
/// with the original vertices.
ModeResult pcp_kernel_via_transitive_classes(const Instance& in, const Caps& caps = {});

/// Rainbow-path kernel: the pcp route plus "the color-class digraph has no
/// cycle of length at least two" (loops permitted), re-verified rainbow.
ModeResult rainbow_kernel(const Instance& in, const Caps& caps = {});

/// Splice a uv- and a vw-properly-colored path into a uw- one (u, v, w
/// distinct, classes transitive): cut at the first vertex of p1 on p2, with a
/// same-class shortcut arc when the junction colors coincide.
std::vector<Vertex> concat_pcp(const Instance& in, const std::vector<Vertex>& p1,
                               const std::vector<Vertex>& p2);

/// Plain kernel for a digraph whose arcs are tagged "1"/"2" naming two acyclic
/// spanning subdigraphs: requires 3-transitivity (every length-3 path has its
/// endpoint arc) and no directed triangle. Empty tag side: reverse-topological
/// kernel of the acyclic whole. Otherwise: fresh color per arc, empty pattern,
/// singleton classes sided by tag, pipeline.
ModeResult three_transitive_kernel(const Instance& in, const Caps& caps = {});

/// Plain kernel, existence not guaranteed: reverse-topological route on
/// acyclic digraphs, canonical brute-force subset scan otherwise.
struct ClassicalResult {
    std::optional<std::vector<Vertex>> kernel;
    nlohmann::json detail;
};

ClassicalResult classical_kernel(const Instance& in, const Caps& caps = {});

} // namespace hkd
