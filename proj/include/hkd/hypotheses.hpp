#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkd/instance.hpp"
#include "hkd/reachability.hpp"

namespace hkd {

/// Containment reading for "G_i is transitive by H-paths": WithinClass asks
/// for the concluding H-path inside G_i (default), ConclusionInD accepts one
/// anywhere in D.
enum class TransMode { WithinClass, ConclusionInD };

struct Verdict {
    std::string id; // "T", "1".."5"
    bool pass = true;
    nlohmann::json witness; // null when pass
};

/// A cycle of the filtered subdigraph whose arcs touch two chromatic classes.
struct CycleCrossing {
    std::vector<Vertex> cycle;
    int class_a, class_b;
};

/// A length-2 H-walk inside the filter whose arcs sit in different classes:
/// arcs (u,v), (v,w) with compatible colors.
struct PairCrossing {
    Vertex u, v, w;
    int class_a, class_b;
};

std::optional<CycleCrossing> find_class_crossing_cycle(const Instance& inst, ArcFilter f,
                                                       const Caps& caps = {});
std::optional<PairCrossing> find_class_crossing_pair(const Instance& inst, ArcFilter f);

/// A subdivision witness. Closed carrier (C3 case): `carrier` is the cycle in
/// open form rotated to start at the first junction, `junctions` the three
/// obstruction positions (junctions[0] == 0). Open carrier (P3 case):
/// `carrier` is a path, `junctions` the two internal obstruction positions.
struct SubdivisionWitness {
    bool closed = false;
    std::vector<Vertex> carrier;
    std::vector<int> junctions;
    nlohmann::json to_json(const Instance& inst) const;
};

/// First (xi1, xi, xi2)-H-subdivision of C3 in canonical cycle order, if any:
/// a cycle with exactly three obstructions splitting it into H-path segments
/// T1 in D1, T2 in D, T3 in D2.
std::optional<SubdivisionWitness> find_c3_subdivision(const Instance& inst,
                                                      const Caps& caps = {});

/// First u-to-x path that is a (xi1, xi, xi2)-H-subdivision of P3, if any:
/// H-path segments T1 in D1, T2 in D, T3 in D2 with obstructions exactly at
/// the two junctions.
std::optional<SubdivisionWitness> find_p3_subdivision(const Instance& inst, Vertex u,
                                                      Vertex x, const Caps& caps = {});

/// Standing assumption: no isolated vertices, every class carries an arc, and
/// each G_i is transitive by H-paths (distinct triples; see TransMode).
Verdict check_standing(const Instance& inst, const Caps& caps = {},
                       TransMode mode = TransMode::WithinClass);

/// The transitivity clause of the standing assumption alone; the lemma
/// campaigns filter on it without the isolated-vertex and arc-coverage parts.
Verdict check_transitivity(const Instance& inst, const Caps& caps = {},
                           TransMode mode = TransMode::WithinClass);

Verdict check_hyp1(const Instance& inst, const Caps& caps = {});
Verdict check_hyp2(const Instance& inst);
Verdict check_hyp3(const Instance& inst);
Verdict check_hyp4(const Instance& inst, const Caps& caps = {});
Verdict check_hyp5(const Instance& inst, const Caps& caps = {});

/// All six verdicts in order T, 1..5. Never short-circuits.
std::vector<Verdict> check_all(const Instance& inst, const Caps& caps = {},
                               TransMode mode = TransMode::WithinClass);

bool all_pass(const std::vector<Verdict>& vs);
nlohmann::json verdicts_json(const std::vector<Verdict>& vs);

} // namespace hkd
