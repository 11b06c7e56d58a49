#pragma once

#include <array>
#include <string>
#include <vector>

#include "hkd/harness.hpp"
#include "hkd/instance.hpp"

namespace helpers {

using StrArc = std::array<std::string, 3>; // tail, head, color

/// Full instance from literals; classes empty = no partition.
inline hkd::Instance make(std::vector<std::string> colors,
                          std::vector<std::pair<std::string, std::string>> harcs,
                          std::vector<StrArc> darcs,
                          std::vector<std::vector<std::string>> classes = {},
                          std::vector<int> side1 = {}, std::vector<int> side2 = {}) {
    hkd::InstanceBuilder b;
    b.colors = std::move(colors);
    b.pattern_arcs = std::move(harcs);
    for (auto& a : darcs) {
        for (const auto& v : {a[0], a[1]}) {
            bool known = false;
            for (const auto& w : b.vertices) known = known || w == v;
            if (!known) b.vertices.push_back(v);
        }
        b.arcs.push_back({a[0], a[1], a[2]});
    }
    if (!classes.empty()) {
        b.has_partition = true;
        b.classes = std::move(classes);
        b.side1 = std::move(side1);
        b.side2 = std::move(side2);
    }
    return b.build();
}

/// Colored digraph without a pattern payload (colors inferred), as the mode
/// pipelines consume.
inline hkd::Instance make_colored(std::vector<StrArc> darcs,
                                  std::vector<std::string> extra_vertices = {}) {
    hkd::InstanceBuilder b;
    b.has_pattern = false;
    b.vertices = std::move(extra_vertices);
    for (auto& a : darcs) {
        for (const auto& v : {a[0], a[1]}) {
            bool known = false;
            for (const auto& w : b.vertices) known = known || w == v;
            if (!known) b.vertices.push_back(v);
        }
        b.arcs.push_back({a[0], a[1], a[2]});
    }
    return b.build();
}

/// Deterministic fuzz stream: the library generator with derived seeds.
inline hkd::Instance fuzz(std::uint64_t seed, int n_min = 3, int n_max = 7, int colors = 3,
                          double density = 0.4, double pattern_density = 0.5, int classes = 2) {
    hkd::GenConfig cfg;
    cfg.n_min = n_min;
    cfg.n_max = n_max;
    cfg.colors = colors;
    cfg.density = density;
    cfg.pattern_density = pattern_density;
    cfg.classes = classes;
    return hkd::draw_candidate(cfg, hkd::derive_seed(0xF00D, seed));
}

} // namespace helpers
