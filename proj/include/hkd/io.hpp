#pragma once

#include <string>
#include <vector>

#include "hkd/instance.hpp"

namespace hkd {

/// Parse the textual instance format (pattern + digraph + partition, all
/// required). Throws validation_error with position info on syntax errors and
/// with the offending name on structural ones. The result is canonical.
Instance parse_instance_text(const std::string& text);

/// Parse a colored digraph for the mode pipelines: `digraph` required,
/// `pattern` optional (vertices must be exactly the used colors, no arcs),
/// `partition` rejected -- the pipelines construct both.
Instance parse_colored_text(const std::string& text);

/// Canonical serialization: sorted vertices/arcs/classes, fixed key order,
/// 2-space indent, trailing newline. Idempotent with parse_instance_text.
std::string serialize_instance(const Instance& inst);

/// A digraph-over-colors payload (used by the ccd subcommand).
std::string serialize_pattern(const PatternDigraph& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Graphviz exports. Deterministic node/edge order.
std::string dot_digraph(const Instance& inst);
std::string dot_pattern(const PatternDigraph& p, const std::string& name);
std::string dot_node_link(const std::vector<std::string>& node_labels,
                          const std::vector<std::pair<int, int>>& arcs,
                          const std::string& name);

} // namespace hkd
