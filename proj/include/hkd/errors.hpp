#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace hkd {

/// Malformed or structurally invalid input (bad file, unknown color, loop, ...).
/// The CLI maps this to exit code 2 (except `check`, where semantic validity is
/// the verdict itself).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg, nlohmann::json detail = nullptr)
        : std::runtime_error(msg), detail_(std::move(detail)) {}
    const nlohmann::json& detail() const { return detail_; }

private:
    nlohmann::json detail_;
};

/// A configured enumeration/size cap was hit. Always explicit, never a silent
/// truncation. CLI exit code 3.
class cap_exceeded : public std::runtime_error {
public:
    explicit cap_exceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation's documented precondition does not hold for this (otherwise
/// well-formed) instance, e.g. a hypothesis fails before the pipeline runs or a
/// mode's structural requirement is missing. Carries a machine-checkable witness.
/// CLI exit code 1.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& msg, nlohmann::json witness = nullptr)
        : std::runtime_error(msg), witness_(std::move(witness)) {}
    const nlohmann::json& witness() const { return witness_; }

private:
    nlohmann::json witness_;
};

/// Something the theory says cannot happen did (no sink in an acyclic digraph,
/// pipeline output failing re-verification). Indicates a bug, not bad input.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

/// Hard caps for the exhaustive machinery. All user-configurable; exceeding one
/// raises cap_exceeded.
struct Caps {
    int max_vertices = 14;                 // |V(D)| bound for exhaustive path/cycle work
    int max_subsets = 20;                  // |V(D)| bound for subset enumeration
    std::uint64_t max_cycles = 1000000;    // enumerated cycle budget
    std::uint64_t max_paths = 1000000;     // enumerated path / DFS-step budget
};

} // namespace hkd
