#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hkd/instance.hpp"
#include "hkd/modes.hpp"

namespace hkd {

/// Random-instance recipe. Identical config + seed yields identical instances
/// on every platform: the generator draws from a raw mt19937_64 with
/// hand-rolled bounded draws, never from std:: distributions.
struct GenConfig {
    int n_min = 4;
    int n_max = 8;
    double density = 0.3;         // per ordered vertex pair of D
    int colors = 4;               // |V(H)|
    double pattern_density = 0.5; // per color pair of H when shape is free
    int classes = 2;              // k >= 2
    int side1_classes = 1;
    /// Explicit 1-based picks for side 1. Meaningful with singleton classes
    /// (classes == colors), where construction order is canonical order.
    /// Empty: a random subset of size side1_classes.
    std::vector<int> side1_pattern;
    std::optional<PatternShape> shape; // force the pattern family
    bool require_no_isolated = false;
    bool require_bipartite_ccd = false;
    bool require_transitive_classes = false;
    std::vector<std::string> require_pass; // verdict ids "T", "1".."5"
    std::vector<std::string> require_fail;
    std::uint64_t seed = 1;
    std::uint64_t max_attempts = 200000; // rejection budget per generate() call
};

struct GenResult {
    Instance instance;
    std::uint64_t attempts = 1; // candidates drawn, including the accepted one
};

/// splitmix64-style per-trial seed derivation; every parallel loop in the
/// harness draws trial i from derive_seed(seed, i), so schedules cannot
/// affect results.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial);

/// One unconstrained candidate from the config at the given seed. The require_*
/// flags are ignored here; the campaign and tightness searches draw raw
/// candidates and apply their own filters.
Instance draw_candidate(const GenConfig& cfg, std::uint64_t seed);

/// Rejection-sample candidates at derive_seed(cfg.seed, attempt) until every
/// constraint flag holds. Throws cap_exceeded when max_attempts candidates all
/// fail. Candidates that blow a cap during checking are rejected, not fatal.
GenResult generate(const GenConfig& cfg, const Caps& caps = {});

struct CampaignReport {
    std::string lemma;
    std::uint64_t trials = 0;
    std::uint64_t qualifying = 0; // trials whose conclusion was actually checked
    std::uint64_t violations = 0;
    std::uint64_t capped = 0;     // trials abandoned on a cap
    bool sabotage = false;
    /// Shrunken reproducer instances (serialized) for the first violations,
    /// aligned with the witnesses array.
    std::vector<std::string> reproducers;
    nlohmann::json witnesses = nlohmann::json::array();
};

/// Valid campaign ids: 2.1, 2.3, 2.4, 2.5, 2.6, 2.7, 2.8, 2.9.
const std::vector<std::string>& campaign_lemmas();

/// Draws `trials` candidates; each one that satisfies the campaign's
/// hypothesis filter gets its conclusion checked with the definitional
/// machinery. sabotage skips the filter, so conclusions are checked on raw
/// candidates and violations should appear; that the campaign finds them is
/// itself tested. Violating trials are re-run serially and greedily shrunk
/// (arc then vertex deletion preserving the violation) into reproducers.
CampaignReport run_lemma_campaign(const std::string& lemma, std::uint64_t trials,
                                  const GenConfig& cfg, bool sabotage = false,
                                  const Caps& caps = {});

struct TightnessResult {
    int dropped = 0; // 0 = control (nothing dropped)
    std::uint64_t trial = 0;
    Instance instance;
    nlohmann::json certificate;
};

/// Generator config sized to the figure captions for each dropped-hypothesis
/// search; 0 gives the control preset.
GenConfig tightness_preset(int drop);

/// Randomized search for an instance that passes the standing assumption and
/// four hypotheses, fails the dropped one, and has no H-kernel by full subset
/// enumeration. drop 0 is the control: all six must pass and no H-kernel,
/// which the existence theorem rules out. Returns the lowest-trial-index hit
/// within budget or nullopt ("not found within budget", not absence).
std::optional<TightnessResult> search_tightness(int drop, std::uint64_t budget,
                                                const GenConfig& cfg,
                                                const Caps& caps = {});

/// Re-derive the certificate from a cold start (round-trips the instance
/// through its serialization, re-checks every verdict and re-enumerates all
/// subsets). True iff everything still holds.
bool recertify(const TightnessResult& res, const Caps& caps = {});

} // namespace hkd
