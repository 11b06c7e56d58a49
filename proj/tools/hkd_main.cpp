// Command-line front end. Exit codes are a contract:
//   0 verdict pass / object found
//   1 verdict fail / object absent / precondition not met (witness printed)
//   2 usage or input error
//   3 cap or budget exceeded
// `--format structured` prints a single canonical JSON document (sorted keys,
// 2-space indent, trailing newline, no timestamps); identical invocations are
// byte-identical, including under --jobs N.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hkd/harness.hpp"
#include "hkd/hypotheses.hpp"
#include "hkd/instance.hpp"
#include "hkd/io.hpp"
#include "hkd/kernel.hpp"
#include "hkd/modes.hpp"
#include "hkd/reachability.hpp"
#include "hkd/structure.hpp"

using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitBug = 70;

struct Options {
    std::string format = "human";
    int jobs = 0;
    hkd::Caps caps;
    std::string emit_dot;
    bool trans_in_d = false;

    hkd::TransMode mode() const {
        return trans_in_d ? hkd::TransMode::ConclusionInD : hkd::TransMode::WithinClass;
    }
    bool structured() const { return format == "structured"; }
};

void emit(const Options& opt, const json& doc, const std::string& human) {
    if (opt.structured())
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << human;
}

std::string join_names(const std::vector<std::string>& names, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += sep;
        out += names[i];
    }
    return out;
}

std::string set_text(const hkd::Instance& inst, const std::vector<hkd::Vertex>& S) {
    return S.empty() ? std::string("{}") : "{" + join_names(inst.names(S), ", ") + "}";
}

/// Full instance file: pattern + digraph + partition.
hkd::Instance load_instance(const std::string& path) {
    return hkd::parse_instance_text(hkd::read_file(path));
}

/// Instance file with or without a partition (reach/verify/ccd work on both).
hkd::Instance load_any(const std::string& path) {
    const std::string text = hkd::read_file(path);
    try {
        return hkd::parse_instance_text(text);
    } catch (const hkd::validation_error&) {
        return hkd::parse_colored_text(text);
    }
}

void dot_exports(const Options& opt, const hkd::Instance& inst,
                 const hkd::SemikernelDigraph* ds) {
    if (opt.emit_dot.empty()) return;
    const std::string dir = opt.emit_dot + "/";
    hkd::write_file(dir + "d.dot", hkd::dot_digraph(inst));
    hkd::write_file(dir + "h.dot", hkd::dot_pattern(inst.pattern, "H"));
    hkd::write_file(dir + "ccd.dot",
                    hkd::dot_pattern(hkd::color_class_digraph(inst).graph, "CCD"));
    if (ds) {
        std::vector<std::string> labels;
        for (std::uint64_t m : ds->nodes)
            labels.push_back(set_text(inst, hkd::set_of(m)));
        hkd::write_file(dir + "ds.dot", hkd::dot_node_link(labels, ds->arcs, "DS"));
    }
}

std::string verdict_lines(const std::vector<hkd::Verdict>& vs, bool witnesses) {
    std::ostringstream out;
    for (const auto& v : vs) {
        out << v.id << ": " << (v.pass ? "pass" : "fail") << "\n";
        if (witnesses && !v.pass && !v.witness.is_null())
            out << "  witness: " << v.witness.dump() << "\n";
    }
    return out.str();
}

int parse_filter(const std::string& text, const hkd::Instance& inst, hkd::ArcFilter& f) {
    if (text == "all") {
        f = hkd::ArcFilter::all();
        return kExitPass;
    }
    if (text == "d1" || text == "d2" || text.rfind("class:", 0) == 0) {
        if (!inst.partitioned()) {
            std::cerr << "error: filter '" << text << "' needs a partitioned instance\n";
            return kExitUsage;
        }
        if (text == "d1") f = hkd::ArcFilter::side(1);
        else if (text == "d2") f = hkd::ArcFilter::side(2);
        else {
            int i = 0;
            try {
                i = std::stoi(text.substr(6));
            } catch (const std::exception&) {
                i = 0;
            }
            if (i < 1 || i > inst.part().k()) {
                std::cerr << "error: class index out of range in filter '" << text << "'\n";
                return kExitUsage;
            }
            f = hkd::ArcFilter::one_class(i - 1);
        }
        return kExitPass;
    }
    std::cerr << "error: unknown filter '" << text << "' (all, d1, d2, class:<i>)\n";
    return kExitUsage;
}

int vertex_of(const hkd::Instance& inst, const std::string& name, hkd::Vertex& v) {
    int i = inst.digraph.vertex_index(name);
    if (i < 0) {
        std::cerr << "error: unknown vertex '" << name << "'\n";
        return kExitUsage;
    }
    v = i;
    return kExitPass;
}

// ---------------------------------------------------------------- check

int run_check(const Options& opt, const std::string& path) {
    std::string text;
    try {
        text = hkd::read_file(path);
    } catch (const hkd::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    hkd::Instance inst;
    try {
        inst = hkd::parse_instance_text(text);
    } catch (const hkd::validation_error& e) {
        // For `check`, structural validity is the verdict, not a usage error.
        json doc{{"command", "check"}, {"valid", false}, {"error", e.what()}};
        if (!e.detail().is_null()) doc["detail"] = e.detail();
        emit(opt, doc, std::string("invalid: ") + e.what() + "\n");
        return kExitFail;
    }
    auto vs = hkd::check_all(inst, opt.caps, opt.mode());
    const bool pass = hkd::all_pass(vs);
    dot_exports(opt, inst, nullptr);

    std::ostringstream human;
    human << "valid instance: |V(D)|=" << inst.n() << " |A(D)|=" << inst.digraph.size()
          << " |V(H)|=" << inst.pattern.order() << " k=" << inst.part().k() << "\n";
    for (const auto& w : inst.warnings) human << "warning: " << w << "\n";
    human << verdict_lines(vs, false);
    human << "result: " << (pass ? "pass" : "fail") << "\n";

    json doc{{"command", "check"},
             {"valid", true},
             {"warnings", inst.warnings},
             {"verdicts", hkd::verdicts_json(vs)},
             {"pass", pass}};
    emit(opt, doc, human.str());
    return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- hypotheses

int run_hypotheses(const Options& opt, const std::string& path) {
    hkd::Instance inst = load_instance(path);
    auto vs = hkd::check_all(inst, opt.caps, opt.mode());
    const bool pass = hkd::all_pass(vs);
    dot_exports(opt, inst, nullptr);
    json doc{{"command", "hypotheses"}, {"verdicts", hkd::verdicts_json(vs)}, {"pass", pass}};
    emit(opt, doc, verdict_lines(vs, true) + "result: " + (pass ? "pass" : "fail") + "\n");
    return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- reach

int run_reach(const Options& opt, const std::string& path, const std::string& from,
              const std::string& to, const std::string& filter_text, bool walk) {
    hkd::Instance inst = load_any(path);
    hkd::ArcFilter f;
    if (int rc = parse_filter(filter_text, inst, f)) return rc;
    hkd::Vertex u, v;
    if (int rc = vertex_of(inst, from, u)) return rc;
    if (int rc = vertex_of(inst, to, v)) return rc;

    auto witness = walk ? hkd::h_walk_exists(inst, u, v, f, opt.caps)
                        : hkd::h_path_exists(inst, u, v, f, opt.caps);
    dot_exports(opt, inst, nullptr);
    const char* noun = walk ? "H-walk" : "H-path";
    json doc{{"command", "reach"}, {"walk", walk},        {"from", from},
             {"to", to},           {"filter", filter_text}, {"found", witness.has_value()}};
    std::string human;
    if (witness) {
        doc["witness"] = inst.names(*witness);
        human = std::string(noun) + ": " + join_names(inst.names(*witness)) + "\n";
    } else {
        doc["witness"] = nullptr;
        human = std::string("no ") + noun + " from " + from + " to " + to + " within " +
                f.label(inst) + "\n";
    }
    emit(opt, doc, human);
    return witness ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- ccd

int run_ccd(const Options& opt, const std::string& path) {
    hkd::Instance inst = load_any(path);
    auto ccd = hkd::color_class_digraph(inst);
    dot_exports(opt, inst, nullptr);
    const std::string payload = hkd::serialize_pattern(ccd.graph);
    json arcs = json::array();
    for (const auto& [a, b] : ccd.graph.arcs)
        arcs.push_back({ccd.graph.colors[a], ccd.graph.colors[b]});
    json doc{{"command", "ccd"},
             {"colors", ccd.graph.colors},
             {"arcs", arcs},
             {"payload", payload}};
    emit(opt, doc, payload);
    return kExitPass;
}

// ---------------------------------------------------------------- find

int run_find(const Options& opt, const std::string& path, const std::string& method,
             bool bypass) {
    hkd::Instance inst = load_instance(path);
    json doc{{"command", "find"}, {"method", method}};
    std::ostringstream human;
    bool found = false;

    std::optional<std::vector<hkd::Vertex>> brute;
    if (method == "brute" || method == "both") {
        brute = hkd::find_h_kernel(inst, opt.caps);
        if (brute) {
            found = true;
            doc["brute"] = inst.names(*brute);
            human << "brute-force H-kernel: " << set_text(inst, *brute) << "\n";
        } else {
            doc["brute"] = nullptr;
            human << "brute-force: no H-kernel (subset space exhausted)\n";
        }
    }

    const hkd::SemikernelDigraph* ds_ptr = nullptr;
    hkd::PipelineResult pipe;
    bool pipe_ok = false;
    if (method == "pipeline" || method == "both") {
        try {
            pipe = hkd::theorem_pipeline(inst, opt.caps, opt.mode(), bypass);
            pipe_ok = true;
            found = true;
            ds_ptr = &pipe.ds;
            doc["pipeline"] = inst.names(pipe.kernel);
            doc["ds_nodes"] = pipe.ds.nodes.size();
            doc["ds_arcs"] = pipe.ds.arcs.size();
            human << "pipeline H-kernel: " << set_text(inst, pipe.kernel) << " (D_S: "
                  << pipe.ds.nodes.size() << " nodes, " << pipe.ds.arcs.size() << " arcs)\n";
        } catch (const hkd::precondition_error& e) {
            if (method == "pipeline") throw;
            doc["pipeline"] = nullptr;
            doc["pipeline_error"] = e.what();
            if (!e.witness().is_null()) doc["pipeline_witness"] = e.witness();
            human << "pipeline: " << e.what() << "\n";
        }
    }

    if (method == "both" && brute && pipe_ok) {
        const bool same = *brute == pipe.kernel;
        doc["agreement"] = same ? "identical" : "different-sets";
        human << "agreement: both methods returned verified H-kernels ("
              << (same ? "identical" : "different sets") << ")\n";
    }
    dot_exports(opt, inst, ds_ptr);
    emit(opt, doc, human.str());
    return found ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- verify

int run_verify(const Options& opt, const std::string& path,
               const std::vector<std::string>& names) {
    hkd::Instance inst = load_any(path);
    std::vector<hkd::Vertex> S;
    for (const auto& name : names) {
        hkd::Vertex v;
        if (int rc = vertex_of(inst, name, v)) return rc;
        S.push_back(v);
    }
    auto res = hkd::is_h_kernel(inst, S, opt.caps);
    dot_exports(opt, inst, nullptr);
    json doc{{"command", "verify"},
             {"set", inst.names(S)},
             {"kernel", res.ok},
             {"witness", res.witness}};
    std::string human = set_text(inst, S) +
                        (res.ok ? " is an H-kernel\n"
                                : " is not an H-kernel\n  witness: " + res.witness.dump() + "\n");
    emit(opt, doc, human);
    return res.ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- mode

int run_mode(const Options& opt, const std::string& kind, const std::string& path) {
    hkd::Instance inst = hkd::parse_colored_text(hkd::read_file(path));
    dot_exports(opt, inst, nullptr);
    json doc{{"command", "mode"},
             {"mode", kind},
             {"shape", hkd::shape_name(hkd::classify_pattern(inst.pattern))}};
    std::ostringstream human;

    if (kind == "kernel") {
        auto res = hkd::classical_kernel(inst, opt.caps);
        doc["detail"] = res.detail;
        if (res.kernel) {
            doc["kernel"] = inst.names(*res.kernel);
            human << "kernel: " << set_text(inst, *res.kernel) << " (route "
                  << res.detail["route"].get<std::string>() << ")\n";
            emit(opt, doc, human.str());
            return kExitPass;
        }
        doc["kernel"] = nullptr;
        human << "no kernel (subset space exhausted)\n";
        emit(opt, doc, human.str());
        return kExitFail;
    }

    hkd::ModeResult res;
    std::string noun;
    if (kind == "mp") {
        res = hkd::mp_kernel_via_bipartite_ccd(inst, opt.caps);
        noun = "mp-kernel";
    } else if (kind == "pcp") {
        res = hkd::pcp_kernel_via_transitive_classes(inst, opt.caps);
        noun = "PCP-kernel";
    } else if (kind == "rainbow") {
        res = hkd::rainbow_kernel(inst, opt.caps);
        noun = "rainbow-path kernel";
    } else {
        res = hkd::three_transitive_kernel(inst, opt.caps);
        noun = "kernel";
    }
    doc["kernel"] = inst.names(res.kernel);
    doc["detail"] = res.detail;
    human << noun << ": " << set_text(inst, res.kernel) << " (route "
          << res.detail["route"].get<std::string>() << ")\n";
    emit(opt, doc, human.str());
    return kExitPass;
}

// ---------------------------------------------------------------- campaign

int run_campaign(const Options& opt, const std::string& lemma, std::uint64_t trials,
                 const hkd::GenConfig& cfg, bool sabotage, const std::string& out_dir) {
    auto rep = hkd::run_lemma_campaign(lemma, trials, cfg, sabotage, opt.caps);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < rep.reproducers.size(); ++i) {
        if (out_dir.empty()) break;
        std::string name = out_dir + "/campaign-" + lemma + "-" +
                           std::to_string(rep.witnesses[i]["trial"].get<long long>()) + ".inst";
        hkd::write_file(name, rep.reproducers[i]);
        files.push_back(name);
    }
    json doc{{"command", "campaign"},   {"lemma", rep.lemma},
             {"sabotage", rep.sabotage}, {"trials", rep.trials},
             {"qualifying", rep.qualifying}, {"violations", rep.violations},
             {"capped", rep.capped},    {"witnesses", rep.witnesses},
             {"reproducers", rep.reproducers}};
    if (!files.empty()) doc["reproducer_files"] = files;

    std::ostringstream human;
    human << "campaign " << rep.lemma << (rep.sabotage ? " (sabotage: filter skipped)" : "")
          << ": " << rep.trials << " trials, " << rep.qualifying
          << " conclusion checks, " << rep.violations << " violations, " << rep.capped
          << " capped\n";
    for (const auto& w : rep.witnesses)
        human << "violation at trial " << w["trial"] << ": " << w["witness"].dump() << "\n";
    for (const auto& f : files) human << "reproducer written: " << f << "\n";
    if (!rep.reproducers.empty() && files.empty())
        human << "rerun with --out <dir> to write reproducer files\n";
    emit(opt, doc, human.str());
    return rep.violations == 0 ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------- search-tight

int run_search_tight(const Options& opt, int drop, std::uint64_t budget,
                     const hkd::GenConfig& cfg, const std::string& out_file) {
    auto res = hkd::search_tightness(drop, budget, cfg, opt.caps);
    if (!res) {
        json doc{{"command", "search-tight"}, {"drop", drop},
                 {"budget", budget},          {"found", false}};
        emit(opt, doc,
             "not found within budget of " + std::to_string(budget) + " trials\n");
        return kExitCap; // budget exhausted, not proof of absence
    }
    const bool recert = hkd::recertify(*res, opt.caps);
    if (!recert)
        throw hkd::internal_error("tightness result failed cold-start recertification");
    const std::string inst_text = hkd::serialize_instance(res->instance);
    if (!out_file.empty()) hkd::write_file(out_file, inst_text);
    dot_exports(opt, res->instance, nullptr);
    json doc{{"command", "search-tight"},
             {"drop", drop},
             {"budget", budget},
             {"found", true},
             {"trial", res->trial},
             {"certificate", res->certificate},
             {"recertified", true},
             {"instance", inst_text}};
    std::ostringstream human;
    human << "found at trial " << res->trial << " (hypothesis " << drop
          << " dropped): no H-kernel over " << res->instance.n()
          << " vertices, recertified from cold start\n";
    human << inst_text;
    if (!out_file.empty()) human << "instance written: " << out_file << "\n";
    emit(opt, doc, human.str());
    return kExitPass;
}

void add_generator_flags(CLI::App* cmd, hkd::GenConfig& cfg, std::string& shape) {
    cmd->add_option("--n-min", cfg.n_min, "Minimum vertex count");
    cmd->add_option("--n-max", cfg.n_max, "Maximum vertex count");
    cmd->add_option("--density", cfg.density, "Arc probability per ordered pair");
    cmd->add_option("--colors", cfg.colors, "Color count |V(H)|");
    cmd->add_option("--pattern-density", cfg.pattern_density,
                    "Arc probability per color pair (acyclic/general shapes)");
    cmd->add_option("--classes", cfg.classes, "Chromatic class count k");
    cmd->add_option("--side1-classes", cfg.side1_classes,
                    "How many classes land on side 1");
    cmd->add_option("--shape", shape,
                    "Force the pattern shape: empty, loops-only, complete-loopless, "
                    "acyclic, general")
        ->check(CLI::IsMember(
            {"empty", "loops-only", "complete-loopless", "acyclic", "general"}));
    cmd->add_option("--seed", cfg.seed, "Generator seed");
}

std::optional<hkd::PatternShape> shape_of(const std::string& name) {
    if (name == "empty") return hkd::PatternShape::Empty;
    if (name == "loops-only") return hkd::PatternShape::LoopsOnly;
    if (name == "complete-loopless") return hkd::PatternShape::CompleteLoopless;
    if (name == "acyclic") return hkd::PatternShape::Acyclic;
    if (name == "general") return hkd::PatternShape::General;
    return std::nullopt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analyzer for H-colored digraphs: H-path reachability, hypothesis "
                 "verification, H-kernel construction, specialized kernel modes, and "
                 "randomized property campaigns"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    // Global flags remain valid after the subcommand name.
    app.fallthrough(true);

    Options opt;
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"human", "structured"}))
        ->capture_default_str();
    app.add_option("--jobs", opt.jobs, "Worker thread count (0 = library default)")
        ->envname("HKD_JOBS");
    app.add_option("--max-vertices", opt.caps.max_vertices,
                   "Vertex cap for exhaustive path/cycle work")
        ->envname("HKD_MAX_VERTICES")
        ->capture_default_str();
    app.add_option("--max-subsets", opt.caps.max_subsets,
                   "Vertex cap for subset enumeration")
        ->envname("HKD_MAX_SUBSETS")
        ->capture_default_str();
    app.add_option("--max-cycles", opt.caps.max_cycles, "Enumerated cycle budget")
        ->envname("HKD_MAX_CYCLES")
        ->capture_default_str();
    app.add_option("--max-paths", opt.caps.max_paths,
                   "Enumerated path / search step budget")
        ->envname("HKD_MAX_PATHS")
        ->capture_default_str();
    app.add_option("--emit-dot", opt.emit_dot,
                   "Directory for Graphviz exports (d.dot, h.dot, ccd.dot, and ds.dot "
                   "when the pipeline runs)");
    app.add_flag("--transitivity-in-d", opt.trans_in_d,
                 "Accept the concluding transitivity H-path anywhere in D instead of "
                 "inside the class subdigraph");

    std::string path, from, to, filter = "all", method = "both", set_csv, kind;
    bool walk = false, bypass = false, sabotage = false, control = false;
    std::string lemma, out_dir, out_file, shape;
    std::uint64_t trials = 200, budget = 100000;
    int drop = 0;
    hkd::GenConfig gen;

    auto* c_check = app.add_subcommand(
        "check", "Validate an instance file and run all six verdicts (T, 1-5)");
    c_check->add_option("file", path, "Instance file")->required();

    auto* c_hyp = app.add_subcommand(
        "hypotheses", "One line per verdict with witness payloads on failure");
    c_hyp->add_option("file", path, "Instance file")->required();

    auto* c_reach = app.add_subcommand("reach", "Decide H-path (or H-walk) reachability");
    c_reach->add_option("file", path, "Instance file")->required();
    c_reach->add_option("--from", from, "Start vertex name")->required();
    c_reach->add_option("--to", to, "Target vertex name")->required();
    c_reach->add_option("--filter", filter, "Subdigraph: all, d1, d2, class:<i>")
        ->capture_default_str();
    c_reach->add_flag("--walk", walk, "Decide H-walks (repeats allowed) instead");

    auto* c_ccd = app.add_subcommand(
        "ccd", "Emit the color-class digraph as a pattern-only payload");
    c_ccd->add_option("file", path, "Instance file")->required();

    auto* c_find = app.add_subcommand("find", "Construct an H-kernel");
    c_find->add_option("file", path, "Instance file")->required();
    c_find->add_option("--method", method, "brute, pipeline, or both")
        ->check(CLI::IsMember({"brute", "pipeline", "both"}))
        ->capture_default_str();
    c_find->add_flag("--bypass-hypotheses", bypass,
                     "Run the pipeline without the hypothesis gate (experiments)");

    auto* c_verify = app.add_subcommand("verify", "Check whether a vertex set is an H-kernel");
    c_verify->add_option("file", path, "Instance file")->required();
    c_verify->add_option("--set", set_csv, "Comma-separated vertex names (empty = {})")
        ->required();

    auto* c_mode = app.add_subcommand(
        "mode",
        "Specialized kernel pipelines on a plain colored digraph (no partition "
        "payload). kernel: any coloring, brute force or reverse-topological. mp: "
        "needs a bipartite color-class digraph. pcp: needs transitive chromatic "
        "classes and no isolated vertices. rainbow: pcp plus no color-class cycle of "
        "length >= 2. three-transitive: arcs tagged with colors \"1\"/\"2\" naming "
        "two acyclic spanning subdigraphs; needs 3-transitivity and no directed "
        "triangle");
    c_mode->add_option("kind", kind, "kernel, mp, pcp, rainbow, or three-transitive")
        ->required()
        ->check(CLI::IsMember({"kernel", "mp", "pcp", "rainbow", "three-transitive"}));
    c_mode->add_option("file", path, "Colored digraph file")->required();

    auto* c_camp = app.add_subcommand(
        "campaign",
        "Random-instance property campaign for one of eight structural facts: "
        "2.1 in-class chain reachability; 2.3 per-class greedy dominance cycles and "
        "singleton semikernels; 2.4 cyclic-chain path unions staying in one class; "
        "2.5 whole-digraph dominance cycles and singleton semikernels; 2.6 singleton "
        "semikernels modulo D2; 2.7 semikernel-digraph acyclicity; 2.8 H-walk "
        "side/class containment; 2.9 the subdivision dichotomy");
    c_camp->add_option("--lemma", lemma, "Campaign id (2.1, 2.3, ..., 2.9)")->required();
    c_camp->add_option("--trials", trials, "Trial count")->capture_default_str();
    c_camp->add_flag("--sabotage", sabotage,
                     "Skip the hypothesis filter; violations prove the campaign can "
                     "detect falsity");
    c_camp->add_option("--out", out_dir, "Directory for reproducer files");
    add_generator_flags(c_camp, gen, shape);

    auto* c_tight = app.add_subcommand(
        "search-tight",
        "Search for an instance passing all verdicts but one, with no H-kernel "
        "(full subset enumeration). Exit 0 found, 3 budget exhausted");
    auto* drop_opt =
        c_tight->add_option("--drop", drop, "Hypothesis to drop (1-5)")->check(CLI::Range(1, 5));
    c_tight->add_flag("--control", control,
                      "Drop nothing: all six verdicts must pass and no kernel exist "
                      "(expected to exhaust the budget)");
    c_tight->add_option("--budget", budget, "Trial budget")->capture_default_str();
    c_tight->add_option("--out", out_file, "File for the found instance");
    hkd::GenConfig tight_gen; // filled from the preset after parsing
    std::string tight_shape;
    auto* tg_nmin = c_tight->add_option("--n-min", tight_gen.n_min, "Minimum vertex count");
    auto* tg_nmax = c_tight->add_option("--n-max", tight_gen.n_max, "Maximum vertex count");
    auto* tg_dens =
        c_tight->add_option("--density", tight_gen.density, "Arc probability per ordered pair");
    auto* tg_cols = c_tight->add_option("--colors", tight_gen.colors, "Color count |V(H)|");
    auto* tg_pdens = c_tight->add_option("--pattern-density", tight_gen.pattern_density,
                                         "Arc probability per color pair");
    auto* tg_shape =
        c_tight->add_option("--shape", tight_shape, "Force the pattern shape")
            ->check(CLI::IsMember(
                {"empty", "loops-only", "complete-loopless", "acyclic", "general"}));
    std::uint64_t tight_seed = 1;
    auto* tg_seed =
        c_tight->add_option("--seed", tight_seed, "Generator seed (default: preset seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

#ifdef _OPENMP
    if (opt.jobs > 0) omp_set_num_threads(opt.jobs);
#endif

    try {
        if (*c_check) return run_check(opt, path);
        if (*c_hyp) return run_hypotheses(opt, path);
        if (*c_reach) return run_reach(opt, path, from, to, filter, walk);
        if (*c_ccd) return run_ccd(opt, path);
        if (*c_find) return run_find(opt, path, method, bypass);
        if (*c_verify) {
            std::vector<std::string> names;
            std::stringstream ss(set_csv);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) names.push_back(item);
            return run_verify(opt, path, names);
        }
        if (*c_mode) return run_mode(opt, kind, path);
        if (*c_camp) {
            if (!shape.empty()) gen.shape = shape_of(shape);
            return run_campaign(opt, lemma, trials, gen, sabotage, out_dir);
        }
        if (*c_tight) {
            if (drop_opt->count() == 0 && !control) {
                std::cerr << "error: search-tight needs --drop <1-5> or --control\n";
                return kExitUsage;
            }
            if (drop_opt->count() > 0 && control) {
                std::cerr << "error: --drop and --control are mutually exclusive\n";
                return kExitUsage;
            }
            const int d = control ? 0 : drop;
            hkd::GenConfig cfg = hkd::tightness_preset(d);
            if (tg_seed->count()) cfg.seed = tight_seed;
            if (tg_nmin->count()) cfg.n_min = tight_gen.n_min;
            if (tg_nmax->count()) cfg.n_max = tight_gen.n_max;
            if (tg_dens->count()) cfg.density = tight_gen.density;
            if (tg_cols->count()) {
                cfg.colors = tight_gen.colors;
                cfg.classes = std::min(cfg.classes, cfg.colors);
            }
            if (tg_pdens->count()) cfg.pattern_density = tight_gen.pattern_density;
            if (tg_shape->count()) cfg.shape = shape_of(tight_shape);
            return run_search_tight(opt, d, budget, cfg, out_file);
        }
    } catch (const hkd::cap_exceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const hkd::precondition_error& e) {
        std::cerr << "precondition not met: " << e.what() << "\n";
        if (!e.witness().is_null()) std::cerr << "witness: " << e.witness().dump() << "\n";
        return kExitFail;
    } catch (const hkd::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!e.detail().is_null()) std::cerr << "detail: " << e.detail().dump() << "\n";
        return kExitUsage;
    } catch (const hkd::internal_error& e) {
        std::cerr << "internal error (please report): " << e.what() << "\n";
        return kExitBug;
    }
    return kExitUsage;
}
