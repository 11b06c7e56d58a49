#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "hkd/harness.hpp"
#include "hkd/io.hpp"
#include "helpers.hpp"

using namespace hkd;
using helpers::make;
using helpers::make_colored;
using json = nlohmann::json;

namespace {

const std::string& cli_path() {
    static const std::string path = [] {
        if (const char* env = std::getenv("HKD_CLI"); env && *env) return std::string(env);
        for (const char* cand : {"./tools/hkd", "../tools/hkd", "./build/tools/hkd"})
            if (std::filesystem::exists(cand))
                return std::filesystem::absolute(cand).string();
        return std::string();
    }();
    REQUIRE_MESSAGE(!path.empty(), "set HKD_CLI to the CLI binary");
    return path;
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd =
        cli_path() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    Run r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

const std::string& fixture_dir() {
    static const std::string dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("hkd-cli-" + std::to_string(getpid()));
        std::filesystem::create_directories(d);
        return d.string();
    }();
    return dir;
}

std::string fixture(const std::string& name, const std::string& content) {
    const std::string path = fixture_dir() + "/" + name;
    write_file(path, content);
    return path;
}

std::string passing_instance_file() {
    static const std::string path = [] {
        GenConfig cfg;
        cfg.n_min = 3;
        cfg.n_max = 5;
        cfg.colors = 3;
        cfg.density = 0.45;
        cfg.seed = 21;
        cfg.require_pass = {"T", "1", "2", "3", "4", "5"};
        return fixture("pass.inst", serialize_instance(generate(cfg).instance));
    }();
    return path;
}

std::string failing_instance_file() {
    static const std::string path = [] {
        GenConfig cfg;
        cfg.n_min = 3;
        cfg.n_max = 5;
        cfg.colors = 3;
        cfg.density = 0.45;
        cfg.seed = 22;
        cfg.require_fail = {"T"};
        return fixture("fail.inst", serialize_instance(generate(cfg).instance));
    }();
    return path;
}

std::string path3_file() {
    static const std::string path = fixture(
        "path3.inst",
        serialize_instance(make_colored({{"a", "b", "A"}, {"b", "c", "B"}, {"c", "d", "A"}})));
    return path;
}

} // namespace

TEST_CASE("cli: check distinguishes pass, fail, and invalid input") {
    auto pass = run_cli("check " + passing_instance_file());
    CHECK(pass.code == 0);
    CHECK(pass.out.find("result: pass") != std::string::npos);

    auto fail = run_cli("check " + failing_instance_file());
    CHECK(fail.code == 1);
    CHECK(fail.out.find("result: fail") != std::string::npos);

    auto invalid = run_cli("check " + fixture("bad.inst", "{\"digraph\": 3}\n"));
    CHECK(invalid.code == 1);
    CHECK(invalid.out.find("invalid:") != std::string::npos);

    CHECK(run_cli("check " + fixture_dir() + "/no-such-file").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("check").code == 2);
    CHECK(run_cli("check --no-such-flag x").code == 2);

    // A colored-digraph payload has no partition, so full validation rejects it.
    auto colored = run_cli("check " + path3_file());
    CHECK(colored.code == 1);
    CHECK(colored.out.find("invalid:") != std::string::npos);
}

TEST_CASE("cli: hypotheses prints one verdict line each and witnesses on failure") {
    auto pass = run_cli("hypotheses " + passing_instance_file());
    CHECK(pass.code == 0);
    for (const char* id : {"T:", "1:", "2:", "3:", "4:", "5:"})
        CHECK(pass.out.find(id) != std::string::npos);

    auto fail = run_cli("hypotheses " + failing_instance_file());
    CHECK(fail.code == 1);
    CHECK(fail.out.find("witness:") != std::string::npos);

    auto doc = json::parse(run_cli("--format structured hypotheses " +
                                   passing_instance_file())
                               .out);
    CHECK(doc["command"] == "hypotheses");
    CHECK(doc["pass"] == true);
    CHECK(doc["verdicts"].size() == 6);
}

TEST_CASE("cli: reach answers path and walk queries under filters") {
    auto file = fixture("loops.inst",
                        serialize_instance(make({"A", "B"}, {{"A", "A"}, {"B", "B"}},
                                                {{"a", "b", "A"}, {"b", "c", "A"}},
                                                {{"A"}, {"B"}}, {1}, {2})));

    auto hit = run_cli("reach " + file + " --from a --to c");
    CHECK(hit.code == 0);
    CHECK(hit.out.find("H-path: a b c") != std::string::npos);

    CHECK(run_cli("reach " + file + " --from c --to a").code == 1);
    CHECK(run_cli("reach " + file + " --from a --to c --walk").code == 0);
    CHECK(run_cli("reach " + file + " --from a --to c --filter class:1").code == 0);
    CHECK(run_cli("reach " + file + " --from a --to c --filter d2").code == 1);
    CHECK(run_cli("reach " + file + " --from a --to c --filter class:9").code == 2);
    CHECK(run_cli("reach " + file + " --from a --to c --filter bogus").code == 2);
    CHECK(run_cli("reach " + file + " --from nobody --to c").code == 2);

    // Colored-only payloads work, but partition filters do not apply to them.
    CHECK(run_cli("reach " + path3_file() + " --from a --to b").code == 0);
    CHECK(run_cli("reach " + path3_file() + " --from a --to d").code == 1);
    CHECK(run_cli("reach " + path3_file() + " --from a --to d --filter d1").code == 2);
}

TEST_CASE("cli: ccd emits the color-class digraph") {
    auto r = run_cli("--format structured ccd " + path3_file());
    CHECK(r.code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["colors"] == json({"A", "B"}));
    CHECK(doc["arcs"] == json::parse(R"([["A","B"],["B","A"]])"));
    CHECK(doc["payload"].get<std::string>().find("pattern") != std::string::npos);
}

TEST_CASE("cli: verify judges candidate kernels") {
    auto file = path3_file(); // empty pattern, so H-paths are single arcs
    CHECK(run_cli("verify " + file + " --set b,d").code == 0);
    auto bad = run_cli("--format structured verify " + file + " --set d");
    CHECK(bad.code == 1);
    auto doc = json::parse(bad.out);
    CHECK(doc["kernel"] == false);
    CHECK(doc["witness"]["kind"] == "unabsorbed-vertex");
    CHECK(run_cli("verify " + file + " --set \"\"").code == 1);
    CHECK(run_cli("verify " + file + " --set b,zz").code == 2);
}

TEST_CASE("cli: find runs both construction routes") {
    auto both = run_cli("--format structured find " + passing_instance_file());
    CHECK(both.code == 0);
    auto doc = json::parse(both.out);
    CHECK(doc["brute"].is_array());
    CHECK(doc["pipeline"].is_array());
    CHECK(doc["ds_nodes"].get<int>() >= 1);
    std::string agree = doc["agreement"];
    CHECK((agree == "identical" || agree == "different-sets"));

    // A blocked triangle has no H-kernel at all.
    auto c3 = fixture("c3.inst",
                      serialize_instance(make({"A", "B"}, {},
                                              {{"a", "b", "A"}, {"b", "c", "A"}, {"c", "a", "A"}},
                                              {{"A"}, {"B"}}, {1}, {2})));
    CHECK(run_cli("find " + c3 + " --method brute").code == 1);

    // The pipeline refuses the same instance at the hypothesis gate.
    auto gate = run_cli("find " + c3 + " --method pipeline", true);
    CHECK(gate.code == 1);
    CHECK(gate.out.find("precondition not met") != std::string::npos);
    CHECK(run_cli("find " + failing_instance_file() + " --method both").code == 0);
}

TEST_CASE("cli: mode pipelines and their refusals") {
    auto mp = run_cli("--format structured mode mp " + path3_file());
    CHECK(mp.code == 0);
    auto mp_doc = json::parse(mp.out);
    CHECK(mp_doc["kernel"] == json({"b", "d"}));
    CHECK(mp_doc["detail"]["route"] == "pipeline");
    CHECK(mp_doc["shape"] == "empty");

    auto pcp = run_cli("--format structured mode pcp " + path3_file());
    CHECK(pcp.code == 0);
    CHECK(json::parse(pcp.out)["kernel"] == json({"d"}));

    auto path2 = fixture("path2.inst", serialize_instance(make_colored(
                                           {{"a", "b", "A"}, {"b", "c", "B"}})));
    auto rb = run_cli("--format structured mode rainbow " + path2);
    CHECK(rb.code == 0);
    CHECK(json::parse(rb.out)["detail"]["rainbow_verified"] == true);

    auto tagged = fixture("tagged.inst",
                          serialize_instance(make_colored(
                              {{"a", "b", "1"}, {"b", "c", "2"}, {"a", "c", "1"}})));
    auto tt = run_cli("--format structured mode three-transitive " + tagged);
    CHECK(tt.code == 0);
    CHECK(json::parse(tt.out)["kernel"] == json({"c"}));

    auto mono = fixture("mono.inst", serialize_instance(make_colored(
                                         {{"a", "b", "A"}, {"b", "c", "A"}})));
    auto refuse = run_cli("mode mp " + mono, true);
    CHECK(refuse.code == 1);
    CHECK(refuse.out.find("precondition not met: the color-class digraph is not bipartite") !=
          std::string::npos);

    auto c3 = fixture("c3m.inst",
                      serialize_instance(make_colored(
                          {{"a", "b", "A"}, {"b", "c", "A"}, {"c", "a", "A"}})));
    auto none = run_cli("--format structured mode kernel " + c3);
    CHECK(none.code == 1);
    auto none_doc = json::parse(none.out);
    CHECK(none_doc["kernel"].is_null());
    CHECK(none_doc["detail"]["route"] == "brute-force");

    CHECK(run_cli("mode sideways " + path3_file()).code == 2);
}

TEST_CASE("cli: campaigns report and write reproducers") {
    const std::string gen = " --n-min 3 --n-max 5 --colors 3 --seed 4242";
    auto clean = run_cli("--format structured campaign --lemma 2.5 --trials 20" + gen);
    CHECK(clean.code == 0);
    auto doc = json::parse(clean.out);
    CHECK(doc["lemma"] == "2.5");
    CHECK(doc["trials"] == 20);
    CHECK(doc["violations"] == 0);

    auto out_dir = fixture_dir() + "/repro";
    std::filesystem::create_directories(out_dir);
    auto sab = run_cli("--format structured campaign --lemma 2.8 --trials 60 --sabotage" +
                       gen + " --density 0.5 --out " + out_dir);
    CHECK(sab.code == 1);
    auto sab_doc = json::parse(sab.out);
    CHECK(sab_doc["violations"].get<int>() > 0);
    REQUIRE(sab_doc.contains("reproducer_files"));
    for (const auto& f : sab_doc["reproducer_files"]) {
        std::string p = f;
        CHECK(std::filesystem::exists(p));
        CHECK_NOTHROW(parse_instance_text(read_file(p)));
    }

    CHECK(run_cli("campaign --lemma 2.2 --trials 5").code == 1);
    CHECK(run_cli("campaign --trials 5").code == 2);
}

TEST_CASE("cli: tightness search exit codes and artifacts") {
    auto miss = run_cli("--format structured search-tight --control --budget 300");
    CHECK(miss.code == 3);
    auto miss_doc = json::parse(miss.out);
    CHECK(miss_doc["found"] == false);

    auto out_file = fixture_dir() + "/tight4.inst";
    auto hit = run_cli("--format structured search-tight --drop 4 --budget 6000 --out " +
                       out_file);
    CHECK(hit.code == 0);
    auto doc = json::parse(hit.out);
    CHECK(doc["found"] == true);
    CHECK(doc["trial"] == 4961);
    CHECK(doc["recertified"] == true);
    CHECK(doc["certificate"]["kernel_exists"] == false);
    auto inst = parse_instance_text(read_file(out_file));
    CHECK(inst.n() >= 3);

    CHECK(run_cli("search-tight --budget 10").code == 2);
    CHECK(run_cli("search-tight --drop 4 --control --budget 10").code == 2);
    CHECK(run_cli("search-tight --drop 9 --budget 10").code == 2);
}

TEST_CASE("cli: caps map to exit code 3") {
    auto r = run_cli("find " + passing_instance_file() + " --method brute --max-subsets 2",
                     true);
    CHECK(r.code == 3);
    CHECK(r.out.find("cap exceeded") != std::string::npos);
}

TEST_CASE("cli: graphviz exports land in the requested directory") {
    auto dir = fixture_dir() + "/dot";
    std::filesystem::create_directories(dir);
    auto r = run_cli("find " + passing_instance_file() + " --emit-dot " + dir);
    CHECK(r.code == 0);
    for (const char* name : {"d.dot", "h.dot", "ccd.dot", "ds.dot"}) {
        const std::string p = dir + "/" + name;
        REQUIRE(std::filesystem::exists(p));
        CHECK(read_file(p).rfind("digraph", 0) == 0);
    }
}

TEST_CASE("cli: structured output is byte-identical across runs and thread counts") {
    const std::vector<std::string> cmds = {
        "--format structured find " + passing_instance_file(),
        "--format structured hypotheses " + failing_instance_file(),
        "--format structured mode pcp " + path3_file(),
        "--format structured campaign --lemma 2.8 --trials 40 --sabotage --n-min 3 "
        "--n-max 5 --colors 3 --seed 4242",
        "--format structured search-tight --drop 4 --budget 6000",
    };
    for (const auto& cmd : cmds) {
        auto a = run_cli(cmd + " --jobs 1");
        auto b = run_cli(cmd + " --jobs 4");
        auto c = run_cli(cmd + " --jobs 4");
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(b.out == c.out);
        CHECK_FALSE(a.out.empty());
        CHECK(a.out.back() == '\n');
        CHECK_NOTHROW(static_cast<void>(json::parse(a.out)));
    }
}
