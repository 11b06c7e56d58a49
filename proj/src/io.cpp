#include "hkd/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace hkd {

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error("JSON syntax error at byte " + std::to_string(e.byte) +
                               ": " + e.what());
    }
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object())
        throw validation_error(where + " must be an object");
    for (auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok)
            throw validation_error("unknown field \"" + key + "\" in " + where);
    }
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw validation_error(where + " must be an array");
    std::vector<std::string> r;
    for (auto& e : j) {
        if (!e.is_string())
            throw validation_error(where + " must contain only strings");
        r.push_back(e.get<std::string>());
    }
    return r;
}

void read_pattern(const json& p, InstanceBuilder& b) {
    check_keys(p, "pattern", {"vertices", "arcs"});
    if (!p.contains("vertices")) throw validation_error("pattern.vertices missing");
    if (!p.contains("arcs")) throw validation_error("pattern.arcs missing");
    b.colors = string_list(p["vertices"], "pattern.vertices");
    if (!p["arcs"].is_array()) throw validation_error("pattern.arcs must be an array");
    for (auto& e : p["arcs"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw validation_error("each pattern arc must be a [tail, head] string pair");
        b.pattern_arcs.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
}

void read_digraph(const json& d, InstanceBuilder& b) {
    check_keys(d, "digraph", {"vertices", "arcs"});
    if (!d.contains("vertices")) throw validation_error("digraph.vertices missing");
    if (!d.contains("arcs")) throw validation_error("digraph.arcs missing");
    b.vertices = string_list(d["vertices"], "digraph.vertices");
    if (!d["arcs"].is_array()) throw validation_error("digraph.arcs must be an array");
    for (auto& e : d["arcs"]) {
        check_keys(e, "digraph arc", {"tail", "head", "color"});
        for (const char* f : {"tail", "head", "color"})
            if (!e.contains(f) || !e[f].is_string())
                throw validation_error(std::string("digraph arc needs string field \"") + f + "\"");
        b.arcs.push_back({e["tail"].get<std::string>(), e["head"].get<std::string>(),
                          e["color"].get<std::string>()});
    }
}

void read_partition(const json& p, InstanceBuilder& b) {
    check_keys(p, "partition", {"classes", "side1", "side2"});
    for (const char* f : {"classes", "side1", "side2"})
        if (!p.contains(f))
            throw validation_error(std::string("partition.") + f + " missing");
    if (!p["classes"].is_array())
        throw validation_error("partition.classes must be an array");
    for (auto& cls : p["classes"])
        b.classes.push_back(string_list(cls, "partition class"));
    auto index_list = [](const json& j, const std::string& where) {
        if (!j.is_array()) throw validation_error(where + " must be an array");
        std::vector<int> r;
        for (auto& e : j) {
            if (!e.is_number_integer())
                throw validation_error(where + " must contain 1-based class indices");
            r.push_back(e.get<int>());
        }
        return r;
    };
    b.side1 = index_list(p["side1"], "partition.side1");
    b.side2 = index_list(p["side2"], "partition.side2");
    b.has_partition = true;
}

} // namespace

Instance parse_instance_text(const std::string& text) {
    json j = parse_json(text);
    check_keys(j, "instance", {"pattern", "digraph", "partition"});
    for (const char* f : {"pattern", "digraph", "partition"})
        if (!j.contains(f))
            throw validation_error(std::string("top-level \"") + f + "\" block missing");
    InstanceBuilder b;
    read_pattern(j["pattern"], b);
    read_digraph(j["digraph"], b);
    read_partition(j["partition"], b);
    return b.build();
}

Instance parse_colored_text(const std::string& text) {
    json j = parse_json(text);
    check_keys(j, "instance", {"pattern", "digraph", "partition"});
    if (j.contains("partition"))
        throw validation_error("mode pipelines construct the partition themselves; "
                               "remove the \"partition\" block");
    if (!j.contains("digraph"))
        throw validation_error("top-level \"digraph\" block missing");
    InstanceBuilder b;
    read_digraph(j["digraph"], b);
    if (j.contains("pattern")) {
        read_pattern(j["pattern"], b);
        if (!b.pattern_arcs.empty())
            throw validation_error("mode pipelines construct the pattern arcs themselves; "
                                   "leave pattern.arcs empty or drop the block");
        std::set<std::string> used;
        for (auto& a : b.arcs) used.insert(a.color);
        std::set<std::string> declared(b.colors.begin(), b.colors.end());
        if (declared != used)
            throw validation_error("mode pipelines define the pattern over the colors "
                                   "used by arcs; pattern.vertices must match exactly");
    } else {
        b.has_pattern = false;
    }
    return b.build();
}

std::string serialize_instance(const Instance& inst) {
    json j;
    json pat;
    pat["vertices"] = inst.pattern.colors;
    pat["arcs"] = json::array();
    for (auto& [a, b] : inst.pattern.arcs)
        pat["arcs"].push_back({inst.cname(a), inst.cname(b)});
    j["pattern"] = pat;

    json dig;
    dig["vertices"] = inst.digraph.vertices;
    dig["arcs"] = json::array();
    for (auto& a : inst.digraph.arcs)
        dig["arcs"].push_back({{"tail", inst.vname(a.tail)},
                               {"head", inst.vname(a.head)},
                               {"color", inst.cname(a.color)}});
    j["digraph"] = dig;

    if (inst.partition) {
        json part;
        part["classes"] = json::array();
        for (auto& cls : inst.partition->classes) {
            json names = json::array();
            for (Color c : cls) names.push_back(inst.cname(c));
            part["classes"].push_back(names);
        }
        json s1 = json::array(), s2 = json::array();
        for (int i = 0; i < inst.partition->k(); ++i)
            (inst.partition->side[i] == 1 ? s1 : s2).push_back(i + 1);
        part["side1"] = s1;
        part["side2"] = s2;
        j["partition"] = part;
    }
    return j.dump(2) + "\n";
}

std::string serialize_pattern(const PatternDigraph& p) {
    json pat;
    pat["vertices"] = p.colors;
    pat["arcs"] = json::array();
    for (auto& [a, b] : p.arcs)
        pat["arcs"].push_back({p.colors[a], p.colors[b]});
    json j;
    j["pattern"] = pat;
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write file: " + path);
    out << content;
}

namespace {
std::string quoted(const std::string& s) {
    std::string r = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r + "\"";
}
} // namespace

std::string dot_digraph(const Instance& inst) {
    std::ostringstream os;
    os << "digraph D {\n";
    for (auto& v : inst.digraph.vertices) os << "  " << quoted(v) << ";\n";
    for (auto& a : inst.digraph.arcs) {
        os << "  " << quoted(inst.vname(a.tail)) << " -> " << quoted(inst.vname(a.head))
           << " [label=" << quoted(inst.cname(a.color));
        if (inst.partitioned()) {
            int side = inst.arc_side[inst.digraph.arc_index(a.tail, a.head)];
            os << (side == 1 ? ", style=solid" : ", style=dashed");
        }
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string dot_pattern(const PatternDigraph& p, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (auto& c : p.colors) os << "  " << quoted(c) << ";\n";
    for (auto& [a, b] : p.arcs)
        os << "  " << quoted(p.colors[a]) << " -> " << quoted(p.colors[b]) << ";\n";
    os << "}\n";
    return os.str();
}

std::string dot_node_link(const std::vector<std::string>& node_labels,
                          const std::vector<std::pair<int, int>>& arcs,
                          const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (size_t i = 0; i < node_labels.size(); ++i)
        os << "  n" << i << " [label=" << quoted(node_labels[i]) << "];\n";
    for (auto& [a, b] : arcs) os << "  n" << a << " -> n" << b << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace hkd
