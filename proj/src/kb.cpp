#include "kb.hpp"

#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "kb_embedded.hpp"
#include "strings.hpp"

namespace regdialog {

std::optional<KeyLookup> lookup_key(const std::vector<KeyAnnotation>& annotations,
                                    const RegistryPath& path) {
    const KeyAnnotation* best = nullptr;
    bool inherited = false;
    for (const auto& anno : annotations) {
        if (anno.path.ci_equals(path)) return KeyLookup{&anno, false};
        if (anno.path.is_prefix_of(path)) {
            if (!best || anno.path.depth() > best->path.depth()) {
                best = &anno;
                inherited = true;
            }
        }
    }
    if (!best) return std::nullopt;
    return KeyLookup{best, inherited};
}

std::vector<GroupingKeySpec> default_grouping_specs() {
    auto path = [](const char* text) { return *RegistryPath::parse(text); };
    std::vector<GroupingKeySpec> specs;
    specs.push_back(GroupingKeySpec::prefix_pattern(path("Software"), 2));
    specs.push_back(GroupingKeySpec::explicit_path(path("Software\\Microsoft\\Windows\\ShellNoRoam")));
    specs.push_back(GroupingKeySpec::explicit_path(
        path("Software\\Microsoft\\Windows\\CurrentVersion\\Explorer\\FileExts")));
    return specs;
}

std::vector<KeyAnnotation> parse_annotations(std::string_view text, const ConceptGraph& graph,
                                             const FactStore& facts) {
    std::vector<KeyAnnotation> out;
    auto lines = split(text, '\n');
    for (size_t li = 0; li < lines.size(); ++li) {
        long lineno = static_cast<long>(li + 1);
        std::string_view line = lines[li];
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("anno ", 0) != 0)
            throw Error(Errc::ParseError, "expected 'anno <path>\\t<hive>\\t...'", lineno);
        auto fields = split(line.substr(5), '\t');
        if (fields.size() != 5)
            throw Error(Errc::ParseError, "anno line needs 5 tab-separated fields", lineno);

        KeyAnnotation anno;
        auto path = RegistryPath::parse(fields[0]);
        if (!path || path->empty())
            throw Error(Errc::ParseError, "bad annotation path '" + fields[0] + "'", lineno);
        anno.path = std::move(*path);
        anno.hive = fields[1];
        for (const auto& concept_name : split(fields[2], ',')) {
            if (concept_name.empty())
                throw Error(Errc::ParseError, "empty concept in annotation", lineno);
            if (!graph.has_concept(concept_name))
                throw Error(Errc::UndeclaredTerm,
                            "annotation concept '" + concept_name + "' is not declared", lineno);
            if (!graph.subsumes("EvidenceObject", concept_name) &&
                !graph.subsumes("RegistryKeyObject", concept_name))
                throw Error(Errc::ParseError,
                            "annotation concept '" + concept_name +
                                "' is neither evidence nor a registry key concept",
                            lineno);
            anno.evidence_concepts.insert(concept_name);
        }
        if (fields[3] != "-") {
            if (!facts.has_individual(fields[3]))
                throw Error(Errc::UndeclaredTerm,
                            "annotation software '" + fields[3] + "' is not a known individual",
                            lineno);
            anno.owning_software = fields[3];
        }
        anno.description = fields[4];

        for (const auto& prev : out)
            if (prev.path.ci_equals(anno.path))
                throw Error(Errc::ParseError,
                            "duplicate annotation for '" + anno.path.str() + "'", lineno);
        out.push_back(std::move(anno));
    }
    return out;
}

namespace {

KnowledgeBase load_from_strings(std::string_view onto, std::string_view anno,
                                std::string_view rules) {
    KnowledgeBase kb;
    auto [graph, facts] = load_ontology(onto);
    kb.graph = std::move(graph);
    kb.facts = std::move(facts);
    kb.annotations = parse_annotations(anno, kb.graph, kb.facts);
    kb.grouping_specs = default_grouping_specs();
    if (!rules.empty()) kb.rules = parse_rules(rules);

    // Each annotated key becomes a "kb:" reference individual asserted into
    // its evidence concepts. Registry-key structural concepts are left to
    // concrete snapshot-derived individuals, which carry the timestamps the
    // structural restrictions demand.
    for (const auto& a : kb.annotations) {
        std::string name = "kb:" + a.path.rooted_str();
        bool created = false;
        for (const auto& c : a.evidence_concepts) {
            if (kb.graph.subsumes("RegistryKeyObject", c)) continue;
            kb.facts.assert_concept(kb.graph, name, c);
            created = true;
        }
        if (created && a.owning_software)
            kb.facts.assert_object(kb.graph, name, "belongsToSoftware", *a.owning_software);
    }
    return kb;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

KnowledgeBase seed_knowledge_base() {
    return load_from_strings(kEmbeddedOntology, kEmbeddedAnnotations, kEmbeddedRules);
}

KnowledgeBase load_knowledge_base_dir(const std::string& dir) {
    std::string onto = read_file(dir + "/dialog.onto");
    std::string anno = read_file(dir + "/keys.anno");
    std::string rules;
    {
        std::ifstream probe(dir + "/dialog.rules", std::ios::binary);
        if (probe) rules = read_file(dir + "/dialog.rules");
    }
    return load_from_strings(onto, anno, rules);
}

} // namespace regdialog
