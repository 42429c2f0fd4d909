#include "ontology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "errors.hpp"
#include "strings.hpp"

namespace regdialog {

void ConceptGraph::declare_concept(const std::string& name) {
    concepts_.insert(name);
    validated_ = false;
}

void ConceptGraph::declare_isa(const std::string& child, const std::string& parent) {
    auto edge = std::make_pair(child, parent);
    if (std::find(isa_.begin(), isa_.end(), edge) == isa_.end()) isa_.push_back(edge);
    validated_ = false;
}

void ConceptGraph::declare_disjoint(const std::string& a, const std::string& b) {
    auto pair = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    if (std::find(disjoint_.begin(), disjoint_.end(), pair) == disjoint_.end())
        disjoint_.push_back(pair);
    validated_ = false;
}

void ConceptGraph::declare_property(const std::string& name, PropertyKind kind) {
    properties_[name] = kind;
}

void ConceptGraph::add_restriction(Restriction r) {
    restrictions_.push_back(std::move(r));
    validated_ = false;
}

std::optional<PropertyKind> ConceptGraph::property_kind(const std::string& name) const {
    auto it = properties_.find(name);
    if (it == properties_.end()) return std::nullopt;
    return it->second;
}

std::vector<OntologyViolation> ConceptGraph::validate() {
    std::vector<OntologyViolation> out;
    validated_ = false;

    auto declared = [&](const std::string& c) { return concepts_.count(c) > 0; };
    for (const auto& [child, parent] : isa_) {
        if (!declared(child))
            out.push_back({OntologyViolationKind::UndeclaredTerm, child, "isa child undeclared"});
        if (!declared(parent))
            out.push_back({OntologyViolationKind::UndeclaredTerm, parent, "isa parent undeclared"});
    }
    for (const auto& [a, b] : disjoint_) {
        if (!declared(a))
            out.push_back({OntologyViolationKind::UndeclaredTerm, a, "disjoint concept undeclared"});
        if (!declared(b))
            out.push_back({OntologyViolationKind::UndeclaredTerm, b, "disjoint concept undeclared"});
    }
    for (const auto& r : restrictions_) {
        if (!declared(r.concept_name))
            out.push_back({OntologyViolationKind::UndeclaredTerm, r.concept_name,
                           "restriction concept undeclared"});
        if (!properties_.count(r.property))
            out.push_back({OntologyViolationKind::UndeclaredTerm, r.property,
                           "restriction property undeclared"});
    }
    if (!out.empty()) return out;

    // index
    index_.clear();
    names_.assign(concepts_.begin(), concepts_.end());
    for (size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = i;

    const size_t n = names_.size();
    std::vector<std::vector<size_t>> parents(n);
    std::vector<size_t> outdeg(n, 0);            // number of parents still unresolved
    std::vector<std::vector<size_t>> children(n); // reverse edges for Kahn propagation
    for (const auto& [child, parent] : isa_) {
        size_t c = index_[child], p = index_[parent];
        parents[c].push_back(p);
        children[p].push_back(c);
        ++outdeg[c];
    }

    // Kahn's algorithm over child->parent edges: ancestors of a node are
    // complete once all its parents are resolved.
    const size_t words = (n + 63) / 64;
    ancestor_bits_.assign(n, std::vector<std::uint64_t>(words, 0));
    std::deque<size_t> ready;
    std::vector<size_t> remaining(n);
    for (size_t i = 0; i < n; ++i) {
        remaining[i] = parents[i].size();
        if (remaining[i] == 0) ready.push_back(i);
    }
    size_t resolved = 0;
    while (!ready.empty()) {
        size_t u = ready.front();
        ready.pop_front();
        ++resolved;
        ancestor_bits_[u][u / 64] |= (1ull << (u % 64));
        for (size_t p : parents[u])
            for (size_t w = 0; w < words; ++w) ancestor_bits_[u][w] |= ancestor_bits_[p][w];
        for (size_t c : children[u])
            if (--remaining[c] == 0) ready.push_back(c);
    }
    if (resolved != n) {
        for (size_t i = 0; i < n; ++i)
            if (remaining[i] > 0)
                out.push_back({OntologyViolationKind::IsaCycle, names_[i],
                               "concept participates in an is-a cycle"});
        ancestor_bits_.clear();
        return out;
    }

    auto reaches = [&](size_t desc, size_t anc) {
        return (ancestor_bits_[desc][anc / 64] >> (anc % 64)) & 1u;
    };
    for (const auto& [a, b] : disjoint_) {
        size_t ia = index_[a], ib = index_[b];
        if (ia == ib || reaches(ia, ib) || reaches(ib, ia))
            out.push_back({OntologyViolationKind::DisjointnessViolation, a,
                           "disjointness with itself or a related concept: " + a + " / " + b});
    }
    if (!out.empty()) return out;

    validated_ = true;
    return out;
}

size_t ConceptGraph::index_of(const std::string& name, const char* role) const {
    if (!validated_) throw Error(Errc::InvalidArgument, "concept graph not validated");
    auto it = index_.find(name);
    if (it == index_.end())
        throw Error(Errc::UndeclaredTerm, std::string("undeclared ") + role + " '" + name + "'");
    return it->second;
}

bool ConceptGraph::subsumes(const std::string& ancestor, const std::string& descendant) const {
    size_t a = index_of(ancestor, "concept");
    size_t d = index_of(descendant, "concept");
    return (ancestor_bits_[d][a / 64] >> (a % 64)) & 1u;
}

std::vector<std::string> ConceptGraph::ancestors_of(const std::string& name) const {
    size_t i = index_of(name, "concept");
    std::vector<std::string> out;
    for (size_t j = 0; j < names_.size(); ++j)
        if ((ancestor_bits_[i][j / 64] >> (j % 64)) & 1u) out.push_back(names_[j]);
    return out;
}

void FactStore::assert_concept(const ConceptGraph& g, const std::string& individual,
                               const std::string& concept_name) {
    if (!g.has_concept(concept_name))
        throw Error(Errc::UndeclaredTerm, "undeclared concept '" + concept_name + "'");
    individuals_.insert(individual);
    concept_assertions_.insert({individual, concept_name});
}

void FactStore::assert_object(const ConceptGraph& g, const std::string& subject,
                              const std::string& property, const std::string& object) {
    auto kind = g.property_kind(property);
    if (!kind) throw Error(Errc::UndeclaredTerm, "undeclared property '" + property + "'");
    if (*kind != PropertyKind::Object)
        throw Error(Errc::InvalidArgument, "'" + property + "' is a data property");
    if (!individuals_.count(subject))
        throw Error(Errc::UndeclaredTerm, "unknown individual '" + subject + "'");
    if (!individuals_.count(object))
        throw Error(Errc::UndeclaredTerm, "unknown individual '" + object + "'");
    object_assertions_.insert({subject, property, object});
}

void FactStore::assert_data(const ConceptGraph& g, const std::string& subject,
                            const std::string& property, const std::string& literal) {
    auto kind = g.property_kind(property);
    if (!kind) throw Error(Errc::UndeclaredTerm, "undeclared property '" + property + "'");
    if (*kind != PropertyKind::Data)
        throw Error(Errc::InvalidArgument, "'" + property + "' is an object property");
    if (!individuals_.count(subject))
        throw Error(Errc::UndeclaredTerm, "unknown individual '" + subject + "'");
    data_assertions_.insert({subject, property, literal});
}

std::set<std::string> instances_of(const ConceptGraph& g, const FactStore& f,
                                   const std::string& concept_name) {
    if (!g.has_concept(concept_name))
        throw Error(Errc::UndeclaredTerm, "undeclared concept '" + concept_name + "'");
    std::set<std::string> out;
    for (const auto& [ind, asserted] : f.concept_assertions())
        if (g.subsumes(concept_name, asserted)) out.insert(ind);
    return out;
}

std::vector<OntologyViolation> check_consistency(const ConceptGraph& g, const FactStore& f) {
    std::vector<OntologyViolation> out;

    // Upward closure of each individual's asserted concepts.
    std::map<std::string, std::set<std::string>> closure;
    for (const auto& [ind, c] : f.concept_assertions()) {
        auto& s = closure[ind];
        for (const auto& anc : g.ancestors_of(c)) s.insert(anc);
    }

    for (const auto& [ind, anc] : closure) {
        for (const auto& [a, b] : g.disjoint_pairs()) {
            if (anc.count(a) && anc.count(b))
                out.push_back({OntologyViolationKind::DisjointnessViolation, ind,
                               "asserted into disjoint concepts " + a + " and " + b});
        }
    }

    for (const auto& r : g.restrictions()) {
        auto kind = g.property_kind(r.property);
        for (const auto& ind : instances_of(g, f, r.concept_name)) {
            unsigned count = 0;
            if (kind == PropertyKind::Object) {
                for (const auto& oa : f.object_assertions())
                    if (oa.subject == ind && oa.property == r.property) ++count;
            } else {
                for (const auto& da : f.data_assertions())
                    if (da.subject == ind && da.property == r.property) ++count;
            }
            bool ok = true;
            const char* what = "";
            switch (r.kind) {
                case RestrictionKind::Min:
                    ok = count >= r.bound;
                    what = "min";
                    break;
                case RestrictionKind::Max:
                    ok = count <= r.bound;
                    what = "max";
                    break;
                case RestrictionKind::Exactly:
                    ok = count == r.bound;
                    what = "exactly";
                    break;
            }
            if (!ok)
                out.push_back({OntologyViolationKind::CardinalityViolation, ind,
                               r.concept_name + " requires " + r.property + " " + what + " " +
                                   std::to_string(r.bound) + ", found " + std::to_string(count)});
        }
    }

    std::sort(out.begin(), out.end(), [](const OntologyViolation& a, const OntologyViolation& b) {
        return std::tie(a.kind, a.subject, a.detail) < std::tie(b.kind, b.subject, b.detail);
    });
    return out;
}

namespace {

bool valid_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

// Tokenizes one line; a quoted token keeps its quotes. '#' outside quotes
// starts a comment.
std::vector<std::string> tokenize_line(std::string_view line, long lineno) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '"') {
            std::string tok = "\"";
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char d = line[i++];
                if (d == '\\' && i < line.size()) {
                    char e = line[i++];
                    if (e == '"' || e == '\\') {
                        tok.push_back(e);
                    } else {
                        throw Error(Errc::ParseError, "bad escape in string literal", lineno);
                    }
                    continue;
                }
                if (d == '"') {
                    closed = true;
                    break;
                }
                tok.push_back(d);
            }
            if (!closed) throw Error(Errc::ParseError, "unterminated string literal", lineno);
            tokens.push_back(std::move(tok));
            continue;
        }
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != '#')
            ++i;
        tokens.emplace_back(line.substr(start, i - start));
    }
    return tokens;
}

struct PendingFact {
    enum Kind { Ind, Rel, Data } kind;
    std::string a, b, c;
    long line;
};

} // namespace

std::pair<ConceptGraph, FactStore> load_ontology(std::string_view text) {
    ConceptGraph graph;
    std::vector<PendingFact> facts;

    auto lines = split(text, '\n');
    for (size_t li = 0; li < lines.size(); ++li) {
        long lineno = static_cast<long>(li + 1);
        auto tok = tokenize_line(lines[li], lineno);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        auto need = [&](size_t n) {
            if (tok.size() != n + 1)
                throw Error(Errc::ParseError, "'" + kw + "' expects " + std::to_string(n) +
                                                  " arguments", lineno);
        };
        auto ident = [&](const std::string& s) {
            if (!valid_identifier(s))
                throw Error(Errc::ParseError, "bad identifier '" + s + "'", lineno);
            return s;
        };
        auto bare = [&](const std::string& s) {
            if (s.empty() || s[0] == '"')
                throw Error(Errc::ParseError, "individual name may not be quoted", lineno);
            return s;
        };
        if (kw == "concept") {
            need(1);
            graph.declare_concept(ident(tok[1]));
        } else if (kw == "isa") {
            need(2);
            graph.declare_isa(ident(tok[1]), ident(tok[2]));
        } else if (kw == "disjoint") {
            need(2);
            graph.declare_disjoint(ident(tok[1]), ident(tok[2]));
        } else if (kw == "objprop") {
            need(1);
            graph.declare_property(ident(tok[1]), PropertyKind::Object);
        } else if (kw == "dataprop") {
            need(1);
            graph.declare_property(ident(tok[1]), PropertyKind::Data);
        } else if (kw == "restrict") {
            need(4);
            RestrictionKind rk;
            if (tok[3] == "min")
                rk = RestrictionKind::Min;
            else if (tok[3] == "max")
                rk = RestrictionKind::Max;
            else if (tok[3] == "exactly")
                rk = RestrictionKind::Exactly;
            else
                throw Error(Errc::ParseError, "restriction kind must be min/max/exactly", lineno);
            unsigned bound = 0;
            for (char c : tok[4]) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw Error(Errc::ParseError, "bad restriction bound '" + tok[4] + "'", lineno);
                bound = bound * 10 + static_cast<unsigned>(c - '0');
            }
            graph.add_restriction({ident(tok[1]), ident(tok[2]), rk, bound});
        } else if (kw == "ind") {
            need(2);
            facts.push_back({PendingFact::Ind, bare(tok[1]), ident(tok[2]), "", lineno});
        } else if (kw == "rel") {
            need(3);
            facts.push_back({PendingFact::Rel, bare(tok[1]), ident(tok[2]), bare(tok[3]), lineno});
        } else if (kw == "data") {
            need(3);
            if (tok[3].empty() || tok[3][0] != '"')
                throw Error(Errc::ParseError, "data literal must be quoted", lineno);
            facts.push_back(
                {PendingFact::Data, bare(tok[1]), ident(tok[2]), tok[3].substr(1), lineno});
        } else {
            throw Error(Errc::ParseError, "unknown directive '" + kw + "'", lineno);
        }
    }

    auto violations = graph.validate();
    if (!violations.empty()) {
        const auto& v = violations.front();
        Errc code = Errc::ParseError;
        if (v.kind == OntologyViolationKind::IsaCycle) code = Errc::IsaCycle;
        if (v.kind == OntologyViolationKind::UndeclaredTerm) code = Errc::UndeclaredTerm;
        throw Error(code, violation_to_string(v));
    }

    FactStore store;
    for (const auto& pf : facts) {
        try {
            switch (pf.kind) {
                case PendingFact::Ind:
                    store.assert_concept(graph, pf.a, pf.b);
                    break;
                case PendingFact::Rel:
                    store.assert_object(graph, pf.a, pf.b, pf.c);
                    break;
                case PendingFact::Data:
                    store.assert_data(graph, pf.a, pf.b, pf.c);
                    break;
            }
        } catch (const Error& e) {
            throw Error(e.code(), e.what(), pf.line);
        }
    }
    return {std::move(graph), std::move(store)};
}

std::string violation_to_string(const OntologyViolation& v) {
    const char* kind = "";
    switch (v.kind) {
        case OntologyViolationKind::DisjointnessViolation: kind = "disjointness"; break;
        case OntologyViolationKind::CardinalityViolation: kind = "cardinality"; break;
        case OntologyViolationKind::UndeclaredTerm: kind = "undeclared-term"; break;
        case OntologyViolationKind::IsaCycle: kind = "isa-cycle"; break;
    }
    return std::string(kind) + ": " + v.subject + ": " + v.detail;
}

} // namespace regdialog
