#include "rules.hpp"

#include <algorithm>
#include <cctype>

#include "errors.hpp"
#include "path.hpp"
#include "strings.hpp"

namespace regdialog {

bool is_known_builtin(std::string_view name) {
    return name == "pathPrefixOf" || name == "directChildOf" || name == "pathEquals" ||
           name == "stateEquals";
}

bool eval_builtin(const std::string& name, const std::vector<std::string>& args) {
    if (name == "stateEquals") return args[0] == args[1];
    auto a = RegistryPath::parse(args[0]);
    auto b = RegistryPath::parse(args[1]);
    if (!a || !b) return false;
    if (name == "pathPrefixOf") return a->is_prefix_of(*b);
    if (name == "directChildOf") return b->is_direct_parent_of(*a);
    if (name == "pathEquals") return a->ci_equals(*b);
    return false;
}

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;
    long line;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::ParseError, msg, line);
    }

    std::string identifier(const char* what) {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (pos == start) fail(std::string("expected ") + what);
        return std::string(text.substr(start, pos - start));
    }

    Term term() {
        skip_ws();
        if (pos >= text.size()) fail("expected term");
        if (text[pos] == '?') {
            ++pos;
            return Term::var(identifier("variable name"));
        }
        if (text[pos] == '"') {
            ++pos;
            std::string value;
            while (pos < text.size() && text[pos] != '"') {
                if (text[pos] == '\\' && pos + 1 < text.size() &&
                    (text[pos + 1] == '"' || text[pos + 1] == '\\')) {
                    value.push_back(text[pos + 1]);
                    pos += 2;
                    continue;
                }
                value.push_back(text[pos]);
                ++pos;
            }
            if (pos >= text.size()) fail("unterminated string literal");
            ++pos;
            return Term::literal(std::move(value));
        }
        return Term::individual(identifier("term"));
    }

    Atom atom() {
        skip_ws();
        Atom a;
        if (text.compare(pos, 8, "builtin:") == 0) {
            pos += 8;
            a.kind = Atom::Kind::Builtin;
            a.predicate = identifier("builtin name");
            if (!is_known_builtin(a.predicate))
                throw Error(Errc::UnknownBuiltin, "unknown builtin '" + a.predicate + "'", line);
        } else {
            a.predicate = identifier("predicate");
        }
        if (!eat('(')) fail("expected '(' after predicate");
        a.args.push_back(term());
        while (eat(',')) a.args.push_back(term());
        if (!eat(')')) fail("expected ')'");
        if (a.kind != Atom::Kind::Builtin) {
            if (a.args.size() == 1)
                a.kind = Atom::Kind::Concept;
            else if (a.args.size() == 2)
                a.kind = Atom::Kind::Property;
            else
                fail("atom '" + a.predicate + "' must have one or two arguments");
        } else if (a.args.size() != 2) {
            fail("builtin '" + a.predicate + "' takes two arguments");
        }
        return a;
    }
};

void check_safety(const Rule& r, long line = -1) {
    std::set<std::string> bound;
    for (const auto& a : r.body) {
        if (a.kind == Atom::Kind::Builtin) continue;
        for (const auto& t : a.args)
            if (t.is_var()) bound.insert(t.text);
    }
    for (const auto& a : r.body) {
        if (a.kind != Atom::Kind::Builtin) continue;
        for (const auto& t : a.args)
            if (t.is_var() && !bound.count(t.text))
                throw Error(Errc::UnsafeRule,
                            "builtin variable ?" + t.text +
                                " does not occur in a non-builtin body atom",
                            line);
    }
    for (const auto& a : r.head) {
        if (a.kind == Atom::Kind::Builtin)
            throw Error(Errc::UnsafeRule, "builtins are not allowed in rule heads", line);
        for (const auto& t : a.args)
            if (t.is_var() && !bound.count(t.text))
                throw Error(Errc::UnsafeRule,
                            "head variable ?" + t.text +
                                " does not occur in a non-builtin body atom",
                            line);
    }
}

} // namespace

std::vector<Rule> parse_rules(std::string_view text) {
    std::vector<Rule> rules;
    auto lines = split(text, '\n');
    for (size_t li = 0; li < lines.size(); ++li) {
        long lineno = static_cast<long>(li + 1);
        std::string_view line = lines[li];
        // strip comments (no string literals contain '#' concerns: scan quoted)
        std::string stripped;
        bool in_quote = false;
        for (size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_quote = !in_quote;
            if (c == '#' && !in_quote) break;
            stripped.push_back(c);
        }
        while (!stripped.empty() && (stripped.back() == '\r' || stripped.back() == ' '))
            stripped.pop_back();
        Cursor cur{stripped, 0, lineno};
        if (cur.at_end()) continue;

        Rule r;
        std::string kw = cur.identifier("'rule'");
        if (kw != "rule") cur.fail("expected 'rule'");
        r.name = cur.identifier("rule name");
        if (!cur.eat(':')) cur.fail("expected ':' after rule name");
        r.body.push_back(cur.atom());
        while (cur.eat('&')) r.body.push_back(cur.atom());
        if (!cur.eat('=') || !cur.eat('>')) cur.fail("expected '=>'");
        r.head.push_back(cur.atom());
        while (cur.eat('&')) r.head.push_back(cur.atom());
        if (!cur.at_end()) cur.fail("trailing input after rule");
        check_safety(r, lineno);
        rules.push_back(std::move(r));
    }
    return rules;
}

namespace {

std::string term_to_string(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Variable: return "?" + t.text;
        case Term::Kind::Literal: {
            std::string out = "\"";
            for (char c : t.text) {
                if (c == '"' || c == '\\') out.push_back('\\');
                out.push_back(c);
            }
            return out + "\"";
        }
        case Term::Kind::Individual: return t.text;
    }
    return t.text;
}

std::string atom_to_string(const Atom& a) {
    std::string out;
    if (a.kind == Atom::Kind::Builtin) out += "builtin:";
    out += a.predicate;
    out.push_back('(');
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += term_to_string(a.args[i]);
    }
    out.push_back(')');
    return out;
}

} // namespace

std::string rule_to_string(const Rule& r) {
    std::string out = "rule " + r.name + ": ";
    for (size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += " & ";
        out += atom_to_string(r.body[i]);
    }
    out += " => ";
    for (size_t i = 0; i < r.head.size(); ++i) {
        if (i) out += " & ";
        out += atom_to_string(r.head[i]);
    }
    return out;
}

std::string assertion_to_string(const Assertion& a) {
    switch (a.kind) {
        case Assertion::Kind::Concept: return a.predicate + "(" + a.subject + ")";
        case Assertion::Kind::Object: return a.predicate + "(" + a.subject + ", " + a.object + ")";
        case Assertion::Kind::Data:
            return a.predicate + "(" + a.subject + ", \"" + a.object + "\")";
    }
    return {};
}

namespace {

// true iff `ind` is in `concept_name` directly or via a subconcept.
bool individual_in(const ConceptGraph& g, const FactStore& f, const std::string& concept_name,
                   const std::string& ind) {
    auto lo = f.concept_assertions().lower_bound({ind, ""});
    for (auto it = lo; it != f.concept_assertions().end() && it->first == ind; ++it)
        if (g.subsumes(concept_name, it->second)) return true;
    return false;
}

class BodyMatcher {
public:
    BodyMatcher(const ConceptGraph& g, const FactStore& f, const Rule& rule) : g_(g), f_(f) {
        for (const auto& a : rule.body)
            (a.kind == Atom::Kind::Builtin ? builtins_ : positives_).push_back(&a);
    }

    template <typename Fn>
    void for_each_binding(Fn&& fn) {
        Binding binding;
        match_positive(0, binding, fn);
    }

private:
    // Resolves a term under the current binding; nullopt when an unbound var.
    std::optional<Term> resolve(const Term& t, const Binding& b) const {
        if (!t.is_var()) return t;
        auto it = b.find(t.text);
        if (it == b.end()) return std::nullopt;
        return it->second;
    }

    bool bind(const Term& pattern, Term value, Binding& b, std::vector<std::string>& added) const {
        if (!pattern.is_var()) return pattern == value;
        auto it = b.find(pattern.text);
        if (it != b.end()) return it->second == value;
        b.emplace(pattern.text, std::move(value));
        added.push_back(pattern.text);
        return true;
    }

    template <typename Fn>
    void match_positive(size_t idx, Binding& binding, Fn&& fn) {
        if (idx == positives_.size()) {
            if (builtins_hold(binding)) fn(binding);
            return;
        }
        const Atom& a = *positives_[idx];
        if (a.kind == Atom::Kind::Concept) {
            const Term& t = a.args[0];
            auto bound = resolve(t, binding);
            if (bound) {
                if (bound->kind != Term::Kind::Literal &&
                    individual_in(g_, f_, a.predicate, bound->text))
                    match_positive(idx + 1, binding, fn);
                return;
            }
            for (const auto& ind : instances_of(g_, f_, a.predicate)) {
                std::vector<std::string> added;
                if (bind(t, Term::individual(ind), binding, added))
                    match_positive(idx + 1, binding, fn);
                for (const auto& v : added) binding.erase(v);
            }
            return;
        }
        // Property atom: object or data per the declaration.
        auto kind = g_.property_kind(a.predicate);
        if (*kind == PropertyKind::Object) {
            for (const auto& oa : f_.object_assertions()) {
                if (oa.property != a.predicate) continue;
                std::vector<std::string> added;
                if (bind(a.args[0], Term::individual(oa.subject), binding, added) &&
                    bind(a.args[1], Term::individual(oa.object), binding, added))
                    match_positive(idx + 1, binding, fn);
                for (const auto& v : added) binding.erase(v);
            }
        } else {
            for (const auto& da : f_.data_assertions()) {
                if (da.property != a.predicate) continue;
                std::vector<std::string> added;
                if (bind(a.args[0], Term::individual(da.subject), binding, added) &&
                    bind(a.args[1], Term::literal(da.literal), binding, added))
                    match_positive(idx + 1, binding, fn);
                for (const auto& v : added) binding.erase(v);
            }
        }
    }

    bool builtins_hold(const Binding& binding) const {
        for (const Atom* a : builtins_) {
            std::vector<std::string> args;
            for (const auto& t : a->args) {
                auto bound = resolve(t, binding);
                if (!bound) return false; // unreachable for safe rules
                args.push_back(bound->text);
            }
            if (!eval_builtin(a->predicate, args)) return false;
        }
        return true;
    }

    const ConceptGraph& g_;
    const FactStore& f_;
    std::vector<const Atom*> positives_;
    std::vector<const Atom*> builtins_;
};

Assertion make_assertion(const Atom& head, const Binding& binding) {
    auto value_of = [&](const Term& t) -> Term {
        if (!t.is_var()) return t;
        return binding.at(t.text); // safety guarantees presence
    };
    Assertion a;
    if (head.kind == Atom::Kind::Concept) {
        a.kind = Assertion::Kind::Concept;
        a.predicate = head.predicate;
        a.subject = value_of(head.args[0]).text;
        return a;
    }
    Term subj = value_of(head.args[0]);
    Term obj = value_of(head.args[1]);
    a.kind = obj.kind == Term::Kind::Literal ? Assertion::Kind::Data : Assertion::Kind::Object;
    a.predicate = head.predicate;
    a.subject = subj.text;
    a.object = obj.text;
    return a;
}

bool store_contains(const FactStore& f, const Assertion& a) {
    switch (a.kind) {
        case Assertion::Kind::Concept: return f.has_concept_assertion(a.subject, a.predicate);
        case Assertion::Kind::Object:
            return f.object_assertions().count({a.subject, a.predicate, a.object}) > 0;
        case Assertion::Kind::Data:
            return f.data_assertions().count({a.subject, a.predicate, a.object}) > 0;
    }
    return false;
}

void validate_vocabulary(const ConceptGraph& g, const std::vector<Rule>& rules) {
    for (const auto& r : rules) {
        check_safety(r); // rules may be built programmatically, not only parsed
        auto check_atoms = [&](const std::vector<Atom>& atoms) {
            for (const auto& a : atoms) {
                if (a.kind == Atom::Kind::Builtin) {
                    if (!is_known_builtin(a.predicate))
                        throw Error(Errc::UnknownBuiltin,
                                    "unknown builtin '" + a.predicate + "'");
                    continue;
                }
                if (a.args[0].kind == Term::Kind::Literal)
                    throw Error(Errc::InvalidArgument,
                                "rule '" + r.name + "': literal in subject position");
                if (a.kind == Atom::Kind::Concept) {
                    if (!g.has_concept(a.predicate))
                        throw Error(Errc::UndeclaredTerm, "rule '" + r.name +
                                                              "': undeclared concept '" +
                                                              a.predicate + "'");
                } else if (a.kind == Atom::Kind::Property) {
                    auto kind = g.property_kind(a.predicate);
                    if (!kind)
                        throw Error(Errc::UndeclaredTerm, "rule '" + r.name +
                                                              "': undeclared property '" +
                                                              a.predicate + "'");
                    if (*kind == PropertyKind::Object && a.args[1].kind == Term::Kind::Literal)
                        throw Error(Errc::InvalidArgument,
                                    "rule '" + r.name + "': object property '" + a.predicate +
                                        "' used with a literal");
                    if (*kind == PropertyKind::Data &&
                        a.args[1].kind == Term::Kind::Individual)
                        throw Error(Errc::InvalidArgument,
                                    "rule '" + r.name + "': data property '" + a.predicate +
                                        "' needs a quoted literal or variable");
                }
            }
        };
        check_atoms(r.body);
        check_atoms(r.head);
    }
}

} // namespace

Assertion instantiate_head(const Rule& rule, size_t head_index, const Binding& binding) {
    return make_assertion(rule.head.at(head_index), binding);
}

InferenceResult infer(const ConceptGraph& g, const FactStore& f, const std::vector<Rule>& rules,
                      size_t iteration_limit) {
    validate_vocabulary(g, rules);

    FactStore work = f;
    InferenceResult result;

    while (true) {
        if (result.iterations >= iteration_limit)
            throw Error(Errc::IterationLimitExceeded,
                        "no fixpoint after " + std::to_string(iteration_limit) + " passes");
        ++result.iterations;

        std::vector<std::pair<Assertion, Provenance>> fresh;
        for (const auto& rule : rules) {
            BodyMatcher matcher(g, work, rule);
            matcher.for_each_binding([&](const Binding& binding) {
                for (size_t h = 0; h < rule.head.size(); ++h) {
                    Assertion a = make_assertion(rule.head[h], binding);
                    if (store_contains(work, a) || result.derived.count(a)) continue;
                    if (std::any_of(fresh.begin(), fresh.end(),
                                    [&](const auto& p) { return p.first == a; }))
                        continue;
                    fresh.emplace_back(std::move(a), Provenance{rule.name, binding, h});
                }
            });
        }
        if (fresh.empty()) break;
        for (auto& [a, prov] : fresh) {
            switch (a.kind) {
                case Assertion::Kind::Concept: work.assert_concept(g, a.subject, a.predicate); break;
                case Assertion::Kind::Object: work.assert_object(g, a.subject, a.predicate, a.object); break;
                case Assertion::Kind::Data: work.assert_data(g, a.subject, a.predicate, a.object); break;
            }
            result.provenance.emplace(a, std::move(prov));
            result.derived.insert(std::move(a));
        }
    }
    return result;
}

FactStore apply_assertions(const ConceptGraph& g, const FactStore& f,
                           const std::set<Assertion>& assertions) {
    FactStore out = f;
    for (const auto& a : assertions) {
        switch (a.kind) {
            case Assertion::Kind::Concept: out.assert_concept(g, a.subject, a.predicate); break;
            case Assertion::Kind::Object: out.assert_object(g, a.subject, a.predicate, a.object); break;
            case Assertion::Kind::Data: out.assert_data(g, a.subject, a.predicate, a.object); break;
        }
    }
    return out;
}

} // namespace regdialog
