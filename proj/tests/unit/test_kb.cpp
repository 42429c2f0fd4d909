#include <doctest.h>

#include "errors.hpp"
#include "kb.hpp"

using namespace regdialog;

namespace {
RegistryPath P(const char* text) {
    auto p = RegistryPath::parse(text);
    REQUIRE(p);
    return *p;
}
} // namespace

TEST_CASE("seed knowledge base loads clean") {
    KnowledgeBase kb = seed_knowledge_base();
    CHECK(kb.graph.validated());
    CHECK(check_consistency(kb.graph, kb.facts).empty());
    CHECK(kb.annotations.size() == 9);
    CHECK(kb.rules.size() == 6);
}

TEST_CASE("seed taxonomy contains the expected relationships") {
    KnowledgeBase kb = seed_knowledge_base();
    const ConceptGraph& g = kb.graph;
    // multi-parent placements
    CHECK(g.subsumes("TheftCase", "CyberTheftCase"));
    CHECK(g.subsumes("CyberCrimeCase", "CyberTheftCase"));
    CHECK(g.subsumes("HackingCase", "CrackingCase"));
    CHECK(g.subsumes("DisruptiveCrimeCase", "CrackingCase"));
    CHECK(g.subsumes("IdentityTheftCase", "PhishingCase"));
    // the mirrored forensic resource branch
    CHECK(g.subsumes("SoftwareObject", "ForensicSoftwareObject"));
    CHECK(g.subsumes("ForensicResource", "ForensicSoftwareObject"));
    CHECK(g.subsumes("ServiceObject", "ForensicServiceObject"));
    CHECK(g.subsumes("DataCorrelationSoftwareObject", "ComparerSoftwareObject"));
    // registry structure
    CHECK(g.subsumes("DataFragmentObject", "RegistryKeyObject"));
    CHECK(g.subsumes("DataContainerObject", "RegistryKeyObject"));
    CHECK(g.subsumes("EvidenceObject", "DocumentEvidence"));
    CHECK(g.subsumes("EvidenceObject", "DocumentActivity"));
    CHECK(g.subsumes("PassiveEvidenceObject", "SoftwareEvidenceObject"));
    CHECK(g.subsumes("TemporalEvidenceObject", "SoftwareInstallationActivityObject"));
    // disjointness of the unlawful-material cases
    bool found = false;
    for (const auto& [a, b] : g.disjoint_pairs())
        if ((a == "PossessionOfUnlawfulMaterialCase" && b == "PropagationOfUnlawfulMaterialCase") ||
            (b == "PossessionOfUnlawfulMaterialCase" && a == "PropagationOfUnlawfulMaterialCase"))
            found = true;
    CHECK(found);
    // asserting both yields exactly one violation
    FactStore f = kb.facts;
    f.assert_concept(g, "suspect_case", "PropagationOfUnlawfulMaterialCase");
    f.assert_concept(g, "suspect_case", "PossessionOfUnlawfulMaterialCase");
    auto violations = check_consistency(g, f);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == OntologyViolationKind::DisjointnessViolation);
    CHECK(violations[0].subject == "suspect_case");
}

TEST_CASE("every concept the shipped data relies on is declared") {
    KnowledgeBase kb = seed_knowledge_base();
    static const char* needed[] = {
        // crime cases
        "CrimeCase", "NonCyberCrimeCase", "CyberCrimeCase", "TheftCase", "ViolentCrimeCase",
        "SexualCrimeCase", "CyberTheftCase", "CyberFraudCase", "PhishingCase",
        "IdentityTheftCase", "FinancialFraudCase", "DigitalMaterialCrimeCase",
        "PropagationOfUnlawfulMaterialCase", "PossessionOfUnlawfulMaterialCase",
        "DisruptiveCrimeCase", "CyberHarassmentCase", "CyberTrespassCase", "HackingCase",
        "CrackingCase",
        // information
        "Information", "DataObject", "ServiceObject", "SoftwareObject", "DataFragmentObject",
        "DataContainerObject", "RegistryKeyObject", "RegistryValueObject", "FileObject",
        "RegistryHiveObject", "EvidenceObject", "PassiveEvidenceObject", "TemporalEvidenceObject",
        "DocumentEvidence", "DocumentActivity", "DocumentEvidenceObject", "DocumentAccessedObject",
        "SoftwareEvidenceObject", "SystemStartupEvidenceObject", "SystemConfigurationEvidence",
        "SoftwareInstallationActivityObject", "SoftwareUninstallationActivityObject",
        "SoftwareConfigurationActivityObject", "UserFileActivityObject", "UserFolderActivityObject",
        "RPCUnitObject", "RPCGroupObject", "RPCContainerObject", "VolatileContainerObject",
        "RestorePointObject",
        // locations
        "InformationLocation", "DigitalLocation", "ConventionalLocation", "PhysicalLocation",
        "LogicalLocation", "SmallScaleDigitalDevice", "LargeScaleDigitalDevice",
        "RemoteResourceLocation", "LocalResourceLocation", "IntraFileLocation", "RegistryPath",
        // forensic resources
        "ForensicResource", "ForensicSoftwareObject", "ForensicServiceObject",
        "PreparationSoftwareObject", "DetectionSoftwareObject", "AcquisitionSoftwareObject",
        "EvidencePreservationSoftwareObject", "AnalysisSoftwareObject", "ReportingSoftwareObject",
        "BrowserSoftwareObject", "ConversionSoftwareObject", "FilteringSoftwareObject",
        "DataCorrelationSoftwareObject", "ComparerSoftwareObject",
        // actors
        "Actor", "ComputerisedActor", "HumanActor", "HumanOrganisation"};
    for (const char* name : needed) {
        INFO("missing concept: " << name);
        CHECK(kb.graph.has_concept(name));
    }
    for (const char* prop :
         {"hasKey", "hasValue", "isIn", "hasRegistryPath", "hasParentKey", "hasCommonKey",
          "belongsToSoftware", "isEvidenceOfSoftware", "hasSoftwareInstalled", "containsUnit",
          "contains", "takesAsInput", "returnsOutput"}) {
        INFO("missing property: " << prop);
        CHECK(kb.graph.property_kind(prop).has_value());
    }
    CHECK(kb.graph.property_kind("hasComparisonState") == PropertyKind::Data);
    CHECK(kb.graph.property_kind("hasLastModified") == PropertyKind::Data);
    // the comparer is registered as an individual of its tool concept
    CHECK(instances_of(kb.graph, kb.facts, "ComparerSoftwareObject").count("RPCompare") == 1);
}

TEST_CASE("annotation concepts are evidence or registry-key concepts") {
    KnowledgeBase kb = seed_knowledge_base();
    for (const auto& anno : kb.annotations) {
        CHECK_FALSE(anno.path.empty());
        for (const auto& c : anno.evidence_concepts) {
            INFO(anno.path.str() << " -> " << c);
            CHECK((kb.graph.subsumes("EvidenceObject", c) ||
                   kb.graph.subsumes("RegistryKeyObject", c)));
        }
        if (anno.owning_software) CHECK(kb.facts.has_individual(*anno.owning_software));
    }
}

TEST_CASE("annotated keys are queryable individuals in the seed store") {
    KnowledgeBase kb = seed_knowledge_base();
    auto evidence = instances_of(kb.graph, kb.facts, "EvidenceObject");
    CHECK(evidence.count(
              "kb:\\Software\\Microsoft\\Windows\\CurrentVersion\\Explorer\\RecentDocs") == 1);
    auto docs = instances_of(kb.graph, kb.facts, "DocumentEvidenceObject");
    CHECK(docs.count("kb:\\Software\\Microsoft\\Windows\\CurrentVersion\\Explorer\\RecentDocs") ==
          1);
}

TEST_CASE("lookup_key: exact, case-insensitive, and inherited matches") {
    KnowledgeBase kb = seed_knowledge_base();
    auto rd = lookup_key(kb.annotations,
                         P("Software\\Microsoft\\Windows\\CurrentVersion\\Explorer\\RecentDocs"));
    REQUIRE(rd);
    CHECK_FALSE(rd->inherited);
    CHECK(rd->annotation->evidence_concepts ==
          std::set<std::string>{"DocumentActivity", "DocumentEvidence", "RegistryKeyObject"});

    auto rd_ci = lookup_key(
        kb.annotations, P("SOFTWARE\\microsoft\\WINDOWS\\currentversion\\explorer\\RECENTDOCS"));
    REQUIRE(rd_ci);
    CHECK(rd_ci->annotation == rd->annotation);

    auto run = lookup_key(kb.annotations, P("Software\\Microsoft\\Windows\\CurrentVersion\\Run"));
    REQUIRE(run);
    CHECK(run->annotation->evidence_concepts.count("SoftwareEvidenceObject") == 1);
    CHECK(run->annotation->evidence_concepts.count("SystemStartupEvidenceObject") == 1);

    // a child of an annotated branch inherits only the software attribution
    auto child = lookup_key(kb.annotations, P("Software\\Adobe\\Acrobat Reader\\7.0\\AVGeneral"));
    REQUIRE(child);
    CHECK(child->inherited);
    CHECK(child->annotation->path.ci_equals(P("Software\\Adobe\\Acrobat Reader\\7.0")));
    CHECK(child->annotation->owning_software == "AcrobatReader");

    CHECK_FALSE(lookup_key(kb.annotations, P("System\\Select")));
}

TEST_CASE("grouping specs implement the manufacturer-product convention") {
    auto specs = default_grouping_specs();

    auto group_for = [&](const char* path) -> std::optional<RegistryPath> {
        std::optional<RegistryPath> best;
        for (const auto& spec : specs) {
            auto key = spec.group_key_for(P(path));
            if (key && (!best || key->depth() > best->depth())) best = key;
        }
        return best;
    };

    auto acrobat = group_for("Software\\Adobe\\Acrobat Reader\\7.0\\Installer");
    REQUIRE(acrobat);
    CHECK(acrobat->rooted_str() == "\\Software\\Adobe\\Acrobat Reader");

    auto bags = group_for("Software\\Microsoft\\Windows\\ShellNoRoam\\Bags\\1875");
    REQUIRE(bags);
    CHECK(bags->rooted_str() == "\\Software\\Microsoft\\Windows\\ShellNoRoam");

    auto fileexts = group_for(
        "Software\\Microsoft\\Windows\\CurrentVersion\\Explorer\\FileExts\\.zip");
    REQUIRE(fileexts);
    CHECK(fileexts->rooted_str() ==
          "\\Software\\Microsoft\\Windows\\CurrentVersion\\Explorer\\FileExts");

    // manufacturer-only keys group under themselves
    auto vendor_only = group_for("Software\\Adobe");
    REQUIRE(vendor_only);
    CHECK(vendor_only->rooted_str() == "\\Software\\Adobe");

    CHECK_FALSE(group_for("SYSTEM\\Select"));
    CHECK_FALSE(group_for("Software"));
}

TEST_CASE("loading the data directory matches the embedded seed") {
    KnowledgeBase dir = load_knowledge_base_dir(REGDIALOG_DATA_DIR);
    KnowledgeBase seed = seed_knowledge_base();
    CHECK(dir.graph.concepts() == seed.graph.concepts());
    CHECK(dir.graph.isa_edges() == seed.graph.isa_edges());
    CHECK(dir.annotations.size() == seed.annotations.size());
    CHECK(dir.rules == seed.rules);
    CHECK(dir.facts.concept_assertions() == seed.facts.concept_assertions());
}

TEST_CASE("annotation files are validated against the graph") {
    KnowledgeBase kb = seed_knowledge_base();
    CHECK_THROWS_AS(
        parse_annotations("anno a\\b\tH\tNotAConcept\t-\tdesc\n", kb.graph, kb.facts), Error);
    CHECK_THROWS_AS(
        parse_annotations("anno a\\b\tH\tCrimeCase\t-\tdesc\n", kb.graph, kb.facts),
        Error); // not evidence
    CHECK_THROWS_AS(
        parse_annotations("anno a\\b\tH\tDocumentEvidence\tGhostware\tdesc\n", kb.graph, kb.facts),
        Error); // unknown software
    CHECK_THROWS_AS(parse_annotations("anno a\\b\tH\tDocumentEvidence\t-\n", kb.graph, kb.facts),
                    Error); // missing field
    auto ok = parse_annotations("anno a\\b\tH\tDocumentEvidence\tAcrobatReader\tdesc\n", kb.graph,
                                kb.facts);
    REQUIRE(ok.size() == 1);
    CHECK(ok[0].owning_software == "AcrobatReader");
}
