// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cimc/cim.hpp"
#include "support.hpp"

namespace cimc {
namespace {

TEST(ExtractJson, StripsFences) {
  const std::string body = R"({"b1":{"type":"Board"}})";
  EXPECT_EQ(extract_json_payload("```json\n" + body + "\n```"), body);
  EXPECT_EQ(extract_json_payload("Here you go:\n```\n" + body + "\n```\nDone."), body);
}

TEST(ExtractJson, BareObjectIsIdentity) {
  const std::string body = "{\n \"a\": {\"type\": \"X\"}\n}";
  EXPECT_EQ(extract_json_payload(body), body);
}

TEST(ExtractJson, ProseHasNoJson) {
  try {
    extract_json_payload("Sure! Here is the model:");
    FAIL();
  } catch (const CimError& e) {
    EXPECT_EQ(e.code(), CimErrc::NoJsonFound);
  }
}

TEST(ExtractJson, SkipsUnbalancedAndBracesInStrings) {
  EXPECT_EQ(extract_json_payload(R"(note {oops then {"a":{"type":"}{"}})"), R"({"a":{"type":"}{"}})");
}

TEST(ParseCim, TemplateShapedSingleInstance) {
  auto r = parse_cim(test::fixture("alloc_sample.cim.json"));
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(r.model.size(), 9u);
  const ObjectSpec* core0 = r.model.find("core0");
  ASSERT_NE(core0, nullptr);
  EXPECT_EQ(core0->type, "Core");
  ASSERT_EQ(core0->references.size(), 1u);
  EXPECT_EQ(core0->references[0], (LinkSpec{"assignment", "VM", "VM1"}));

  auto one = parse_cim(R"({"x": {"type": "Board", "attributes": [], "associations": {"compositions": [], "references": []}}})");
  EXPECT_TRUE(one.diagnostics.empty());
  EXPECT_EQ(one.model.size(), 1u);
}

TEST(ParseCim, EmptyObject) {
  auto r = parse_cim("{}");
  EXPECT_TRUE(r.model.empty());
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(ParseCim, MissingTypeDropsObject) {
  auto r = parse_cim(R"({"a": {"attributes": []}, "b": {"type": "Board"}})");
  EXPECT_EQ(r.model.size(), 1u);
  EXPECT_TRUE(r.model.contains("b"));
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::MissingTypeField), 1u);
  EXPECT_EQ(r.sourceObjects, 2u);
  EXPECT_EQ(r.droppedObjects, 1u);
}

TEST(ParseCim, NotAnObject) {
  for (const char* text : {"[1,2]", "\"s\"", "42"}) {
    try {
      parse_cim(text);
      FAIL() << text;
    } catch (const CimError& e) {
      EXPECT_EQ(e.code(), CimErrc::NotAJsonObject);
    }
  }
  try {
    parse_cim("{\"a\": ");
    FAIL();
  } catch (const CimError& e) {
    EXPECT_EQ(e.code(), CimErrc::InvalidJson);
  }
}

TEST(ParseCim, ScalarValuesCanonicalized) {
  auto r = parse_cim(R"({"a": {"type": "T", "attributes": [
    {"dataType": "EInt", "attributeName": "i", "value": 7},
    {"dataType": "EBoolean", "attributeName": "b", "value": true},
    {"dataType": "EString", "attributeName": "n", "value": null}]}})");
  const auto& attrs = r.model.find("a")->attributes;
  ASSERT_EQ(attrs.size(), 3u);
  EXPECT_EQ(attrs[0].value, "7");
  EXPECT_EQ(attrs[1].value, "true");
  EXPECT_EQ(attrs[2].value, "");
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::NullValue), 1u);
}

TEST(ParseCim, TopLevelAssociationAlias) {
  auto r = parse_cim(R"({"a": {"type": "T", "compositions": [{"associationName": "c", "associatedClassName": "T", "instanceID": "b"}]},
                        "b": {"type": "T"}})");
  EXPECT_EQ(r.model.find("a")->compositions.size(), 1u);
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::AssociationsAlias), 1u);
  EXPECT_FALSE(has_errors(r.diagnostics));
}

TEST(ParseCim, DuplicateIdLastWins) {
  auto r = parse_cim(R"({"a": {"type": "First"}, "a": {"type": "Second"}})");
  ASSERT_EQ(r.model.size(), 1u);
  EXPECT_EQ(r.model.find("a")->type, "Second");
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::DuplicateInstanceId), 1u);
}

TEST(ParseCim, MalformedEntries) {
  auto r = parse_cim(R"({"a": {"type": "T", "attributes": [{"value": "1"}, 5],
    "associations": {"compositions": [{"associationName": "x"}], "references": []}}})");
  EXPECT_EQ(r.model.size(), 1u);
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::MalformedAttribute), 2u);
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::MalformedLink), 1u);
  EXPECT_TRUE(r.model.find("a")->attributes.empty());
}

TEST(ParseCim, UnknownKeysWarn) {
  auto r = parse_cim(R"({"a": {"type": "T", "comment": "hi"}})");
  EXPECT_EQ(count_code(r.diagnostics, DiagCode::UnknownKey), 1u);
  EXPECT_FALSE(has_errors(r.diagnostics));
}

// Retained plus dropped objects account for every source object, and every
// drop is backed by a diagnostic.
TEST(ParseCim, PartialModelAccounting) {
  const std::string text = R"({"a": {"type": "T"}, "b": 3, "c": {"attributes": []}, "d": {"type": ""},
    "e": {"type": "T", "attributes": [{"bad": 1}]}})";
  auto r = parse_cim(text);
  EXPECT_EQ(r.sourceObjects, 5u);
  EXPECT_EQ(r.model.size() + r.droppedObjects, r.sourceObjects);
  EXPECT_GE(r.diagnostics.size(), r.droppedObjects + 1);
}

TEST(ValidateStructure, DanglingTarget) {
  auto r = parse_cim(R"({"a": {"type": "T", "associations": {"compositions": [{"associationName": "c", "associatedClassName": "T", "instanceID": "x9"}]}}})");
  auto d = validate_structure(r.model);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, DiagCode::DanglingTargetId);
  EXPECT_NE(d[0].detail.find("x9"), std::string::npos);
}

TEST(ValidateStructure, ClosedModelIsClean) {
  EXPECT_TRUE(validate_structure(parse_cim(test::fixture("alloc_sample.cim.json")).model).empty());
}

TEST(ValidateStructure, SelfComposition) {
  auto r = parse_cim(R"({"a": {"type": "T", "associations": {"compositions": [{"associationName": "c", "associatedClassName": "T", "instanceID": "a"}]}}})");
  auto d = validate_structure(r.model);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].code, DiagCode::SelfComposition);
}

TEST(CimWriter, TemplateText) {
  const std::string t(cim_template());
  EXPECT_EQ(t.rfind("{\n \"<InstanceID>\": {\n  \"type\": \"<ClassName>\",", 0), 0u) << t;
  EXPECT_NE(t.find("\"instanceID\": \"<InstanceID>\""), std::string::npos);
}

// write then parse is the identity on random well-formed CIMs.
TEST(CimWriter, RoundtripRandom) {
  for (const char* file : {"alloc.ecore", "library.ecore", "statemachine.ecore"}) {
    const MetaModel m = test::load_fixture_metamodel(file);
    test::RandomCimGenerator gen(m, 17);
    for (int i = 0; i < 100; ++i) {
      const auto cim = gen.next(12, i % 3 == 0);
      auto back = parse_cim(write_cim(cim));
      EXPECT_FALSE(has_errors(back.diagnostics));
      EXPECT_EQ(back.model, cim) << write_cim(cim);
    }
  }
}

}  // namespace
}  // namespace cimc
