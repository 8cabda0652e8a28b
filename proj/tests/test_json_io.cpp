#include <gtest/gtest.h>

#include "popmatch/json_io.hpp"

using namespace popmatch;

namespace {

const char* kExample = R"({
  "agents": [
    {
      "id": "i1",
      "weight": 6
    },
    {
      "id": "i2",
      "weight": 3
    },
    {
      "id": "i3",
      "weight": 2
    }
  ],
  "objects": [
    {
      "id": "o1",
      "capacity": 1
    },
    {
      "id": "o2",
      "capacity": 1
    },
    {
      "id": "o3",
      "capacity": 1
    }
  ],
  "preferences": {
    "i1": [
      "o1",
      "o2",
      "o3"
    ],
    "i2": [
      "o1",
      "o2",
      "o3"
    ],
    "i3": [
      "o1",
      "o2",
      "o3"
    ]
  }
}
)";

std::string path_of(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const InputError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(ProblemJson, ParsesTheExampleFile) {
  const Problem p = parse_problem(kExample);
  EXPECT_EQ(p.agent_count(), 3u);
  EXPECT_EQ(p.object_count(), 3u);
  EXPECT_EQ(p.weight(0), 6);
  EXPECT_EQ(p.preference(2), (Preference{0, 1, 2}));
  EXPECT_TRUE(p.unit_capacities());
}

TEST(ProblemJson, CanonicalTextRoundTripsByteForByte) {
  const Problem p = parse_problem(kExample);
  EXPECT_EQ(serialize_problem(p), kExample);
  EXPECT_EQ(parse_problem(serialize_problem(p)), p);
}

TEST(ProblemJson, ErrorsCarryJsonPointers) {
  EXPECT_EQ(path_of(R"({"agents":[{"id":"x","weight":0}],"objects":[],"preferences":{"x":[]}})"),
            "/agents/0/weight");
  EXPECT_EQ(path_of(R"({"agents":[{"id":"x","weight":1}],"objects":[{"id":"a","capacity":1}],
                       "preferences":{"x":["b"]}})"),
            "/preferences/x/0");
  EXPECT_EQ(path_of(R"({"agents":[{"id":"x","weight":1}],"objects":[{"id":"a","capacity":1}],
                       "preferences":{"x":["a","a"]}})"),
            "/preferences/x/1");
  EXPECT_EQ(path_of(R"({"agents":[{"id":"x","weight":1}],"objects":[],"preferences":{}})"),
            "/preferences/x");
  EXPECT_EQ(path_of(R"({"agents":[{"id":"x","weight":1},{"id":"x","weight":1}],"objects":[],
                       "preferences":{"x":[]}})"),
            "/agents/1/id");
  EXPECT_EQ(path_of(R"({"agents":[],"objects":[{"id":"a","capacity":0}],"preferences":{}})"),
            "/objects/0/capacity");
  EXPECT_EQ(path_of(R"({"agents":[],"objects":[],"preferences":{},"extra":1})"), "");
  EXPECT_EQ(path_of(R"({"agents":[{"id":"x","weight":1.5}],"objects":[],"preferences":{"x":[]}})"),
            "/agents/0/weight");
  EXPECT_EQ(path_of(R"({"agents":[],"objects":[],"preferences":{"ghost":[]}})"), "/preferences/ghost");
}

TEST(ProblemJson, MalformedTextIsAnInputError) {
  EXPECT_THROW(parse_problem("{"), InputError);
  EXPECT_THROW(parse_problem("[]"), InputError);
}

TEST(MatchingJson, RoundTripsWithNulls) {
  const Problem p = parse_problem(kExample);
  const Matching mu{1, kUnassigned, 0};
  const std::string text = serialize_matching(p, mu);
  EXPECT_NE(text.find("\"i2\": null"), std::string::npos);
  EXPECT_EQ(parse_matching(p, text), mu);
}

TEST(MatchingJson, RejectsUnknownAndMissingAgents) {
  const Problem p = parse_problem(kExample);
  EXPECT_THROW(parse_matching(p, R"({"assignment":{"i1":"o1","i2":null}})"), InputError);
  EXPECT_THROW(parse_matching(p, R"({"assignment":{"i1":"o1","i2":null,"i3":null,"i9":null}})"),
               InputError);
  EXPECT_THROW(parse_matching(p, R"({"assignment":{"i1":"o9","i2":null,"i3":null}})"), InputError);
  EXPECT_THROW(parse_matching(p, R"({"assignment":{"i1":3,"i2":null,"i3":null}})"), InputError);
}

TEST(Rendering, CanonicalAgentOrderAndEmptySet) {
  const Problem p = parse_problem(kExample);
  EXPECT_EQ(render_matching(p, Matching{0, 1, kUnassigned}), "i1→o1\ni2→o2\ni3→∅\n");
  EXPECT_EQ(compact(p, Matching{0, 1, kUnassigned}), "i1:o1 i2:o2 i3:-");
}
