#include "aura/actions.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace aura {
namespace {

using testing::FakeChatClient;

ActionType keyword(const char* q) {
  return KeywordIntentClassifier().classify(q).primary;
}

TEST(ActionTest, NamesAndOrder) {
  EXPECT_EQ(kAllActions.size(), 5u);
  EXPECT_EQ(to_string(kAllActions[0]), "specification");
  EXPECT_EQ(to_string(kAllActions[4]), "continuation");
  EXPECT_EQ(parse_action("Topic Probe"), ActionType::topic_probe);
  EXPECT_THROW(parse_action("question"), DataError);
}

TEST(KeywordClassifierTest, CanonicalQuestions) {
  EXPECT_EQ(keyword("Could you give me a specific example of when that happened?"),
            ActionType::specification);
  EXPECT_EQ(keyword("Could you tell me more about why that matters to you?"),
            ActionType::elaboration);
  EXPECT_EQ(keyword("How do you feel about the dining options on campus?"),
            ActionType::topic_probe);
  EXPECT_EQ(keyword("Thank you for sharing that with me."), ActionType::validation);
  EXPECT_EQ(keyword("Is there anything else on your mind?"),
            ActionType::continuation);
}

TEST(KeywordClassifierTest, RequestOutranksAcknowledgment) {
  const auto label = KeywordIntentClassifier().classify(
      "Thanks for sharing! Could you give a specific example?");
  EXPECT_EQ(label.primary, ActionType::specification);
  EXPECT_TRUE(label.secondary.count(ActionType::validation));
  EXPECT_NO_THROW(validate(label));
}

TEST(KeywordClassifierTest, EmptyQuestionIsAContractViolation) {
  EXPECT_THROW(KeywordIntentClassifier().classify("  "), ContractViolation);
}

TEST(IntentLabelTest, ValidateRejectsRepeatedPrimary) {
  IntentLabel l;
  l.primary = ActionType::validation;
  l.secondary = {ActionType::validation};
  EXPECT_THROW(validate(l), ContractViolation);
  l.secondary.clear();
  l.confidence = 1.5;
  EXPECT_THROW(validate(l), ContractViolation);
}

TEST(LlmClassifierTest, ParsesJsonReply) {
  auto client = FakeChatClient::replying(
      "```json\n{\"primary\": \"elaboration\", \"secondary\": [\"validation\", "
      "\"elaboration\"], \"confidence\": 0.9, \"reasoning\": \"asks why\"}\n```");
  LlmIntentClassifier c(client);
  const auto label = c.classify("Why is that?");
  EXPECT_EQ(label.primary, ActionType::elaboration);
  EXPECT_EQ(label.secondary, std::set<ActionType>{ActionType::validation});
  EXPECT_DOUBLE_EQ(label.confidence, 0.9);
  EXPECT_EQ(label.rationale, "asks why");
  const auto req = client->requests().at(0);
  EXPECT_TRUE(req.json_response);
  EXPECT_EQ(req.messages.at(1).content, "Question: Why is that?");
}

TEST(LlmClassifierTest, MalformedReplyKeepsPayload) {
  LlmIntentClassifier c(FakeChatClient::replying("not json at all"));
  try {
    c.classify("Why?");
    FAIL() << "expected ClassificationError";
  } catch (const ClassificationError& e) {
    EXPECT_EQ(e.raw_payload(), "not json at all");
  }
  LlmIntentClassifier unknown(FakeChatClient::replying("{\"primary\": \"joke\"}"));
  EXPECT_THROW(unknown.classify("Why?"), ClassificationError);
  LlmIntentClassifier missing(FakeChatClient::replying("{\"secondary\": []}"));
  EXPECT_THROW(missing.classify("Why?"), ClassificationError);
}

TEST(LlmClassifierTest, TransportErrorPropagates) {
  LlmIntentClassifier c(FakeChatClient::failing("down"));
  EXPECT_THROW(c.classify("Why?"), LlmError);
}

TEST(LabeledQuestionTest, FileRoundTrip) {
  LabeledQuestion q{"Why?", {ActionType::elaboration, {ActionType::validation}, 0.8, "r"}};
  const auto path = ::testing::TempDir() + "/labeled.jsonl";
  write_labeled_questions(path, {q, q});
  const auto back = read_labeled_questions(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], q);
  std::ofstream(path) << "{\"question\": \"x\"}\n";
  EXPECT_THROW(read_labeled_questions(path), DataError);
}

TEST(DistributionTest, CountsAndFractions) {
  std::vector<IntentLabel> labels(4);
  labels[0].primary = labels[1].primary = labels[2].primary =
      ActionType::specification;
  labels[3].primary = ActionType::validation;
  const auto d = distribution(labels);
  EXPECT_EQ(d.at(ActionType::specification).count, 3u);
  EXPECT_DOUBLE_EQ(d.at(ActionType::validation).fraction, 0.25);
  EXPECT_TRUE(distribution({}).empty());
}

}  // namespace
}  // namespace aura
