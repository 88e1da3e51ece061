#include "aura/text.hpp"

#include <gtest/gtest.h>

namespace aura {
namespace {

TEST(Utf8Test, DecodesMultibyteSequences) {
  const std::string s = "caf\xC3\xA9 \xE2\x9C\x93 \xF0\x9F\x98\x80";
  const auto cps = utf8::decode(s);
  ASSERT_EQ(cps.size(), 8u);
  EXPECT_EQ(cps[3], U'é');
  EXPECT_EQ(cps[5], U'✓');
  EXPECT_EQ(cps[7], U'\U0001F600');
  EXPECT_EQ(utf8::length(s), 8u);
}

TEST(Utf8Test, EncodeRoundTrips) {
  const std::string s = "h\xC3\xA9llo \xF0\x9F\x98\x80!";
  const auto cps = utf8::decode(s);
  EXPECT_EQ(utf8::encode(cps, 0, cps.size()), s);
  EXPECT_EQ(utf8::encode(cps, 1, 2), "\xC3\xA9");
}

TEST(Utf8Test, InvalidBytesDoNotStall) {
  const std::string bad = "a\xFF\xC3" "b";
  EXPECT_GE(utf8::decode(bad).size(), 2u);
}

TEST(TextTest, SplitWhitespaceMatchesPythonSplit) {
  const auto parts = split_whitespace("  one\ttwo\n\nthree\xC2\xA0" "four  ");
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(parts[0], "one");
  EXPECT_EQ(parts[2], "three");
  EXPECT_EQ(parts[3], "four");
  EXPECT_TRUE(split_whitespace("   ").empty());
}

TEST(TextTest, StripIfRemovesOnlyTheEnds) {
  EXPECT_EQ(strip_if("\"hello, world!\"", is_word_punct), "hello, world");
  EXPECT_EQ(strip_if("\xE2\x80\x9Cquoted\xE2\x80\x9D", is_word_punct), "quoted");
  EXPECT_EQ(strip_if("!!!", is_word_punct), "");
}

TEST(TextTest, AsciiLowerLeavesNonAsciiAlone) {
  EXPECT_EQ(ascii_lower("HeLLo \xC3\x89"), "hello \xC3\x89");
}

TEST(ResponseTextTest, TokensDropPunctuationOnlyPieces) {
  const ResponseText t("Honestly -- I LOVE it!!! ... ok.");
  EXPECT_EQ(t.word_count(), 5u);
  EXPECT_EQ(t.tokens()[0], "honestly");
  EXPECT_EQ(t.tokens()[1], "i");
  EXPECT_EQ(t.tokens()[4], "ok");
}

TEST(ResponseTextTest, EmptyTextHasNoWords) {
  EXPECT_EQ(ResponseText("").word_count(), 0u);
  EXPECT_EQ(ResponseText(" \n\t ").word_count(), 0u);
}

}  // namespace
}  // namespace aura
