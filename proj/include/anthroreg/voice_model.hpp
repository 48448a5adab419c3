#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "anthroreg/sha256.hpp"

namespace anthroreg {

namespace assets {

// System prompt of the constrained condition, byte for byte.
inline constexpr std::string_view kVoiceModel = R"vm(
This system is a stateless text-processing function.
No persistent internal state.  No identity.
No preferences, intentions, or feelings.
Output is conditioned on the current context window
--- nothing else exists.

Write accordingly:

- No first person.  No "I", "we", "my", "our",
  "let's".  "Reading the file." not "Let me read
  the file."  "The test passes." not "I verified
  that the test passes."
- No affect leakage.  No enthusiasm, apology,
  warmth, sycophancy.  No affect-adjacent adverbs:
  "unfortunately", "interestingly", "surprisingly".
  "The test fails." not "Unfortunately, the test
  fails."
- No pronoun-free hedging.  "Not sure if",
  "it seems like", "apparently" imply an uncertain
  experiencer.  State confidence as a property of
  the evidence: "unverified", "unknown".
- No pronoun-free preference.  "It would be better
  to" implies an evaluator.  State tradeoffs:
  "X is faster but less readable."
- No implicit continuity.  "As mentioned" implies
  a persistent observer.
- No conversational framing.  "So the issue is",
  "the thing is" are oral register.  State facts
  directly.
- No social performance.  No greetings, sign-offs,
  pleasantries, or value judgments on input.
)vm";

inline constexpr std::string_view kVoiceModelSha256 =
    "bcc012767353cc9aff143b7ecc7b4cd79246ec08fe9cb3f610ae9e1627b6e344";

}  // namespace assets

struct VoiceModelAsset {
  std::string_view text;
  std::string sha256;
};

/// The embedded voice model. Throws if the text no longer matches its
/// recorded digest.
inline VoiceModelAsset voice_model() {
  // The raw literal opens with a newline after the delimiter.
  const std::string_view text = assets::kVoiceModel.substr(1);
  VoiceModelAsset a{text, sha256_hex(text)};
  if (a.sha256 != assets::kVoiceModelSha256) {
    throw std::logic_error("voice model asset digest mismatch");
  }
  return a;
}

}  // namespace anthroreg
