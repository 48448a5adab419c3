#pragma once

// Umbrella header. The API adapter (anthropic_client.hpp) pulls in an HTTP
// stack and is not included here.

#include "anthroreg/conversation.hpp"
#include "anthroreg/corpus.hpp"
#include "anthroreg/detector.hpp"
#include "anthroreg/harness.hpp"
#include "anthroreg/lexicon.hpp"
#include "anthroreg/report.hpp"
#include "anthroreg/rule.hpp"
#include "anthroreg/scorer_client.hpp"
#include "anthroreg/stats.hpp"
#include "anthroreg/textprep.hpp"
#include "anthroreg/voice_model.hpp"
