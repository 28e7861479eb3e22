#pragma once

#include <string_view>

namespace autoreason::detail {

extern const std::string_view kAutoReasonExtraction;
extern const std::string_view kBaseHotpotQa;
extern const std::string_view kBaseStrategyQa;
extern const std::string_view kCot;
extern const std::string_view kScorer;
extern const std::string_view kFinalAnswer;
extern const std::string_view kAnswerFormatStrategyQa;
extern const std::string_view kAnswerFormatHotpotQa;

}  // namespace autoreason::detail
