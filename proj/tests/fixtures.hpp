#pragma once

#include <array>
#include <string_view>

namespace testing {

// Rule bodies with the outcome they were reported for; syntax fixtures.
inline constexpr std::array<std::string_view, 6> kReferenceRules{
    "!DOMESTIC_WORK_ABSENT && MEDICAL_EMERGENCY_ABSENT |-> SENTIMENT_HIGH",
    "!FAMILY_ABSENT && !SENTIMENT_POS ##[0:20000] !OFFICE_ABSENT ##[0:10000] "
    "DOMESTIC_WORK_ABSENT && MEDICAL_EMERGENCY_ABSENT |-> SENTIMENT_HIGH",
    "!FAMILY_ABSENT && OFFICE_ABSENT && !SENTIMENT_POS ##[0:20000] !AGGRESSION_ABSENT && !FAMILY_HIGH && "
    "OFFICE_ABSENT ##[0:10000] DOMESTIC_WORK_ABSENT && MEDICAL_EMERGENCY_ABSENT |-> SENTIMENT_HIGH",
    "!FAMILY_ABSENT && OFFICE_ABSENT && !SENTIMENT_POS ##[0:30000] !OFFICE_ABSENT ##[0:20000] "
    "AGGRESSION_ABSENT && !FAMILY_HIGH && OFFICE_ABSENT ##[0:10000] DOMESTIC_WORK_ABSENT && "
    "MEDICAL_EMERGENCY_ABSENT |-> SENTIMENT_HIGH",
    "!FAMILY_ABSENT && !SENTIMENT_POS ##[0:30000] FAMILY_HIGH && SENTIMENT_VERY_POS ##[0:10000] "
    "DOMESTIC_WORK_ABSENT |-> SENTIMENT_LOW",
    "!FAMILY_ABSENT && OFFICE_ABSENT && !SENTIMENT_POS ##[0:30000] DOMESTIC_WORK_ABSENT && "
    "SENTIMENT_VERY_POS ##[0:20000] !FAMILY_HIGH ##[0:10000] DOMESTIC_WORK_ABSENT |-> SENTIMENT_LOW",
};

}  // namespace testing
