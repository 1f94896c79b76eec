#pragma once

#include <string>

namespace conflab {

struct ConditionCheck {
    std::string condition;
    bool passed = false;
    double margin = 0.0;  // positive slack when passed
    std::string detail;
};

enum class PrecisionMode { floating, exact };

}  // namespace conflab
