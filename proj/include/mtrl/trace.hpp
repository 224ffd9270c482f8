#pragma once

#include <vector>

namespace mtrl {

struct StepRecord {
    int state;
    int action;
    double reward;
    int next_state;
};

using EpisodeTrace = std::vector<StepRecord>;

}  // namespace mtrl
