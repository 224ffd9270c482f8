#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mtrl/rng.hpp"

namespace mtrl {

// Episode-indexed task assignment: (model index, initial state), 0-based.
struct TaskSchedule {
    std::vector<std::pair<int, int>> entries;

    int episodes() const { return static_cast<int>(entries.size()); }
    int model_of(int episode) const { return entries.at(episode).first; }
    int start_of(int episode) const { return entries.at(episode).second; }
};

// i.i.d. uniform over the given model subset, fixed initial state
TaskSchedule uniform_schedule(const std::vector<int>& model_subset, int episodes, int start,
                              Rng& rng);

// Episodes 100-150 and 180-200 (1-based, inclusive) assign model 3; all other
// episodes draw uniformly from models {0, 1, 2}. Initial state fixed at 5.
TaskSchedule paper_schedule(int episodes, Rng& rng);

// Episodes 1..M enumerate models 0..M-1 in order; the remainder comes from
// the tail generator.
TaskSchedule all_models_first_schedule(int num_models, int start,
                                       const std::function<TaskSchedule()>& tail);

TaskSchedule fixed_schedule_from_list(const std::vector<std::pair<int, int>>& assignments,
                                      int num_models, int num_states);

// One "model_index,initial_state" line per episode.
void save_schedule(const TaskSchedule& schedule, const std::string& path);
TaskSchedule load_schedule(const std::string& path);

}  // namespace mtrl
