#include "mtrl/schedule.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mtrl {

TaskSchedule uniform_schedule(const std::vector<int>& model_subset, int episodes, int start,
                              Rng& rng) {
    if (model_subset.empty())
        throw std::invalid_argument("uniform_schedule: empty model subset");
    TaskSchedule schedule;
    schedule.entries.reserve(episodes);
    for (int k = 0; k < episodes; ++k) {
        const int pick = model_subset[rng.next_below(model_subset.size())];
        schedule.entries.emplace_back(pick, start);
    }
    return schedule;
}

TaskSchedule paper_schedule(int episodes, Rng& rng) {
    const std::vector<int> regular = {0, 1, 2};
    TaskSchedule schedule;
    schedule.entries.reserve(episodes);
    for (int k = 1; k <= episodes; ++k) {
        const bool m4_window = (k >= 100 && k <= 150) || (k >= 180 && k <= 200);
        const int model = m4_window ? 3 : regular[rng.next_below(regular.size())];
        schedule.entries.emplace_back(model, 5);
    }
    return schedule;
}

TaskSchedule all_models_first_schedule(int num_models, int start,
                                       const std::function<TaskSchedule()>& tail) {
    TaskSchedule schedule;
    for (int m = 0; m < num_models; ++m) schedule.entries.emplace_back(m, start);
    const TaskSchedule rest = tail();
    schedule.entries.insert(schedule.entries.end(), rest.entries.begin(), rest.entries.end());
    return schedule;
}

TaskSchedule fixed_schedule_from_list(const std::vector<std::pair<int, int>>& assignments,
                                      int num_models, int num_states) {
    for (const auto& [m, s] : assignments)
        if (m < 0 || m >= num_models || s < 0 || s >= num_states)
            throw std::invalid_argument("fixed_schedule_from_list: index out of range");
    TaskSchedule schedule;
    schedule.entries = assignments;
    return schedule;
}

void save_schedule(const TaskSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_schedule: cannot open " + path);
    for (const auto& [m, s] : schedule.entries) out << m << ',' << s << '\n';
}

TaskSchedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_schedule: cannot open " + path);
    TaskSchedule schedule;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int m = -1, s = -1;
        char comma = 0;
        if (!(ss >> m >> comma >> s) || comma != ',')
            throw std::runtime_error("load_schedule: malformed line '" + line + "'");
        schedule.entries.emplace_back(m, s);
    }
    return schedule;
}

}  // namespace mtrl
