#include "mtrl/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mtrl {

using nlohmann::json;

std::string model_set_to_json(const ModelSet& set) {
    set.validate();
    const int S = set.num_states();
    const int A = set.num_actions();
    json doc;
    doc["S"] = S;
    doc["A"] = A;
    doc["M"] = set.size();

    json reward = json::array();
    for (int s = 0; s < S; ++s) {
        json row = json::array();
        for (int a = 0; a < A; ++a) row.push_back(set.shared_reward().at(s, a));
        reward.push_back(std::move(row));
    }
    doc["reward"] = std::move(reward);

    json kernels = json::array();
    json labels = json::array();
    for (const auto& model : set.models) {
        json kernel = json::array();
        for (int s = 0; s < S; ++s) {
            json per_action = json::array();
            for (int a = 0; a < A; ++a) {
                json row = json::array();
                for (int s2 = 0; s2 < S; ++s2) row.push_back(model.kernel.at(s, a, s2));
                per_action.push_back(std::move(row));
            }
            kernel.push_back(std::move(per_action));
        }
        kernels.push_back(std::move(kernel));
        labels.push_back(model.label);
    }
    doc["kernels"] = std::move(kernels);
    doc["labels"] = std::move(labels);
    if (set.lam) doc["lambda"] = *set.lam;
    if (set.d) doc["d"] = *set.d;
    if (set.dtilde) doc["dtilde"] = *set.dtilde;
    return doc.dump(2);
}

ModelSet model_set_from_json(const std::string& text) {
    const json doc = json::parse(text);
    const int S = doc.at("S").get<int>();
    const int A = doc.at("A").get<int>();
    const int M = doc.at("M").get<int>();

    RewardTable reward(S, A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) reward.at(s, a) = doc.at("reward").at(s).at(a).get<double>();

    ModelSet set;
    for (int m = 0; m < M; ++m) {
        TransitionKernel kernel(S, A);
        const auto& k = doc.at("kernels").at(m);
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a)
                for (int s2 = 0; s2 < S; ++s2)
                    kernel.at(s, a, s2) = k.at(s).at(a).at(s2).get<double>();
        std::string label = "m" + std::to_string(m + 1);
        if (doc.contains("labels") && m < static_cast<int>(doc.at("labels").size()))
            label = doc.at("labels").at(m).get<std::string>();
        set.models.push_back(MdpModel{std::move(kernel), reward, std::move(label)});
    }
    if (doc.contains("lambda")) set.lam = doc.at("lambda").get<double>();
    if (doc.contains("d")) set.d = doc.at("d").get<double>();
    if (doc.contains("dtilde")) set.dtilde = doc.at("dtilde").get<double>();
    set.validate();
    return set;
}

void save_model_set(const ModelSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model_set: cannot open " + path);
    out << model_set_to_json(set) << '\n';
}

ModelSet load_model_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model_set: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_set_from_json(text);
}

}  // namespace mtrl
