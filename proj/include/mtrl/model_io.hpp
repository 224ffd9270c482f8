#pragma once

#include <string>

#include "mtrl/separability.hpp"

namespace mtrl {

// JSON document layout:
//   {"S": int, "A": int, "M": int,
//    "reward": [[...]],              S x A
//    "kernels": [[[[...]]]],         M x S x A x S
//    "labels": [...],
//    "lambda": real?, "d": real?, "dtilde": real?}
std::string model_set_to_json(const ModelSet& set);
ModelSet model_set_from_json(const std::string& text);

void save_model_set(const ModelSet& set, const std::string& path);
ModelSet load_model_set(const std::string& path);

}  // namespace mtrl
